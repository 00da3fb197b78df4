mod common;

use common::{residual_slope, series_residual_dd, Dd};
use soliton_core::model::ModelParams;
use soliton_core::series::{coefficients_in, series_coefficients};

fn p(n: i64, a: f64) -> ModelParams {
    ModelParams::new(n, a).unwrap()
}

#[test]
fn double_double_arithmetic() {
    let third = Dd::new(1.0) / Dd::new(3.0);
    let back = third * Dd::new(3.0) - Dd::new(1.0);
    assert!(back.to_f64().abs() < 1e-31);
    let tiny = Dd::new(1.0) + Dd::new(1e-20);
    assert_eq!((tiny - Dd::new(1.0)).to_f64(), 1e-20);
}

#[test]
fn truncation_residual_first_unmatched_power() {
    // Truncating after t^order leaves r'' short by (order + 2)(order + 1) a_{order+2} t^order,
    // so the residual scales like t^order.
    for (n, a) in [(2, 1.0), (3, 0.5), (5, 3.0)] {
        let params = p(n, a);
        for order in [2, 4, 6, 8] {
            let slope = residual_slope(&params, order);
            assert!((slope - order as f64).abs() < 0.05, "n={n} a={a} order={order}: {slope}");
        }
    }
}

#[test]
fn leading_residual_term_matches_next_coefficient() {
    let params = p(4, 2.0);
    let full = series_coefficients(&params, 6).unwrap();
    let a6 = full.coefficient(6);
    let t = 1e-3;
    let res = series_residual_dd(&params, 4, t);
    // a_6 enters through r'' and (n - 1) r'/t: (6 * 5 + 6 * 3) a_6 t^4.
    let predicted = (48.0 * a6 * t.powi(4)).abs();
    assert!((res / predicted - 1.0).abs() < 1e-4, "{res} vs {predicted}");
}

#[test]
fn second_coefficient_matches_hand_formula() {
    for (n, a) in [(2, 1.0), (3, 0.5), (6, 3.0), (4, 1.7)] {
        let params = p(n, a);
        let c: Vec<Dd> = coefficients_in(&params, 4).unwrap();
        let a2 = 1.0 / (2.0 * n as f64);
        let a4 = (2.0 * (1.0 - a) * a2 * a2 + 8.0 * a2 * a2 * a2) / (4.0 * n as f64 + 8.0);
        assert_eq!(c[0].to_f64(), a2);
        assert!((c[1].to_f64() / a4 - 1.0).abs() < 1e-14);
    }
}

#[test]
fn launch_residual_below_double_rounding() {
    for (n, a) in [(2, 0.5), (6, 3.0), (3, 1.0)] {
        let res = series_residual_dd(&p(n, a), 8, 1e-2);
        assert!(res < 1e-14, "{res}");
    }
}
