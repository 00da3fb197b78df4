//! Taylor launch of the radial profile at the degenerate origin.
//!
//! The radial equation
//!
//! ```text
//! r'' / (1 + r'^2) + (n - 1) r' / t = (1 + r'^2)^((1 - alpha) / 2),   r(0) = r'(0) = 0
//! ```
//!
//! is singular at `t = 0`. Its smooth solution is even, `r = sum_k a_{2k} t^{2k}`,
//! and the coefficients follow from matching powers of `t` in the multiplied form
//! `r'' + (n - 1)(1 + q) r'/t = (1 + q)^((3 - alpha) / 2)` with `q = r'^2`. All series
//! are kept in the variable `x = t^2`; the fractional power is expanded with the
//! J.C.P. Miller recurrence rather than hand-derived formulas.

use std::ops::{Add, Div, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Result, SolitonError};
use crate::model::ModelParams;

pub const DEFAULT_ORDER: usize = 8;
pub const DEFAULT_SWITCH_RADIUS: f64 = 1e-2;
pub const MAX_ORDER: usize = 12;

/// Field operations needed by the coefficient recursion.
///
/// Implemented for `f64`; extended-precision types can implement it to
/// study truncation residuals below double rounding.
pub trait SeriesScalar:
    Copy
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn from_f64(x: f64) -> Self;
}

impl SeriesScalar for f64 {
    fn from_f64(x: f64) -> Self {
        x
    }
}

fn mul_trunc<T: SeriesScalar>(a: &[T], b: &[T], len: usize) -> Vec<T> {
    let zero = T::from_f64(0.0);
    (0..len)
        .map(|m| {
            let mut acc = zero;
            for k in 0..=m {
                if k < a.len() && m - k < b.len() {
                    acc = acc + a[k] * b[m - k];
                }
            }
            acc
        })
        .collect()
}

/// `(1 + q)^beta` truncated to `len` terms, for `q` with zero constant term.
pub(crate) fn pow_one_plus<T: SeriesScalar>(q: &[T], beta: T, len: usize) -> Vec<T> {
    let zero = T::from_f64(0.0);
    let mut f = vec![zero; len];
    if len == 0 {
        return f;
    }
    f[0] = T::from_f64(1.0);
    for m in 1..len {
        let mut acc = zero;
        for k in 1..=m {
            let qk = if k < q.len() { q[k] } else { zero };
            let weight = beta * T::from_f64(k as f64) - T::from_f64((m - k) as f64);
            acc = acc + weight * qk * f[m - k];
        }
        f[m] = acc / T::from_f64(m as f64);
    }
    f
}

/// Coefficients `a_2, a_4, ..., a_order` in any [`SeriesScalar`].
///
/// Each `a_{2j+2}` is computed from series truncated at `j + 1` terms, so a
/// coefficient does not depend on the requested order.
pub fn coefficients_in<T: SeriesScalar>(params: &ModelParams, order: usize) -> Result<Vec<T>> {
    check_order(order)?;
    let terms = order / 2;
    let n = T::from_f64(params.nf());
    let one = T::from_f64(1.0);
    let alpha = T::from_f64(params.alpha());
    let beta = (T::from_f64(3.0) - alpha) / T::from_f64(2.0);

    let mut a: Vec<T> = Vec::with_capacity(terms);
    for j in 0..terms {
        let len = j + 1;
        // P(x) = r'/t = sum 2k a_k x^(k-1)
        let p: Vec<T> = a
            .iter()
            .enumerate()
            .map(|(i, &ak)| T::from_f64(2.0 * (i + 1) as f64) * ak)
            .collect();
        // q(x) = x P(x)^2
        let p2 = mul_trunc(&p, &p, len);
        let mut q = vec![T::from_f64(0.0); len];
        for m in 1..len {
            q[m] = p2[m - 1];
        }
        let w = pow_one_plus(&q, beta, len);
        let qp = mul_trunc(&q, &p, len);
        let jf = j as f64;
        let denom = T::from_f64((2.0 * jf + 2.0) * (2.0 * jf + params.nf()));
        a.push((w[j] - (n - one) * qp[j]) / denom);
    }
    Ok(a)
}

fn check_order(order: usize) -> Result<()> {
    if order < 2 || order > MAX_ORDER || order % 2 != 0 {
        return Err(SolitonError::SeriesOrder(order));
    }
    Ok(())
}

/// Even Taylor polynomial of `r` at the origin.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OriginSeries {
    pub params: ModelParams,
    /// `coeffs[k]` multiplies `t^(2k + 2)`.
    pub coeffs: Vec<f64>,
    pub order: usize,
}

pub fn series_coefficients(params: &ModelParams, order: usize) -> Result<OriginSeries> {
    Ok(OriginSeries {
        params: *params,
        coeffs: coefficients_in::<f64>(params, order)?,
        order,
    })
}

impl OriginSeries {
    /// Coefficient of `t^power`; odd powers vanish.
    pub fn coefficient(&self, power: usize) -> f64 {
        if power == 0 || power % 2 == 1 {
            return 0.0;
        }
        self.coeffs.get(power / 2 - 1).copied().unwrap_or(0.0)
    }

    /// `(r, r', r'')` of the truncated polynomial at `t`.
    pub fn eval(&self, t: f64) -> Result<(f64, f64, f64)> {
        if !(t >= 0.0) {
            return Err(SolitonError::Negative {
                what: "series evaluation radius",
                value: t,
            });
        }
        let x = t * t;
        let (mut r, mut dr_over_t, mut ddr) = (0.0, 0.0, 0.0);
        // Horner in x, highest power first.
        for (k, &a) in self.coeffs.iter().enumerate().rev() {
            let pow = 2.0 * (k + 1) as f64;
            r = r * x + a;
            dr_over_t = dr_over_t * x + pow * a;
            ddr = ddr * x + pow * (pow - 1.0) * a;
        }
        Ok((r * x, dr_over_t * t, ddr))
    }

    /// `r'(t) / t`, finite at the origin.
    pub fn slope_over_t(&self, t: f64) -> f64 {
        let x = t * t;
        self.coeffs
            .iter()
            .enumerate()
            .rev()
            .fold(0.0, |acc, (k, &a)| acc * x + 2.0 * (k + 1) as f64 * a)
    }

    /// Residual of the radial equation on the truncated polynomial, in `f64`.
    pub fn residual(&self, t: f64) -> Result<f64> {
        let (_, dr, ddr) = self.eval(t)?;
        let w = 1.0 + dr * dr;
        let lhs = ddr / w + (self.params.nf() - 1.0) * self.slope_over_t(t);
        Ok(lhs - w.powf((1.0 - self.params.alpha()) / 2.0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn p(n: i64, a: f64) -> ModelParams {
        ModelParams::new(n, a).unwrap()
    }

    #[test]
    fn leading_coefficients() {
        for n in 2..=7 {
            for a in [0.5, 1.0, 2.0, 3.0] {
                let params = p(n, a);
                let s = series_coefficients(&params, 8).unwrap();
                let nf = n as f64;
                let a2 = 1.0 / (2.0 * nf);
                assert_relative_eq!(s.coefficient(2), a2, max_relative = 1e-15);
                let a4 = (2.0 * (1.0 - a) * a2 * a2 + 8.0 * a2 * a2 * a2) / (4.0 * nf + 8.0);
                assert_relative_eq!(s.coefficient(4), a4, max_relative = 1e-13, epsilon = 1e-18);
                for odd in [1, 3, 5, 7, 9] {
                    assert_eq!(s.coefficient(odd), 0.0);
                }
            }
        }
    }

    #[test]
    fn coefficients_do_not_depend_on_order() {
        let params = p(3, 0.7);
        let s8 = series_coefficients(&params, 8).unwrap();
        let s12 = series_coefficients(&params, 12).unwrap();
        assert_eq!(s8.coeffs[..], s12.coeffs[..4]);
    }

    #[test]
    fn origin_values() {
        let s = series_coefficients(&p(4, 2.0), 8).unwrap();
        let (r, dr, ddr) = s.eval(0.0).unwrap();
        assert_eq!((r, dr), (0.0, 0.0));
        assert_eq!(ddr, 2.0 * s.coefficient(2));
        assert_eq!(ddr, 0.25);
        assert!(s.eval(-1e-3).is_err());
    }

    #[test]
    fn slope_limit_and_sign() {
        for a in [0.5, 1.0, 3.0] {
            let params = p(3, a);
            let s = series_coefficients(&params, 8).unwrap();
            let mut prev = f64::INFINITY;
            for t in [1e-2, 1e-3, 1e-4, 1e-5] {
                let (_, dr, _) = s.eval(t).unwrap();
                assert!(dr > 0.0);
                let dev = (3.0 * params.g(dr) / t - 1.0).abs();
                assert!(dev < prev);
                prev = dev;
            }
            assert!(prev < 1e-9);
        }
    }

    #[test]
    fn rejects_bad_orders() {
        let params = p(2, 1.0);
        for order in [0, 1, 3, 14] {
            assert_eq!(
                series_coefficients(&params, order).unwrap_err(),
                SolitonError::SeriesOrder(order)
            );
        }
    }

    #[test]
    fn switch_radius_residual_is_tiny() {
        for n in 2..=6 {
            for a in [0.5, 1.0, 2.0, 3.0] {
                let s = series_coefficients(&p(n, a), DEFAULT_ORDER).unwrap();
                assert!(s.residual(DEFAULT_SWITCH_RADIUS).unwrap().abs() < 1e-14);
            }
        }
    }

    #[test]
    fn low_order_residual_slopes_in_double() {
        // Orders 2 and 4 sit well above double rounding at t in {1e-3, 1e-2}.
        for order in [2usize, 4] {
            let s = series_coefficients(&p(3, 2.0), order).unwrap();
            let r1 = s.residual(1e-3).unwrap().abs();
            let r2 = s.residual(1e-2).unwrap().abs();
            let slope = (r2 / r1).log10();
            assert!((slope - order as f64).abs() < 0.3, "order {order}: slope {slope}");
        }
    }

    #[test]
    fn miller_power_matches_binomial() {
        // (1 + x)^beta with beta = 0.5: 1, 1/2, -1/8, 1/16
        let q = [0.0, 1.0];
        let f = pow_one_plus(&q, 0.5, 4);
        assert_relative_eq!(f[1], 0.5);
        assert_relative_eq!(f[2], -0.125);
        assert_relative_eq!(f[3], 0.0625);
    }
}
