//! Equation parameters, the slope map `g` and the closed-form expansion
//! coefficients of the radial translator.

use serde::{Deserialize, Serialize};

use crate::error::{Result, SolitonError};

/// `|alpha - 1|` below this selects the logarithmic (alpha = 1) branch.
pub const LOG_BRANCH_EPS: f64 = 1e-12;

/// Validated equation instance: ambient dimension `n >= 2` and exponent `alpha > 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    n: usize,
    alpha: f64,
}

impl ModelParams {
    pub fn new(n: i64, alpha: f64) -> Result<Self> {
        validate_params(n, alpha)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `n` as a float, the form every formula consumes.
    pub fn nf(&self) -> f64 {
        self.n as f64
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn is_log_branch(&self) -> bool {
        (self.alpha - 1.0).abs() < LOG_BRANCH_EPS
    }

    /// Slope map `g(y) = y (1 + y^2)^((alpha - 1) / 2)`.
    pub fn g(&self, y: f64) -> f64 {
        g_eval(y, self)
    }

    /// `g'(y) = (1 + y^2)^((alpha - 3) / 2) (1 + alpha y^2)`.
    pub fn g_prime(&self, y: f64) -> f64 {
        let h = 1f64.hypot(y);
        h.powf(self.alpha - 3.0) * (1.0 + self.alpha * y * y)
    }
}

pub fn validate_params(n: i64, alpha: f64) -> Result<ModelParams> {
    if n < 2 {
        return Err(SolitonError::InvalidDimension(n));
    }
    if !alpha.is_finite() || alpha <= 0.0 {
        return Err(SolitonError::InvalidAlpha(alpha));
    }
    Ok(ModelParams {
        n: n as usize,
        alpha,
    })
}

/// `y (1 + y^2)^((alpha - 1) / 2)`, evaluated through `hypot` so large slopes
/// do not overflow the square.
pub fn g_eval(y: f64, params: &ModelParams) -> f64 {
    if params.is_log_branch() {
        return y;
    }
    y * 1f64.hypot(y).powf(params.alpha - 1.0)
}

/// Inverse of [`g_eval`] on `[0, inf)`.
///
/// Safeguarded Newton inside a bisection bracket. The starting bracket is
/// `[0, max(v, 2 v^(1/alpha))]`, doubled until it contains the root.
pub fn g_invert(v: f64, params: &ModelParams) -> Result<f64> {
    if !(v >= 0.0) {
        return Err(SolitonError::Negative {
            what: "g_invert argument",
            value: v,
        });
    }
    if v == 0.0 {
        return Ok(0.0);
    }
    if !v.is_finite() {
        return Err(SolitonError::InvalidArgument(format!(
            "g_invert argument must be finite (got {v})"
        )));
    }
    if params.is_log_branch() {
        return Ok(v);
    }

    let f = |y: f64| g_eval(y, params) - v;
    let mut lo = 0.0;
    let mut hi = v.max(2.0 * v.powf(1.0 / params.alpha));
    while f(hi) < 0.0 {
        lo = hi;
        hi *= 2.0;
        if !hi.is_finite() {
            return Err(SolitonError::InvalidArgument(format!(
                "g_invert: no finite root for {v}"
            )));
        }
    }

    let mut y = 0.5 * (lo + hi);
    for _ in 0..200 {
        let fy = f(y);
        if fy == 0.0 {
            return Ok(y);
        }
        if fy < 0.0 {
            lo = y;
        } else {
            hi = y;
        }
        let newton = y - fy / params.g_prime(y);
        let next = if newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
        if (next - y).abs() <= 4.0 * f64::EPSILON * next.abs() || hi - lo <= f64::EPSILON * hi {
            return Ok(next);
        }
        y = next;
    }
    Ok(y)
}

/// `C(alpha, n) = (n-1)^(1/alpha) (1/(alpha (n-1)) + (alpha-1)/2) / (alpha - 1)`.
pub fn coeff_c(params: &ModelParams) -> Result<f64> {
    if params.is_log_branch() {
        return Err(SolitonError::LogarithmicBranch);
    }
    let a = params.alpha;
    let m = params.nf() - 1.0;
    // Distributed so that integer cases such as C(2, 2) = 1 come out exact.
    let value = (m.powf(1.0 / a - 1.0) / a + m.powf(1.0 / a) * (a - 1.0) / 2.0) / (a - 1.0);
    Ok(value)
}

/// `B(alpha, n) = (n-1)^(1/alpha) (1/(alpha^2 (n-1)) + (alpha-1)/(2 alpha))`.
pub fn coeff_b(params: &ModelParams) -> f64 {
    let a = params.alpha;
    let m = params.nf() - 1.0;
    m.powf(1.0 / a - 1.0) / (a * a) + m.powf(1.0 / a) * (a - 1.0) / (2.0 * a)
}

/// Leading far-field coefficient: `alpha/(alpha+1) (n-1)^(-1/alpha)` for
/// `alpha != 1`, `1/(2(n-1))` on the logarithmic branch.
pub fn leading_coefficient(params: &ModelParams) -> f64 {
    let m = params.nf() - 1.0;
    if params.is_log_branch() {
        1.0 / (2.0 * m)
    } else {
        let a = params.alpha;
        a / (a + 1.0) * m.powf(-1.0 / a)
    }
}

/// Closed-form coefficients of the far-field expansion.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoefficientSet {
    pub leading: f64,
    pub c_coeff: Option<f64>,
    pub b_coeff: f64,
    pub log_term: bool,
}

pub fn coefficients(params: &ModelParams) -> CoefficientSet {
    CoefficientSet {
        leading: leading_coefficient(params),
        c_coeff: coeff_c(params).ok(),
        b_coeff: coeff_b(params),
        log_term: params.is_log_branch(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn p(n: i64, a: f64) -> ModelParams {
        ModelParams::new(n, a).unwrap()
    }

    #[test]
    fn validation() {
        assert!(ModelParams::new(2, 1.0).is_ok());
        assert_eq!(
            ModelParams::new(1, 1.0),
            Err(SolitonError::InvalidDimension(1))
        );
        assert!(ModelParams::new(1, 1.0)
            .unwrap_err()
            .to_string()
            .contains("dimension must be ≥ 2"));
        let e = ModelParams::new(3, 0.0).unwrap_err();
        assert!(e.to_string().contains("alpha must be positive"));
        assert!(ModelParams::new(3, f64::NAN).is_err());
        assert!(ModelParams::new(3, f64::INFINITY).is_err());
        assert!(ModelParams::new(3, -2.0).is_err());
    }

    #[test]
    fn g_values() {
        for a in [0.3, 1.0, 2.0, 3.0] {
            assert_eq!(g_eval(0.0, &p(3, a)), 0.0);
        }
        for y in [-3.0, 0.1, 7.5] {
            assert_eq!(g_eval(y, &p(2, 1.0)), y);
        }
        // 1 * (1 + 1)^1 = 2
        assert_relative_eq!(g_eval(1.0, &p(2, 3.0)), 2.0, max_relative = 1e-15);
        assert!(g_eval(1e200, &p(2, 0.5)).is_finite());
    }

    #[test]
    fn g_inverse_values() {
        let params = p(2, 3.0);
        assert_eq!(g_invert(0.0, &params).unwrap(), 0.0);
        // Bisection oracle on [0, 2] for g(y) = 2 under alpha = 3.
        let (mut lo, mut hi) = (0.0f64, 2.0f64);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid * (1.0 + mid * mid) < 2.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        assert_relative_eq!(lo, 1.0, max_relative = 1e-14);
        assert_relative_eq!(g_invert(2.0, &params).unwrap(), lo, max_relative = 1e-12);
        for a in [0.1, 0.5, 1.0, 2.0, 3.0] {
            let pa = p(4, a);
            let v = g_eval(2.5, &pa);
            assert_relative_eq!(g_invert(v, &pa).unwrap(), 2.5, max_relative = 1e-10);
        }
        assert!(matches!(
            g_invert(-1.0, &params),
            Err(SolitonError::Negative { .. })
        ));
    }

    #[test]
    fn coefficient_values() {
        assert_eq!(coeff_c(&p(2, 2.0)).unwrap(), 1.0);
        assert_relative_eq!(coeff_c(&p(5, 2.0)).unwrap(), 1.25, max_relative = 1e-15);
        assert_eq!(coeff_c(&p(3, 1.0)), Err(SolitonError::LogarithmicBranch));
        for n in 2..=12 {
            assert_eq!(coeff_b(&p(n, 1.0)), 1.0);
        }
        assert_relative_eq!(coeff_b(&p(2, 2.0)), 0.5, max_relative = 1e-15);
        // (n - 1)^(1/alpha) = 1 for n = 2.
        assert_relative_eq!(coeff_b(&p(2, 3.0)), 1.0 / 9.0 + 1.0 / 3.0, max_relative = 1e-15);
        assert_relative_eq!(
            coeff_b(&p(3, 3.0)),
            2f64.powf(1.0 / 3.0) * (1.0 / 18.0 + 1.0 / 3.0),
            max_relative = 1e-15
        );
        let set = coefficients(&p(3, 1.0));
        assert!(set.log_term && set.c_coeff.is_none());
        assert_relative_eq!(set.leading, 0.25);
        let set = coefficients(&p(3, 2.0));
        assert!(!set.log_term && set.c_coeff.is_some());
    }

    #[test]
    fn coeff_b_continuous_through_log_branch() {
        for n in 2..=6 {
            let at = coeff_b(&p(n, 1.0));
            for a in [1.0 - 1e-6, 1.0 + 1e-6] {
                assert!((coeff_b(&p(n, a)) - at).abs() < 1e-4);
            }
        }
    }

    proptest! {
        #[test]
        fn g_strictly_increasing(y1 in -10.0f64..10.0, y2 in -10.0f64..10.0, a in 0.05f64..5.0, n in 2i64..8) {
            prop_assume!((y1 - y2).abs() > 1e-9);
            let params = p(n, a);
            let (lo, hi) = if y1 < y2 { (y1, y2) } else { (y2, y1) };
            prop_assert!(g_eval(lo, &params) < g_eval(hi, &params));
        }

        #[test]
        fn g_odd(y in -10.0f64..10.0, a in 0.05f64..5.0) {
            let params = p(2, a);
            prop_assert_eq!(g_eval(-y, &params), -g_eval(y, &params));
        }

        #[test]
        fn g_round_trip(y in 0.0f64..1e3, a in 0.05f64..5.0) {
            let params = p(3, a);
            let back = g_invert(g_eval(y, &params), &params).unwrap();
            prop_assert!((back - y).abs() <= 1e-10 * (1.0 + y));
        }

        #[test]
        fn g_invert_residual(v in 0.0f64..1e4, a in 0.05f64..5.0) {
            let params = p(5, a);
            let y = g_invert(v, &params).unwrap();
            prop_assert!((g_eval(y, &params) - v).abs() <= 1e-10 * v.max(f64::MIN_POSITIVE));
        }
    }
}
