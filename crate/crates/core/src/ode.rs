//! Explicit second-order form of the radial equation,
//! `r'' = (1 + p^2) [ (1 + p^2)^((1 - alpha)/2) - (n - 1) p / t ]` with `p = r'`.

use crate::model::ModelParams;

#[derive(Debug, Clone, Copy)]
pub struct RadialOde {
    pub params: ModelParams,
    dim_minus_one: f64,
    /// `(3 - alpha) / 2`
    beta: f64,
}

impl RadialOde {
    pub fn new(params: ModelParams) -> Self {
        RadialOde {
            params,
            dim_minus_one: params.nf() - 1.0,
            beta: (3.0 - params.alpha()) / 2.0,
        }
    }

    /// `r''` as a function of `(t, p)`, `t > 0`.
    #[inline]
    pub fn rhs(&self, t: f64, p: f64) -> f64 {
        let w = 1.0 + p * p;
        w.powf(self.beta) - self.dim_minus_one * w * p / t
    }

    /// `d rhs / dp`.
    #[inline]
    pub fn rhs_dp(&self, t: f64, p: f64) -> f64 {
        let w = 1.0 + p * p;
        2.0 * self.beta * p * w.powf(self.beta - 1.0) - self.dim_minus_one * (1.0 + 3.0 * p * p) / t
    }

    /// Residual of the divided form, `r''/(1+p^2) + (n-1) p/t - (1+p^2)^((1-alpha)/2)`.
    pub fn residual(&self, t: f64, p: f64, ddr: f64) -> f64 {
        let w = 1.0 + p * p;
        ddr / w + self.dim_minus_one * p / t - w.powf(self.beta - 1.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn jacobian_matches_finite_difference() {
        for a in [0.5, 1.0, 2.0, 3.0] {
            let ode = RadialOde::new(ModelParams::new(3, a).unwrap());
            for (t, p) in [(0.5, 0.2), (3.0, 1.7), (50.0, 30.0)] {
                let h = 1e-6 * (1.0 + p);
                let fd = (ode.rhs(t, p + h) - ode.rhs(t, p - h)) / (2.0 * h);
                let exact = ode.rhs_dp(t, p);
                assert!((fd - exact).abs() <= 1e-6 * (1.0 + exact.abs()), "{a} {t} {p}");
            }
        }
    }

    #[test]
    fn residual_vanishes_on_rhs() {
        let ode = RadialOde::new(ModelParams::new(4, 0.7).unwrap());
        let (t, p) = (2.0, 0.6);
        assert!(ode.residual(t, p, ode.rhs(t, p)).abs() < 1e-15);
    }
}
