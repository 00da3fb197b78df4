//! Double-double arithmetic and a truncation-residual oracle for the origin
//! series, independent of the `f64` evaluation path.

#![allow(dead_code)]

use std::ops::{Add, Div, Mul, Neg, Sub};

use soliton_core::model::ModelParams;
use soliton_core::series::{coefficients_in, SeriesScalar};

/// Unevaluated sum `hi + lo` with `|lo| <= ulp(hi) / 2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Dd {
    pub hi: f64,
    pub lo: f64,
}

fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

impl Dd {
    pub fn new(x: f64) -> Self {
        Dd { hi: x, lo: 0.0 }
    }

    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    pub fn abs(self) -> Self {
        if self.hi < 0.0 {
            -self
        } else {
            self
        }
    }

    pub fn powi(self, k: u32) -> Self {
        let mut acc = Dd::new(1.0);
        for _ in 0..k {
            acc = acc * self;
        }
        acc
    }
}

impl Add for Dd {
    type Output = Dd;
    fn add(self, o: Dd) -> Dd {
        let (s, e) = two_sum(self.hi, o.hi);
        let (t, f) = two_sum(self.lo, o.lo);
        let (s, e) = quick_two_sum(s, e + t);
        let (hi, lo) = quick_two_sum(s, e + f);
        Dd { hi, lo }
    }
}

impl Neg for Dd {
    type Output = Dd;
    fn neg(self) -> Dd {
        Dd {
            hi: -self.hi,
            lo: -self.lo,
        }
    }
}

impl Sub for Dd {
    type Output = Dd;
    fn sub(self, o: Dd) -> Dd {
        self + (-o)
    }
}

impl Mul for Dd {
    type Output = Dd;
    fn mul(self, o: Dd) -> Dd {
        let p = self.hi * o.hi;
        let e = self.hi.mul_add(o.hi, -p);
        let e = e + (self.hi * o.lo + self.lo * o.hi);
        let (hi, lo) = quick_two_sum(p, e);
        Dd { hi, lo }
    }
}

impl Div for Dd {
    type Output = Dd;
    fn div(self, o: Dd) -> Dd {
        let q1 = self.hi / o.hi;
        let r = self - o * Dd::new(q1);
        let q2 = r.hi / o.hi;
        let r = r - o * Dd::new(q2);
        let q3 = r.hi / o.hi;
        let (hi, lo) = quick_two_sum(q1, q2);
        Dd { hi, lo } + Dd::new(q3)
    }
}

impl SeriesScalar for Dd {
    fn from_f64(x: f64) -> Self {
        Dd::new(x)
    }
}

/// `(1 + q)^gamma` by the binomial series; `q` must be tiny.
fn binomial_pow(q: Dd, gamma: f64) -> Dd {
    let g = Dd::new(gamma);
    let mut term = Dd::new(1.0);
    let mut acc = term;
    for k in 0..30 {
        let kf = Dd::new(k as f64);
        term = term * (g - kf) / (kf + Dd::new(1.0)) * q;
        acc = acc + term;
        if term.hi.abs() < 1e-40 {
            break;
        }
    }
    acc
}

/// `|r''/(1 + r'^2) + (n - 1) r'/t - (1 + r'^2)^((1 - alpha)/2)|` on the
/// series truncated at `order`, all in double-double.
pub fn series_residual_dd(params: &ModelParams, order: usize, t: f64) -> f64 {
    let a: Vec<Dd> = coefficients_in::<Dd>(params, order).unwrap();
    let t = Dd::new(t);
    let (mut dr, mut ddr, mut dr_over_t) = (Dd::new(0.0), Dd::new(0.0), Dd::new(0.0));
    for (k, &ak) in a.iter().enumerate() {
        let pow = 2 * (k + 1) as u32;
        let pf = Dd::new(pow as f64);
        let tp2 = t.powi(pow - 2);
        dr_over_t = dr_over_t + pf * ak * tp2;
        dr = dr + pf * ak * tp2 * t;
        ddr = ddr + pf * Dd::new(pow as f64 - 1.0) * ak * tp2;
    }
    let q = dr * dr;
    let w = Dd::new(1.0) + q;
    let lhs = ddr / w + Dd::new(params.nf() - 1.0) * dr_over_t;
    let rhs = binomial_pow(q, (1.0 - params.alpha()) / 2.0);
    (lhs - rhs).abs().to_f64()
}

/// Log-log slope of the truncation residual between `t = 1e-3` and `t = 1e-2`.
pub fn residual_slope(params: &ModelParams, order: usize) -> f64 {
    let lo = series_residual_dd(params, order, 1e-3);
    let hi = series_residual_dd(params, order, 1e-2);
    (hi / lo).log10()
}
