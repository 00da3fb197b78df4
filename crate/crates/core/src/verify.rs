//! Executable checks of the qualitative statements about the radial
//! translator: slope bounds, phase-plane monotonicity, the full PDE residual,
//! convexity, blow-down, growth, the gradient-estimate scan and uniqueness
//! under refinement.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::asymptotics::{default_horizon, dyadic_window, fit_far_field, FarFieldFit};
use crate::error::{Result, SolitonError};
use crate::exec::Execution;
use crate::model::{coeff_c, leading_coefficient, ModelParams};
use crate::numerics::lagrange;
use crate::profile::{
    phase_trajectory, solve_profile, solve_profile_with, PhaseTrajectory, RadialProfile,
    SolveOptions, MIN_TOL,
};
use crate::report::nullable;

/// Tolerance of checks that demand a strictly negative metric.
pub const STRICT: f64 = -f64::MIN_POSITIVE;
/// Default strict margin of the slope bounds, per unit of `1 + t`.
pub const BOUNDS_MARGIN: f64 = 1e-12;
/// Sup PDE residual allowed per unit of integration tolerance.
pub const PDE_TOL_FACTOR: f64 = 1000.0;
/// Refinement agreement allowed per unit of integration tolerance.
pub const REFINEMENT_TOL_FACTOR: f64 = 100.0;
pub const ORIGIN_TOL: f64 = 1e-9;
pub const GROWTH_TOL: f64 = 0.02;
pub const SCAN_STABILITY_TOL: f64 = 0.1;
pub const PDE_POINT_SEED: u64 = 0x5eed_0001;
pub const PDE_POINT_COUNT: usize = 1000;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub name: String,
    pub pass: bool,
    #[serde(with = "nullable")]
    pub metric: f64,
    #[serde(with = "nullable")]
    pub tolerance: f64,
    #[serde(default)]
    pub detail: String,
}

impl CheckReport {
    /// `pass` is exactly `metric <= tolerance`; a NaN metric fails.
    pub fn new(name: &str, metric: f64, tolerance: f64, detail: String) -> Self {
        CheckReport {
            name: name.to_string(),
            pass: metric <= tolerance,
            metric,
            tolerance,
            detail,
        }
    }
}

fn sup(values: impl IntoIterator<Item = f64>) -> f64 {
    // NaN poisons the sup instead of being skipped by f64::max.
    values.into_iter().fold(f64::NEG_INFINITY, |acc, v| {
        if v.is_nan() || acc.is_nan() {
            f64::NAN
        } else {
            acc.max(v)
        }
    })
}

/// Slope bounds `t/n < g(r') < t/(n-1)` and `r'' > 0` over every grid point `t > 0`.
pub fn check_bounds(profile: &RadialProfile) -> CheckReport {
    check_bounds_with_margin(profile, BOUNDS_MARGIN)
}

/// As [`check_bounds`]; violations are scaled by `1 + t` and must stay below `-margin`.
pub fn check_bounds_with_margin(profile: &RadialProfile, margin: f64) -> CheckReport {
    let params = profile.params;
    let n = params.nf();
    let mut metric = f64::NEG_INFINITY;
    let mut first_ratio = f64::NAN;
    let mut last_ratio = f64::NAN;
    for i in 0..profile.len() {
        let t = profile.grid[i];
        if t <= 0.0 {
            continue;
        }
        let g = params.g(profile.dr[i]);
        let v = sup([t / n - g, g - t / (n - 1.0), -profile.ddr[i]]) / (1.0 + t);
        metric = sup([metric, v]);
        if first_ratio.is_nan() {
            first_ratio = n * g / t;
        }
        last_ratio = (n - 1.0) * g / t;
    }
    CheckReport::new(
        "bounds",
        metric,
        -margin,
        format!("n g(r')/t = {first_ratio:.12} at first sample, (n-1) g(r')/t = {last_ratio:.12} at t_max"),
    )
}

/// Strict increase of `z` plus proximity of the endpoints to `-1/n` and `0`.
///
/// The metric is the largest of the worst consecutive non-increase,
/// `|z_first + 1/n| - 1e-3` and `|z_last| - 1e-2`; all must be negative.
pub fn check_phase_monotone(traj: &PhaseTrajectory) -> Result<CheckReport> {
    let z = &traj.z;
    if z.len() < 10 {
        return Err(SolitonError::InvalidArgument(format!(
            "phase check needs at least 10 samples (got {})",
            z.len()
        )));
    }
    let n = traj.params.nf();
    let non_increase = sup(z.windows(2).map(|w| w[0] - w[1]));
    let first = (z[0] + 1.0 / n).abs();
    let last = z[z.len() - 1].abs();
    let metric = sup([non_increase, first - 1e-3, last - 1e-2]);
    Ok(CheckReport::new(
        "phase_monotone",
        metric,
        STRICT,
        format!("worst step {non_increase:.3e}, |z_first + 1/n| = {first:.3e}, |z_last| = {last:.3e}"),
    ))
}

/// Both sides of the full `n`-dimensional equation at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PdeResidual {
    pub lhs: f64,
    pub rhs: f64,
}

impl PdeResidual {
    pub fn residual(&self) -> f64 {
        self.lhs - self.rhs
    }
}

/// Assembles `(delta_ij - u_i u_j / (1 + |Du|^2)) u_ij` for `u(x) = r(|x|)`.
pub fn pde_residual_at(profile: &RadialProfile, x: &[f64]) -> Result<PdeResidual> {
    let params = profile.params;
    let dim = params.n();
    if x.len() != dim {
        return Err(SolitonError::InvalidArgument(format!(
            "point has {} coordinates, expected {dim}",
            x.len()
        )));
    }
    let t = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    let pt = profile.eval(t)?;
    let mut grad = vec![0.0; dim];
    let mut hess = vec![vec![0.0; dim]; dim];
    if t > 0.0 {
        let e: Vec<f64> = x.iter().map(|v| v / t).collect();
        for i in 0..dim {
            grad[i] = pt.dr * e[i];
            for j in 0..dim {
                let delta = if i == j { 1.0 } else { 0.0 };
                hess[i][j] = pt.ddr * e[i] * e[j] + pt.dr_over_t * (delta - e[i] * e[j]);
            }
        }
    } else {
        for (i, row) in hess.iter_mut().enumerate() {
            row[i] = pt.ddr;
        }
    }
    let w = 1.0 + grad.iter().map(|v| v * v).sum::<f64>();
    let mut lhs = 0.0;
    for i in 0..dim {
        for j in 0..dim {
            let delta = if i == j { 1.0 } else { 0.0 };
            lhs += (delta - grad[i] * grad[j] / w) * hess[i][j];
        }
    }
    let rhs = w.powf((1.0 - params.alpha()) / 2.0);
    Ok(PdeResidual { lhs, rhs })
}

/// `count` points uniform in the ball of radius `radius` in `R^dim`.
pub fn random_ball_points(dim: usize, count: usize, radius: f64, seed: u64) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let dir: Vec<f64> = (0..dim).map(|_| rng.sample(StandardNormal)).collect();
            let norm = dir.iter().map(|v: &f64| v * v).sum::<f64>().sqrt();
            let u: f64 = rng.random();
            let rho = radius * u.powf(1.0 / dim as f64);
            dir.iter().map(|v| v / norm * rho).collect()
        })
        .collect()
}

pub fn check_pde_residual(profile: &RadialProfile, points: &[Vec<f64>]) -> Result<CheckReport> {
    check_pde_residual_with(profile, points, Execution::default())
}

/// Sup of `|lhs - rhs|` over `points`, against `PDE_TOL_FACTOR * tol`.
pub fn check_pde_residual_with(
    profile: &RadialProfile,
    points: &[Vec<f64>],
    exec: Execution,
) -> Result<CheckReport> {
    let residuals = exec.try_map(points, |x| {
        pde_residual_at(profile, x).map(|r| r.residual().abs())
    })?;
    let metric = sup(residuals.iter().copied()).max(0.0);
    Ok(CheckReport::new(
        "pde_residual",
        metric,
        PDE_TOL_FACTOR * profile.tol,
        format!("{} points", points.len()),
    ))
}

/// At the origin the gradient vanishes, so both sides must equal 1.
pub fn check_pde_origin(profile: &RadialProfile) -> Result<CheckReport> {
    let at = pde_residual_at(profile, &vec![0.0; profile.params.n()])?;
    let metric = (at.lhs - 1.0).abs().max((at.rhs - 1.0).abs());
    Ok(CheckReport::new(
        "pde_origin",
        metric,
        ORIGIN_TOL,
        format!("lhs = {:.17e}, rhs = {:.17e}", at.lhs, at.rhs),
    ))
}

/// Radial (`r''`) and tangential (`r'/t`) Hessian eigenvalues positive on the grid.
pub fn check_convexity(profile: &RadialProfile) -> CheckReport {
    let mut lowest = f64::INFINITY;
    let mut tangential = f64::INFINITY;
    for i in 0..profile.len() {
        let t = profile.grid[i];
        let slope = if t > 0.0 {
            profile.dr[i] / t
        } else {
            profile.series.slope_over_t(0.0)
        };
        lowest = lowest.min(profile.ddr[i]);
        tangential = tangential.min(slope);
    }
    CheckReport::new(
        "convexity",
        -lowest.min(tangential),
        STRICT,
        format!("min r'' = {lowest:.6e}, min r'/t = {tangential:.6e}"),
    )
}

/// At `t = 0` both eigenvalue families equal `1/n`.
pub fn check_convexity_origin(profile: &RadialProfile) -> Result<CheckReport> {
    let pt = profile.eval(0.0)?;
    let target = 1.0 / profile.params.nf();
    let metric = (pt.ddr - target).abs().max((pt.dr_over_t - target).abs());
    Ok(CheckReport::new(
        "convexity_origin",
        metric,
        ORIGIN_TOL,
        format!("r''(0) = {:.17e}, r'/t(0) = {:.17e}", pt.ddr, pt.dr_over_t),
    ))
}

fn blow_down_exponent(params: &ModelParams) -> f64 {
    if params.is_log_branch() {
        2.0
    } else {
        1.0 + 1.0 / params.alpha()
    }
}

/// `sup_{t in [0,1]} |h^-k r(h t) - L t^k|` over grid points `h t <= h`.
pub fn blow_down_deviation(profile: &RadialProfile, h: f64) -> Result<f64> {
    if !(h > 0.0) || h > profile.t_max() * (1.0 + 1e-14) {
        return Err(SolitonError::OutsideDomain {
            radius: h,
            t_max: profile.t_max(),
        });
    }
    let k = blow_down_exponent(&profile.params);
    let lead = leading_coefficient(&profile.params);
    let scale = h.powf(-k);
    let dev = profile
        .grid
        .iter()
        .zip(&profile.r)
        .filter(|(&t, _)| t <= h)
        .map(|(&t, &r)| (scale * r - lead * (t / h).powf(k)).abs());
    Ok(sup(dev).max(0.0))
}

/// Expected size of the blow-down deviation at scale `h`.
pub fn blow_down_bound(params: &ModelParams, h: f64) -> Result<f64> {
    if params.is_log_branch() {
        Ok(10.0 * h.ln() / (h * h))
    } else {
        let a = params.alpha();
        Ok(10.0 * (coeff_c(params)?.abs() * h.powf(1.0 - 1.0 / a) + 1.0) / h.powf(1.0 + 1.0 / a))
    }
}

fn require_range(profile: &RadialProfile, what: &str) -> Result<()> {
    if profile.t_max() < 100.0 {
        return Err(SolitonError::InvalidRange(format!(
            "{what} needs t_max >= 100 (got {})",
            profile.t_max()
        )));
    }
    Ok(())
}

/// Blow-down limit at `h = t_max`.
pub fn check_blow_down(profile: &RadialProfile) -> Result<CheckReport> {
    require_range(profile, "blow-down")?;
    let h = profile.t_max();
    let dev = blow_down_deviation(profile, h)?;
    let bound = blow_down_bound(&profile.params, h)?;
    Ok(CheckReport::new(
        "blow_down",
        dev,
        bound,
        format!("h = {h}, exponent {}", blow_down_exponent(&profile.params)),
    ))
}

/// The blow-down deviation shrinks from `h = t_max / 2` to `h = t_max`.
pub fn check_blow_down_convergence(profile: &RadialProfile) -> Result<CheckReport> {
    require_range(profile, "blow-down")?;
    let h = profile.t_max();
    let full = blow_down_deviation(profile, h)?;
    let half = blow_down_deviation(profile, 0.5 * h)?;
    Ok(CheckReport::new(
        "blow_down_convergence",
        full - half,
        STRICT,
        format!("deviation {half:.6e} at h = {}, {full:.6e} at h = {h}", 0.5 * h),
    ))
}

/// Log-log slope `(ln r(t_max) - ln r(t_max/2)) / ln 2`.
pub fn growth_exponent(profile: &RadialProfile) -> Result<f64> {
    let hi = profile.t_max();
    let r_hi = profile.eval(hi)?.r;
    let r_lo = profile.eval(0.5 * hi)?.r;
    Ok((r_hi.ln() - r_lo.ln()) / 2f64.ln())
}

/// Superlinear growth with the predicted exponent `1 + 1/alpha`.
///
/// The metric is the relative exponent error, or infinity when `r/t` fails to
/// increase on the grid or ends at or below 1.
pub fn check_growth(profile: &RadialProfile) -> Result<CheckReport> {
    let ratios: Vec<f64> = profile
        .grid
        .iter()
        .zip(&profile.r)
        .filter(|(&t, _)| t > 0.0)
        .map(|(&t, &r)| r / t)
        .collect();
    let increasing = ratios.windows(2).all(|w| w[1] > w[0]);
    let end_ratio = ratios.last().copied().unwrap_or(f64::NAN);
    let exponent = growth_exponent(profile)?;
    let expected = blow_down_exponent(&profile.params);
    let metric = if increasing && end_ratio > 1.0 {
        (exponent / expected - 1.0).abs()
    } else {
        f64::INFINITY
    };
    Ok(CheckReport::new(
        "growth",
        metric,
        GROWTH_TOL,
        format!("exponent {exponent:.6} (expected {expected:.6}), r/t = {end_ratio:.6e} at t_max"),
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GradientSample {
    pub center_offset: f64,
    pub radius: f64,
    #[serde(rename = "M")]
    pub m: f64,
    pub grad_norm: f64,
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GradientScanReport {
    pub samples: Vec<GradientSample>,
    pub sup_ratio: f64,
}

/// Scans `ln(max(|Du(c e_1)|, 1)) / (1 + M^2/rho^2)` with `M = sup_{B_rho(c e_1)} u`.
///
/// `u = r(|x|)` is radial and increasing, so `M = r(|c| + rho)` and the
/// gradient norm at the center is `r'(|c|)`.
pub fn scan_gradient_bound(
    profile: &RadialProfile,
    centers: &[f64],
    radii: &[f64],
) -> Result<GradientScanReport> {
    if centers.len() != radii.len() {
        return Err(SolitonError::InvalidArgument(format!(
            "{} centers but {} radii",
            centers.len(),
            radii.len()
        )));
    }
    let mut samples = Vec::with_capacity(centers.len());
    for (&c, &rho) in centers.iter().zip(radii) {
        if !(rho > 0.0) {
            return Err(SolitonError::InvalidArgument(format!(
                "ball radius must be positive (got {rho})"
            )));
        }
        let outer = c.abs() + rho;
        let m = profile.eval(outer)?.r;
        let grad_norm = profile.eval(c.abs())?.dr.abs();
        let ratio = grad_norm.max(1.0).ln() / (1.0 + m * m / (rho * rho));
        samples.push(GradientSample {
            center_offset: c,
            radius: rho,
            m,
            grad_norm,
            ratio,
        });
    }
    let sup_ratio = sup(samples.iter().map(|s| s.ratio)).max(0.0);
    Ok(GradientScanReport { samples, sup_ratio })
}

/// Centers `2^(k/8)` in `[1, t_max/2]` with radius `c/2`.
pub fn default_scan_balls(t_max: f64) -> (Vec<f64>, Vec<f64>) {
    let centers: Vec<f64> = (0..)
        .map(|k| 2f64.powf(k as f64 / 8.0))
        .take_while(|&c| c <= 0.5 * t_max * (1.0 + 1e-12))
        .collect();
    let radii = centers.iter().map(|c| 0.5 * c).collect();
    (centers, radii)
}

pub fn default_scan(profile: &RadialProfile) -> Result<GradientScanReport> {
    let (c, rho) = default_scan_balls(profile.t_max());
    scan_gradient_bound(profile, &c, &rho)
}

/// `sup_ratio` is finite and moves by less than 10% from `short` to `long`.
pub fn check_gradient_scan(short: &RadialProfile, long: &RadialProfile) -> Result<CheckReport> {
    let a = default_scan(short)?.sup_ratio;
    let b = default_scan(long)?.sup_ratio;
    let metric = if !(a.is_finite() && b.is_finite()) {
        f64::INFINITY
    } else if a == b {
        0.0
    } else {
        (b - a).abs() / a.abs().max(b.abs())
    };
    Ok(CheckReport::new(
        "gradient_scan",
        metric,
        SCAN_STABILITY_TOL,
        format!(
            "sup ratio {a:.6e} (t_max {}), {b:.6e} (t_max {})",
            short.t_max(),
            long.t_max()
        ),
    ))
}

/// Sup over `base` grid points `t >= t_0` of `|r_base - r_other| / (1 + |r_base|)`.
pub fn profile_distance(base: &RadialProfile, other: &RadialProfile) -> Result<f64> {
    let lo = base.switch_radius.max(other.switch_radius);
    let mut worst: f64 = 0.0;
    for (&t, &r) in base.grid.iter().zip(&base.r) {
        if t < lo || t > other.t_max() {
            continue;
        }
        let o = other.eval(t)?.r;
        worst = sup([worst, (r - o).abs() / (1.0 + r.abs())]);
    }
    Ok(worst)
}

/// Re-solves with `tol/10` and with the switch radius halved; both must
/// agree with the base solve to `100 tol` relative.
pub fn check_refinement_agreement(params: &ModelParams, t_max: f64, tol: f64) -> Result<CheckReport> {
    let base_opts = SolveOptions::default();
    let base = solve_profile_with(params, t_max, tol, &base_opts)?;
    let fine = solve_profile_with(params, t_max, (0.1 * tol).max(MIN_TOL), &base_opts)?;
    let half_opts = SolveOptions {
        switch_radius: 0.5 * base_opts.switch_radius,
        ..base_opts.clone()
    };
    let shifted = solve_profile_with(params, t_max, tol, &half_opts)?;
    let d_tol = profile_distance(&base, &fine)?;
    let d_launch = profile_distance(&base, &shifted)?;
    Ok(CheckReport::new(
        "refinement_agreement",
        d_tol.max(d_launch),
        REFINEMENT_TOL_FACTOR * tol,
        format!("tol/10: {d_tol:.3e}, t0/2: {d_launch:.3e}"),
    ))
}

/// Limit at 0 of a function sampled at integrated points, by a quadratic in `t^2`.
fn extrapolate_to_origin(profile: &RadialProfile, f: impl Fn(usize) -> f64) -> f64 {
    let t0 = profile.switch_radius;
    let mut nodes = Vec::with_capacity(3);
    for target in [2.0 * t0, 3.0 * t0, 4.0 * t0] {
        let i = (2..profile.len())
            .min_by(|&a, &b| {
                (profile.grid[a] - target)
                    .abs()
                    .total_cmp(&(profile.grid[b] - target).abs())
            })
            .unwrap_or(profile.len() - 1);
        if !nodes.contains(&i) {
            nodes.push(i);
        }
    }
    let xs: Vec<f64> = nodes.iter().map(|&i| profile.grid[i].powi(2)).collect();
    let ys: Vec<f64> = nodes.iter().map(|&i| f(i)).collect();
    lagrange(&xs, &ys, 0.0)
}

/// `r(0) = r'(0) = 0` and `r''(0) = 1/n`, both at the stored origin sample and
/// as the limit of the integrated samples.
pub fn check_origin_data(profile: &RadialProfile) -> CheckReport {
    let target = 1.0 / profile.params.nf();
    let stored = profile.r[0]
        .abs()
        .max(profile.dr[0].abs())
        .max((profile.ddr[0] - target).abs());
    let ddr_limit = extrapolate_to_origin(profile, |i| profile.ddr[i]);
    let slope_limit = extrapolate_to_origin(profile, |i| profile.dr[i] / profile.grid[i]);
    let integrated = (ddr_limit - target).abs().max((slope_limit - target).abs());
    let exact = if stored == 0.0 { "exact" } else { "inexact" };
    CheckReport::new(
        "origin_data",
        stored.max(integrated),
        ORIGIN_TOL,
        format!(
            "stored origin data {exact}; integrated limits r'' -> {ddr_limit:.15e}, r'/t -> {slope_limit:.15e}"
        ),
    )
}

fn rel(fitted: f64, expected: f64) -> f64 {
    (fitted / expected - 1.0).abs()
}

/// Compares fitted far-field coefficients with the closed forms.
///
/// For `alpha < 1` the second term `t^(1-1/alpha)` decays and is swamped by
/// the integration constant, so only the leading coefficient is checked.
pub fn fit_checks(fit: &FarFieldFit) -> Vec<CheckReport> {
    let mut out = vec![CheckReport::new(
        "fit_leading",
        rel(fit.fitted_leading, fit.expected_leading),
        1e-3,
        format!(
            "fitted {:.10e}, expected {:.10e}",
            fit.fitted_leading, fit.expected_leading
        ),
    )];
    let params = fit.params;
    let detail = format!(
        "fitted {:.6e}, expected {:.6e}",
        fit.fitted_second, fit.expected_second
    );
    if params.is_log_branch() {
        if fit.expected_second == 0.0 {
            out.push(CheckReport::new(
                "fit_inverse_square",
                fit.fitted_second.abs(),
                0.05,
                format!("t^-2 coefficient expected 0; {detail}"),
            ));
        } else {
            out.push(CheckReport::new(
                "fit_inverse_square",
                rel(fit.fitted_second, fit.expected_second),
                0.05,
                detail,
            ));
        }
    } else if params.alpha() > 1.0 {
        out.push(CheckReport::new(
            "fit_second",
            rel(fit.fitted_second, fit.expected_second),
            0.05,
            detail,
        ));
    }
    out
}

/// Every check for one parameter pair, plus the far-field fit.
#[derive(Debug, Clone, PartialEq)]
pub struct Battery {
    pub params: ModelParams,
    pub checks: Vec<CheckReport>,
    pub fit: FarFieldFit,
}

impl Battery {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

type CheckFn<'a> = Box<dyn Fn() -> Result<Vec<CheckReport>> + Send + Sync + 'a>;

/// Runs the full battery on a profile solved to `t_max`.
///
/// The far-field fit and the growth exponent use a second solve out to the
/// default horizon; the gradient scan compares against a solve to `2 t_max`.
pub fn run_battery(params: &ModelParams, t_max: f64, tol: f64, exec: Execution) -> Result<Battery> {
    let profile = solve_profile(params, t_max, tol)?;
    let horizon = default_horizon(params).max(t_max);
    let (long, far) = {
        let solves = exec.try_map(&[2.0 * t_max, horizon], |&h| solve_profile(params, h, tol))?;
        let mut it = solves.into_iter();
        (it.next().expect("two solves"), it.next().expect("two solves"))
    };
    let fit = fit_far_field(&far, dyadic_window(horizon))?;
    let traj = phase_trajectory(&profile)?;
    let points = random_ball_points(params.n(), PDE_POINT_COUNT, t_max.min(100.0), PDE_POINT_SEED);

    let prof = &profile;
    let tasks: Vec<CheckFn> = vec![
        Box::new(|| Ok(vec![check_bounds(prof)])),
        Box::new(|| Ok(vec![check_phase_monotone(&traj)?])),
        Box::new(|| {
            Ok(vec![
                check_pde_residual_with(prof, &points, Execution::Sequential)?,
                check_pde_origin(prof)?,
            ])
        }),
        Box::new(|| Ok(vec![check_convexity(prof), check_convexity_origin(prof)?])),
        Box::new(|| Ok(vec![check_blow_down(prof)?, check_blow_down_convergence(prof)?])),
        Box::new(|| Ok(vec![check_growth(&far)?])),
        Box::new(|| Ok(vec![check_gradient_scan(prof, &long)?])),
        Box::new(|| Ok(vec![check_refinement_agreement(params, t_max, tol)?])),
        Box::new(|| Ok(vec![check_origin_data(prof)])),
        Box::new(|| Ok(fit_checks(&fit))),
    ];
    let results = exec.try_map(&tasks, |task| task())?;
    drop(tasks);
    Ok(Battery {
        params: *params,
        checks: results.into_iter().flatten().collect(),
        fit,
    })
}
