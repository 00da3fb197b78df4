//! Construction of the radial profile `r(t)` and of its phase-plane
//! trajectory `y(s) = r'(e^s)`.

use serde::{Deserialize, Serialize};

use crate::error::{Result, SolitonError};
use crate::model::ModelParams;
use crate::numerics::{bracket, fd_weights, hermite, lagrange, stencil_start};
use crate::ode::RadialOde;
use crate::radau;
use crate::series::{series_coefficients, OriginSeries, DEFAULT_ORDER, DEFAULT_SWITCH_RADIUS};

pub const MIN_TOL: f64 = 1e-13;
pub const MAX_TOL: f64 = 1e-6;
pub const DEFAULT_T_MAX_CAP: f64 = 1e4;

/// Knobs of the profile solver.
#[derive(Debug, Clone, PartialEq)]
pub struct SolveOptions {
    /// Radius where the Taylor launch hands over to the integrator.
    pub switch_radius: f64,
    pub series_order: usize,
    /// Steps never exceed `max_log_step * t`, so the grid is dense in `ln t` too.
    pub max_log_step: f64,
    /// Overflow guard on the horizon, `r' ~ t^(1/alpha)` grows fast for small alpha.
    pub t_max_cap: f64,
    pub max_steps: usize,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            switch_radius: DEFAULT_SWITCH_RADIUS,
            series_order: DEFAULT_ORDER,
            max_log_step: 0.02,
            t_max_cap: DEFAULT_T_MAX_CAP,
            max_steps: 1_000_000,
        }
    }
}

/// Dense samples of the radial solution with `r(0) = r'(0) = 0`.
///
/// `grid[0] = 0` and `grid[1]` is the switch radius; everything beyond comes
/// from the integrator (step ends and step midpoints).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadialProfile {
    pub params: ModelParams,
    pub grid: Vec<f64>,
    pub r: Vec<f64>,
    pub dr: Vec<f64>,
    pub ddr: Vec<f64>,
    pub tol: f64,
    pub series: OriginSeries,
    pub switch_radius: f64,
}

pub fn solve_profile(params: &ModelParams, t_max: f64, tol: f64) -> Result<RadialProfile> {
    solve_profile_with(params, t_max, tol, &SolveOptions::default())
}

pub fn solve_profile_with(
    params: &ModelParams,
    t_max: f64,
    tol: f64,
    opts: &SolveOptions,
) -> Result<RadialProfile> {
    if !(MIN_TOL..=MAX_TOL).contains(&tol) {
        return Err(SolitonError::InvalidTolerance(tol));
    }
    let t0 = opts.switch_radius;
    if !(t0 > 0.0) || !(t_max > t0) {
        return Err(SolitonError::InvalidRange(format!(
            "need 0 < switch radius ({t0}) < t_max ({t_max})"
        )));
    }
    if t_max > opts.t_max_cap {
        return Err(SolitonError::InvalidRange(format!(
            "t_max {t_max} exceeds the overflow cap {}",
            opts.t_max_cap
        )));
    }
    let series = series_coefficients(params, opts.series_order)?;
    let ode = RadialOde::new(*params);

    let (r_launch, p_launch, ddr_launch) = series.eval(t0)?;
    let (_, _, ddr_origin) = series.eval(0.0)?;
    let mut grid = vec![0.0, t0];
    let mut r = vec![0.0, r_launch];
    let mut dr = vec![0.0, p_launch];
    let mut ddr = vec![ddr_origin, ddr_launch];

    let newton_tol = (1e-3 * tol).max(1e-15);
    let (mut t, mut rc, mut pc) = (t0, r_launch, p_launch);
    let mut h = 0.25 * opts.max_log_step * t0;
    let mut steps = 0usize;

    while t < t_max {
        steps += 1;
        if steps > opts.max_steps {
            return Err(SolitonError::StepUnderflow { t });
        }
        h = h.min(opts.max_log_step * t);
        let mut last = false;
        if t + h >= t_max * (1.0 - 1e-14) {
            h = t_max - t;
            last = true;
        }
        if h <= 1e-14 * t {
            return Err(SolitonError::StepUnderflow { t });
        }

        let attempt = (|| {
            let full = radau::step(&ode, t, rc, pc, h, newton_tol)?;
            let half = radau::step(&ode, t, rc, pc, 0.5 * h, newton_tol)?;
            let two = radau::step(&ode, t + 0.5 * h, half.0, half.1, 0.5 * h, newton_tol)?;
            Some((full, half, two))
        })();
        let Some((full, half, two)) = attempt else {
            check_finite(rc, pc, t)?;
            h *= 0.25;
            continue;
        };
        if ![full.0, full.1, half.0, half.1, two.0, two.1]
            .iter()
            .all(|v| v.is_finite())
        {
            return Err(SolitonError::NonFinite { t: t + h });
        }

        let scale = |v: f64| tol * (1.0 + v.abs());
        // Step doubling with a fifth-order method: the error of the two half
        // steps is (two - full) / (2^5 - 1).
        let local = ((two.0 - full.0).abs() / 31.0 / scale(two.0))
            .max((two.1 - full.1).abs() / 31.0 / scale(two.1));

        // Interpolation contract on the stored half-intervals: a cubic over the
        // full step predicts the midpoint; halving the spacing divides its
        // error by 16.
        let t_end = t + h;
        let t_mid = t + 0.5 * h;
        let r_pred = hermite(t, t_end, rc, two.0, pc, two.1, t_mid);
        let mut interp = (r_pred - half.0).abs() / 16.0 / (10.0 * scale(half.0));
        if grid.len() >= 4 {
            let k = grid.len();
            let xs = [grid[k - 3], grid[k - 2], grid[k - 1], t_end];
            let ys = [dr[k - 3], dr[k - 2], dr[k - 1], two.1];
            let p_pred = lagrange(&xs, &ys, t_mid);
            interp = interp.max((p_pred - half.1).abs() / 16.0 / (10.0 * scale(half.1)));
        }

        let worst = local.max(interp);
        let fac_local = if local > 0.0 { 0.9 * local.powf(-1.0 / 6.0) } else { 4.0 };
        let fac_interp = if interp > 0.0 { 0.9 * interp.powf(-0.25) } else { 4.0 };
        let fac = fac_local.min(fac_interp).clamp(0.2, 4.0);

        if worst <= 1.0 {
            let t_end = if last { t_max } else { t_end };
            for (tt, (rr, pp)) in [(t_mid, half), (t_end, two)] {
                let curv = ode.rhs(tt, pp);
                if !curv.is_finite() {
                    return Err(SolitonError::NonFinite { t: tt });
                }
                grid.push(tt);
                r.push(rr);
                dr.push(pp);
                ddr.push(curv);
            }
            t = t_end;
            rc = two.0;
            pc = two.1;
            if last {
                break;
            }
        }
        h *= fac;
    }

    Ok(RadialProfile {
        params: *params,
        grid,
        r,
        dr,
        ddr,
        tol,
        series,
        switch_radius: t0,
    })
}

fn check_finite(r: f64, p: f64, t: f64) -> Result<()> {
    if r.is_finite() && p.is_finite() && (1.0 + p * p).is_finite() {
        Ok(())
    } else {
        Err(SolitonError::NonFinite { t })
    }
}

/// Value and derivatives of the profile at one radius.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProfilePoint {
    pub r: f64,
    pub dr: f64,
    pub ddr: f64,
    /// `r'(t)/t`, the tangential Hessian eigenvalue (finite at `t = 0`).
    pub dr_over_t: f64,
}

impl RadialProfile {
    pub fn t_max(&self) -> f64 {
        *self.grid.last().expect("profile grid is never empty")
    }

    pub fn len(&self) -> usize {
        self.grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.grid.is_empty()
    }

    /// Index of the first integrated sample (the switch radius).
    pub(crate) fn launch_index(&self) -> usize {
        1
    }

    /// Evaluates the profile anywhere in `[0, t_max]`.
    ///
    /// Inside the switch radius the Taylor launch is used. Beyond it, `r` is a
    /// cubic Hermite interpolant of `(r, r')` and `r'`, `r''` are local cubics
    /// through the four nearest samples.
    pub fn eval(&self, t: f64) -> Result<ProfilePoint> {
        let t_max = self.t_max();
        if !(t >= 0.0) || t > t_max * (1.0 + 1e-14) {
            return Err(SolitonError::OutsideDomain { radius: t, t_max });
        }
        if t <= self.switch_radius {
            let (r, dr, ddr) = self.series.eval(t)?;
            return Ok(ProfilePoint {
                r,
                dr,
                ddr,
                dr_over_t: self.series.slope_over_t(t),
            });
        }
        let t = t.min(t_max);
        let lo = self.launch_index();
        let i = bracket(&self.grid, t).max(lo);
        let (t0, t1) = (self.grid[i], self.grid[i + 1]);
        let r = hermite(t0, t1, self.r[i], self.r[i + 1], self.dr[i], self.dr[i + 1], t);
        let s = stencil_start(i, 4, lo, self.grid.len());
        let xs = &self.grid[s..s + 4];
        let dr = lagrange(xs, &self.dr[s..s + 4], t);
        let ddr = lagrange(xs, &self.ddr[s..s + 4], t);
        Ok(ProfilePoint {
            r,
            dr,
            ddr,
            dr_over_t: dr / t,
        })
    }

    /// Restriction to `[0, t_end]`, keeping samples up to the first one at or past `t_end`.
    pub fn truncated(&self, t_end: f64) -> RadialProfile {
        let k = self.grid.partition_point(|&t| t < t_end).min(self.grid.len() - 1) + 1;
        RadialProfile {
            grid: self.grid[..k].to_vec(),
            r: self.r[..k].to_vec(),
            dr: self.dr[..k].to_vec(),
            ddr: self.ddr[..k].to_vec(),
            ..self.clone()
        }
    }
}

/// Samples of the phase variables `s = ln t`, `y`, `z` and (for `alpha = 1`) `w`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhaseTrajectory {
    pub params: ModelParams,
    pub s: Vec<f64>,
    pub y: Vec<f64>,
    pub z: Vec<f64>,
    pub w: Option<Vec<f64>>,
    /// Sup over interior samples of the `y`-equation residual relative to its largest term.
    pub y_residual: f64,
    /// Sup over interior samples of the `z`-equation residual relative to its largest term.
    pub z_residual: f64,
}

/// Widest admissible gap in `s` for the finite-difference residuals.
pub const MAX_PHASE_GAP: f64 = 0.25;
const FD_WIDTH: usize = 7;

pub fn phase_trajectory(profile: &RadialProfile) -> Result<PhaseTrajectory> {
    let params = profile.params;
    let nm1 = params.nf() - 1.0;
    let a = params.alpha();
    let start = profile.grid.partition_point(|&t| t <= 0.0);
    let ts = &profile.grid[start..];
    if ts.len() < FD_WIDTH {
        return Err(SolitonError::GridTooCoarse {
            gap: f64::INFINITY,
            limit: MAX_PHASE_GAP,
        });
    }
    let s: Vec<f64> = ts.iter().map(|t| t.ln()).collect();
    if let Some(gap) = s
        .windows(2)
        .map(|w| w[1] - w[0])
        .find(|&g| g > MAX_PHASE_GAP)
    {
        return Err(SolitonError::GridTooCoarse {
            gap,
            limit: MAX_PHASE_GAP,
        });
    }
    let y = profile.dr[start..].to_vec();
    let z: Vec<f64> = ts
        .iter()
        .zip(&y)
        .map(|(&t, &yy)| nm1 * params.g(yy) / t - 1.0)
        .collect();
    let w = params.is_log_branch().then(|| {
        ts.iter()
            .zip(&z)
            .map(|(&t, &zz)| -t * t * zz / nm1 - 1.0)
            .collect()
    });

    let half = FD_WIDTH / 2;
    let mut y_res: f64 = 0.0;
    let mut z_res: f64 = 0.0;
    for i in half..s.len() - half {
        let nodes = &s[i - half..=i + half];
        let wts = fd_weights(s[i], nodes, 1);
        let dy: f64 = wts.iter().zip(&y[i - half..=i + half]).map(|(c, v)| c * v).sum();
        let dz: f64 = wts.iter().zip(&z[i - half..=i + half]).map(|(c, v)| c * v).sum();
        let (yy, zz, es) = (y[i], z[i], ts[i]);
        let m = (1.0 + yy * yy).powf((3.0 - a) / 2.0);
        let gy = params.g(yy);
        let ry = dy + (nm1 * gy - es) * m;
        let scale_y = dy.abs() + nm1 * gy.abs() * m + es * m;
        y_res = y_res.max(ry.abs() / scale_y);
        let rz = dz + params.nf() * zz + 1.0 + a * nm1 * zz * yy * yy;
        let scale_z = dz.abs() + params.nf() * zz.abs() + 1.0 + a * nm1 * (zz * yy * yy).abs();
        z_res = z_res.max(rz.abs() / scale_z);
    }

    Ok(PhaseTrajectory {
        params,
        s,
        y,
        z,
        w,
        y_residual: y_res,
        z_residual: z_res,
    })
}
