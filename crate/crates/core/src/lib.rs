//! Rotationally symmetric translating solitons of the flow by powers of the
//! mean curvature: profile construction from a Taylor launch at the origin,
//! far-field expansions and a battery of executable checks.

pub mod asymptotics;
pub mod error;
pub mod exec;
pub mod model;
pub mod numerics;
pub mod ode;
pub mod profile;
mod radau;
pub mod report;
pub mod series;
pub mod sweep;
pub mod verify;

pub use asymptotics::{
    asymptotic_eval, asymptotic_y, asymptotic_z, fit_far_field, FarFieldFit,
};
pub use error::{Result, SolitonError};
pub use model::{
    coeff_b, coeff_c, coefficients, g_eval, g_invert, validate_params, CoefficientSet, ModelParams,
};
pub use profile::{
    phase_trajectory, solve_profile, solve_profile_with, PhaseTrajectory, ProfilePoint,
    RadialProfile, SolveOptions,
};
pub use exec::Execution;
pub use report::{emit_report, parse_report, Format};
pub use series::{series_coefficients, OriginSeries};
pub use verify::{
    check_bounds, check_blow_down, check_convexity, check_growth, check_pde_residual,
    check_phase_monotone, check_refinement_agreement, run_battery, scan_gradient_bound,
    Battery, CheckReport, GradientScanReport,
};
