//! Parameter sweeps over independent `(n, alpha)` cells.

use crate::asymptotics::{fit_default, FarFieldFit};
use crate::error::Result;
use crate::exec::Execution;
use crate::model::ModelParams;
use crate::profile::{solve_profile, RadialProfile};

pub const TABLE_DIMS: [i64; 5] = [2, 3, 4, 5, 6];
pub const TABLE_ALPHAS: [f64; 4] = [0.5, 1.0, 2.0, 3.0];

/// The `{2..6} x {0.5, 1, 2, 3}` grid, sorted by `(n, alpha)`.
pub fn table_cells() -> Vec<ModelParams> {
    TABLE_DIMS
        .iter()
        .flat_map(|&n| TABLE_ALPHAS.iter().map(move |&a| ModelParams::new(n, a)))
        .collect::<Result<_>>()
        .expect("table grid is valid")
}

fn sorted(mut cells: Vec<ModelParams>) -> Vec<ModelParams> {
    cells.sort_by(|a, b| a.n().cmp(&b.n()).then(a.alpha().total_cmp(&b.alpha())));
    cells
}

pub fn solve_cells(
    cells: &[ModelParams],
    t_max: f64,
    tol: f64,
    exec: Execution,
) -> Result<Vec<RadialProfile>> {
    exec.try_map(cells, |p| solve_profile(p, t_max, tol))
}

/// Default far-field fit per cell, rows sorted by `(n, alpha)`.
pub fn fit_table(cells: &[ModelParams], t_max: f64, tol: f64, exec: Execution) -> Result<Vec<FarFieldFit>> {
    let cells = sorted(cells.to_vec());
    exec.try_map(&cells, |p| fit_default(p, t_max, tol))
}
