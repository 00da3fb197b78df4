//! Three-stage Radau IIA collocation step (order 5, L-stable) for the pair
//! `r' = p, p' = F(t, p)`.
//!
//! Only `p` enters the implicit stage equations; `r` is carried along by the
//! same quadrature weights. Far from the origin the slope equation is stiff
//! for `alpha < 1` (the Jacobian behaves like `-alpha p^(2 - alpha)`), which is
//! what rules out an explicit pair.

use crate::ode::RadialOde;

const SQRT6: f64 = 2.449_489_742_783_178;

pub(crate) const C: [f64; 3] = [(4.0 - SQRT6) / 10.0, (4.0 + SQRT6) / 10.0, 1.0];

pub(crate) const A: [[f64; 3]; 3] = [
    [
        (88.0 - 7.0 * SQRT6) / 360.0,
        (296.0 - 169.0 * SQRT6) / 1800.0,
        (-2.0 + 3.0 * SQRT6) / 225.0,
    ],
    [
        (296.0 + 169.0 * SQRT6) / 1800.0,
        (88.0 + 7.0 * SQRT6) / 360.0,
        (-2.0 - 3.0 * SQRT6) / 225.0,
    ],
    [(16.0 - SQRT6) / 36.0, (16.0 + SQRT6) / 36.0, 1.0 / 9.0],
];

const MAX_NEWTON: usize = 40;

/// Solves a 3x3 system in place with partial pivoting. Returns `None` when singular.
fn solve3(mut m: [[f64; 3]; 3], mut b: [f64; 3]) -> Option<[f64; 3]> {
    for col in 0..3 {
        let piv = (col..3).max_by(|&i, &j| m[i][col].abs().total_cmp(&m[j][col].abs()))?;
        if m[piv][col] == 0.0 || !m[piv][col].is_finite() {
            return None;
        }
        m.swap(col, piv);
        b.swap(col, piv);
        for row in col + 1..3 {
            let f = m[row][col] / m[col][col];
            for k in col..3 {
                m[row][k] -= f * m[col][k];
            }
            b[row] -= f * b[col];
        }
    }
    let mut x = [0.0; 3];
    for row in (0..3).rev() {
        let mut acc = b[row];
        for k in row + 1..3 {
            acc -= m[row][k] * x[k];
        }
        x[row] = acc / m[row][row];
    }
    x.iter().all(|v| v.is_finite()).then_some(x)
}

/// One Radau IIA step of size `h` from `(t, r, p)`. `None` if Newton fails.
///
/// `newton_tol` bounds the final Newton correction relative to `1 + |P_i|`.
pub(crate) fn step(ode: &RadialOde, t: f64, r: f64, p: f64, h: f64, newton_tol: f64) -> Option<(f64, f64)> {
    let f0 = ode.rhs(t, p);
    if !f0.is_finite() {
        return None;
    }
    let times = [t + C[0] * h, t + C[1] * h, t + C[2] * h];
    let mut stages = [p + C[0] * h * f0, p + C[1] * h * f0, p + C[2] * h * f0];
    let mut converged = false;
    let mut last_norm = f64::INFINITY;
    for _ in 0..MAX_NEWTON {
        let f = [
            ode.rhs(times[0], stages[0]),
            ode.rhs(times[1], stages[1]),
            ode.rhs(times[2], stages[2]),
        ];
        let fp = [
            ode.rhs_dp(times[0], stages[0]),
            ode.rhs_dp(times[1], stages[1]),
            ode.rhs_dp(times[2], stages[2]),
        ];
        let mut g = [0.0; 3];
        let mut jac = [[0.0; 3]; 3];
        for i in 0..3 {
            g[i] = stages[i] - p - h * (A[i][0] * f[0] + A[i][1] * f[1] + A[i][2] * f[2]);
            for j in 0..3 {
                jac[i][j] = if i == j { 1.0 } else { 0.0 } - h * A[i][j] * fp[j];
            }
        }
        let delta = solve3(jac, [-g[0], -g[1], -g[2]])?;
        let mut norm: f64 = 0.0;
        for i in 0..3 {
            stages[i] += delta[i];
            norm = norm.max(delta[i].abs() / (1.0 + stages[i].abs()));
        }
        if !norm.is_finite() {
            return None;
        }
        if norm <= newton_tol || (norm <= 1e3 * newton_tol && norm >= last_norm) {
            converged = true;
            break;
        }
        last_norm = norm;
    }
    if !converged {
        return None;
    }
    let r_new = r + h * (A[2][0] * stages[0] + A[2][1] * stages[1] + A[2][2] * stages[2]);
    Some((r_new, stages[2]))
}
