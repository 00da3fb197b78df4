//! Small interpolation and differentiation kernels on nonuniform nodes.

/// Fornberg weights for the `order`-th derivative at `x0` from values at `nodes`.
pub fn fd_weights(x0: f64, nodes: &[f64], order: usize) -> Vec<f64> {
    let n = nodes.len();
    let mut c = vec![vec![0.0; order + 1]; n];
    let mut c1 = 1.0;
    let mut c4 = nodes[0] - x0;
    c[0][0] = 1.0;
    for i in 1..n {
        let mn = i.min(order);
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = nodes[i] - x0;
        for j in 0..i {
            let c3 = nodes[i] - nodes[j];
            c2 *= c3;
            if j == i - 1 {
                for k in (1..=mn).rev() {
                    c[i][k] = c1 * (k as f64 * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
                }
                c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
            }
            for k in (1..=mn).rev() {
                c[j][k] = (c4 * c[j][k] - k as f64 * c[j][k - 1]) / c3;
            }
            c[j][0] = c4 * c[j][0] / c3;
        }
        c1 = c2;
    }
    c.into_iter().map(|row| row[order]).collect()
}

/// Lagrange interpolation through `xs`/`ys` evaluated at `x`.
pub fn lagrange(xs: &[f64], ys: &[f64], x: f64) -> f64 {
    let mut acc = 0.0;
    for (i, (&xi, &yi)) in xs.iter().zip(ys).enumerate() {
        let mut basis = 1.0;
        for (j, &xj) in xs.iter().enumerate() {
            if i != j {
                basis *= (x - xj) / (xi - xj);
            }
        }
        acc += basis * yi;
    }
    acc
}

/// Cubic Hermite interpolant on `[x0, x1]` from values and slopes.
pub fn hermite(x0: f64, x1: f64, y0: f64, y1: f64, d0: f64, d1: f64, x: f64) -> f64 {
    let h = x1 - x0;
    let s = (x - x0) / h;
    let s2 = s * s;
    let s3 = s2 * s;
    let h00 = 2.0 * s3 - 3.0 * s2 + 1.0;
    let h10 = s3 - 2.0 * s2 + s;
    let h01 = -2.0 * s3 + 3.0 * s2;
    let h11 = s3 - s2;
    h00 * y0 + h10 * h * d0 + h01 * y1 + h11 * h * d1
}

/// Index `i` with `xs[i] <= x < xs[i + 1]`, clamped to a valid interval.
pub fn bracket(xs: &[f64], x: f64) -> usize {
    let i = xs.partition_point(|&v| v <= x);
    i.saturating_sub(1).min(xs.len().saturating_sub(2))
}

/// Start of a `width`-point stencil around interval `i`, kept inside `[lo, len)`.
pub fn stencil_start(i: usize, width: usize, lo: usize, len: usize) -> usize {
    let half = (width - 1) / 2;
    let start = i.saturating_sub(half).max(lo);
    start.min(len.saturating_sub(width)).max(lo)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fornberg_central_three_point() {
        let w = fd_weights(0.0, &[-1.0, 0.0, 1.0], 1);
        assert!((w[0] + 0.5).abs() < 1e-15 && w[1].abs() < 1e-15 && (w[2] - 0.5).abs() < 1e-15);
        let w2 = fd_weights(0.0, &[-1.0, 0.0, 1.0], 2);
        assert!((w2[0] - 1.0).abs() < 1e-15 && (w2[1] + 2.0).abs() < 1e-15);
    }

    #[test]
    fn nonuniform_derivative_of_polynomial_is_exact() {
        let nodes = [0.1, 0.25, 0.3, 0.55, 0.7, 0.9, 1.3];
        let w = fd_weights(0.5, &nodes, 1);
        let f = |x: f64| x.powi(6) - 2.0 * x.powi(3) + x;
        let df = |x: f64| 6.0 * x.powi(5) - 6.0 * x * x + 1.0;
        let est: f64 = nodes.iter().zip(&w).map(|(x, wi)| wi * f(*x)).sum();
        assert!((est - df(0.5)).abs() < 1e-11);
    }

    #[test]
    fn interpolants_reproduce_cubics() {
        let f = |x: f64| 2.0 * x.powi(3) - x + 0.5;
        let df = |x: f64| 6.0 * x * x - 1.0;
        let xs = [0.0, 0.4, 1.1, 1.5];
        let ys: Vec<f64> = xs.iter().map(|&x| f(x)).collect();
        assert!((lagrange(&xs, &ys, 0.77) - f(0.77)).abs() < 1e-13);
        let v = hermite(0.4, 1.1, f(0.4), f(1.1), df(0.4), df(1.1), 0.9);
        assert!((v - f(0.9)).abs() < 1e-13);
    }

    #[test]
    fn bracket_and_stencil() {
        let xs = [0.0, 1.0, 2.0, 3.0, 4.0];
        assert_eq!(bracket(&xs, 0.0), 0);
        assert_eq!(bracket(&xs, 2.5), 2);
        assert_eq!(bracket(&xs, 4.0), 3);
        assert_eq!(stencil_start(0, 4, 0, 5), 0);
        assert_eq!(stencil_start(3, 4, 0, 5), 1);
        assert_eq!(stencil_start(2, 4, 1, 5), 1);
    }
}
