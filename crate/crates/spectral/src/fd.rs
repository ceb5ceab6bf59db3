//! Finite-difference weights on arbitrary nodes (Fornberg's recurrence).

/// Weights `w[k][j]` such that `h^(k)(z) ~ sum_j w[k][j] h(x[j])` for
/// derivative orders `k = 0..=m`.
pub fn fornberg_weights(z: f64, x: &[f64], m: usize) -> Vec<Vec<f64>> {
    let n = x.len();
    assert!(n > m, "need more nodes than the derivative order");
    let mut c = vec![vec![0.0f64; n]; m + 1];
    let mut c1 = 1.0;
    let mut c4 = x[0] - z;
    c[0][0] = 1.0;
    for i in 1..n {
        let mn = i.min(m);
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = x[i] - z;
        for j in 0..i {
            let c3 = x[i] - x[j];
            c2 *= c3;
            if j == i - 1 {
                for k in (1..=mn).rev() {
                    c[k][i] = c1 * (k as f64 * c[k - 1][i - 1] - c5 * c[k][i - 1]) / c2;
                }
                c[0][i] = -c1 * c5 * c[0][i - 1] / c2;
            }
            for k in (1..=mn).rev() {
                c[k][j] = (c4 * c[k][j] - k as f64 * c[k - 1][j]) / c3;
            }
            c[0][j] = c4 * c[0][j] / c3;
        }
        c1 = c2;
    }
    c
}

/// First-derivative weights on the 5 nodes nearest to index `i` within
/// `range`, centered when possible (4th order).
pub fn stencil5(grid: &[f64], range: std::ops::Range<usize>, i: usize) -> (usize, Vec<f64>) {
    let lo = range.start;
    let hi = range.end;
    assert!(hi - lo >= 5, "piece needs at least 5 samples");
    let start = i
        .saturating_sub(2)
        .clamp(lo, hi - 5);
    let nodes = &grid[start..start + 5];
    let w = fornberg_weights(grid[i], nodes, 1);
    (start, w[1].clone())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn central_weights_on_uniform_grid() {
        let x = [-2.0, -1.0, 0.0, 1.0, 2.0];
        let w = fornberg_weights(0.0, &x, 2);
        let expect1 = [1.0 / 12.0, -8.0 / 12.0, 0.0, 8.0 / 12.0, -1.0 / 12.0];
        for (a, b) in w[1].iter().zip(expect1) {
            assert!((a - b).abs() < 1e-13);
        }
        let expect2 = [-1.0 / 12.0, 16.0 / 12.0, -30.0 / 12.0, 16.0 / 12.0, -1.0 / 12.0];
        for (a, b) in w[2].iter().zip(expect2) {
            assert!((a - b).abs() < 1e-13);
        }
    }

    #[test]
    fn one_sided_derivative_is_fourth_order()
    {
        let f = |x: f64| (1.7 * x).exp();
        for &h in &[0.02, 0.01] {
            let nodes: Vec<f64> = (0..5).map(|i| i as f64 * h).collect();
            let w = fornberg_weights(0.0, &nodes, 1);
            let fd: f64 = w[1].iter().zip(&nodes).map(|(wi, &x)| wi * f(x)).sum();
            let err = (fd - 1.7).abs();
            assert!(err < 30.0 * h.powi(4), "h={h}: err {err}");
        }
    }

    #[test]
    fn extrapolation_weights() {
        // order-0 weights extrapolate to a point outside the nodes
        let nodes = [1.0, 2.0, 3.0, 4.0, 5.0];
        let w = fornberg_weights(0.0, &nodes, 0);
        let f = |x: f64| 3.0 * x.powi(4) - x + 2.0;
        let v: f64 = w[0].iter().zip(nodes).map(|(wi, x)| wi * f(x)).sum();
        assert!((v - f(0.0)).abs() < 1e-9);
    }
}
