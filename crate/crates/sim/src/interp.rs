//! Local interpolation along characteristic data.

/// Cubic Hermite interpolation of `(x, y, dy/dx)` pairs.
pub fn hermite(x0: f64, y0: f64, m0: f64, x1: f64, y1: f64, m1: f64, x: f64) -> f64 {
    let h = x1 - x0;
    let t = (x - x0) / h;
    let t2 = t * t;
    let t3 = t2 * t;
    (2.0 * t3 - 3.0 * t2 + 1.0) * y0
        + (t3 - 2.0 * t2 + t) * h * m0
        + (-2.0 * t3 + 3.0 * t2) * y1
        + (t3 - t2) * h * m1
}

/// Derivative of the cubic Hermite interpolant at `x`.
pub fn hermite_deriv(x0: f64, y0: f64, m0: f64, x1: f64, y1: f64, m1: f64, x: f64) -> f64 {
    let h = x1 - x0;
    let t = (x - x0) / h;
    let t2 = t * t;
    ((6.0 * t2 - 6.0 * t) * y0
        + (3.0 * t2 - 4.0 * t + 1.0) * h * m0
        + (-6.0 * t2 + 6.0 * t) * y1
        + (3.0 * t2 - 2.0 * t) * h * m1)
        / h
}

/// Cubic Lagrange through four points, evaluated at `x`.
pub fn lagrange4(xs: &[f64; 4], ys: &[f64; 4], x: f64) -> f64 {
    let mut acc = 0.0;
    for j in 0..4 {
        let mut l = 1.0;
        for k in 0..4 {
            if k != j {
                l *= (x - xs[k]) / (xs[j] - xs[k]);
            }
        }
        acc += ys[j] * l;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hermite_reproduces_cubics() {
        let f = |x: f64| 2.0 * x.powi(3) - x + 1.0;
        let df = |x: f64| 6.0 * x * x - 1.0;
        let v = hermite(0.3, f(0.3), df(0.3), 1.1, f(1.1), df(1.1), 0.77);
        assert!((v - f(0.77)).abs() < 1e-13);
    }

    #[test]
    fn lagrange_reproduces_cubics() {
        let f = |x: f64| -x.powi(3) + 4.0 * x * x - 2.0;
        let xs = [0.0, 0.4, 1.0, 1.5];
        let ys = [f(0.0), f(0.4), f(1.0), f(1.5)];
        assert!((lagrange4(&xs, &ys, 0.83) - f(0.83)).abs() < 1e-12);
    }
}
