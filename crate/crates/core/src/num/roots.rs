//! Bracketed bisection followed by Newton polishing.

/// Bisect `f` on `[a, b]` (which must bracket a sign change) to width `xtol`.
pub fn bisect<F: Fn(f64) -> f64>(f: &F, mut a: f64, mut b: f64, xtol: f64) -> Option<f64> {
    let mut fa = f(a);
    let fb = f(b);
    if fa == 0.0 {
        return Some(a);
    }
    if fb == 0.0 {
        return Some(b);
    }
    if fa.signum() == fb.signum() {
        return None;
    }
    for _ in 0..400 {
        let m = 0.5 * (a + b);
        if (b - a).abs() <= xtol {
            return Some(m);
        }
        let fm = f(m);
        if fm == 0.0 {
            return Some(m);
        }
        if fm.signum() == fa.signum() {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    Some(0.5 * (a + b))
}

/// Bisection to width `1e-12` scaled, then up to `polish` Newton steps.
pub fn solve_bracketed<F, G>(f: F, df: G, a: f64, b: f64, polish: usize) -> Option<f64>
where
    F: Fn(f64) -> f64,
    G: Fn(f64) -> f64,
{
    let xtol = 1e-12 * (1.0 + a.abs().max(b.abs()));
    let mut x = bisect(&f, a, b, xtol)?;
    for _ in 0..polish {
        let d = df(x);
        if d == 0.0 || !d.is_finite() {
            break;
        }
        let step = f(x) / d;
        let xn = x - step;
        if xn.is_finite() && xn >= a.min(b) && xn <= a.max(b) {
            x = xn;
        } else {
            break;
        }
    }
    Some(x)
}

/// Scan `[a, b]` on `n` uniform cells and return one refined root per
/// sign-change cell.
pub fn scan_roots<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, n: usize) -> Vec<f64> {
    let mut roots = Vec::new();
    let h = (b - a) / n as f64;
    let mut x_prev = a;
    let mut f_prev = f(a);
    for i in 1..=n {
        let x = a + i as f64 * h;
        let v = f(x);
        if f_prev == 0.0 {
            roots.push(x_prev);
        } else if v != 0.0 && v.signum() != f_prev.signum() {
            if let Some(r) = bisect(&f, x_prev, x, 1e-13 * (1.0 + x.abs())) {
                roots.push(r);
            }
        }
        x_prev = x;
        f_prev = v;
    }
    if f_prev == 0.0 {
        roots.push(x_prev);
    }
    roots
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_cosine_roots() {
        let roots = scan_roots(|x: f64| x.cos(), 0.0, 10.0, 1000);
        assert_eq!(roots.len(), 3);
        for (r, expect) in roots.iter().zip([1.0, 3.0, 5.0]) {
            assert!((r - expect * std::f64::consts::FRAC_PI_2).abs() < 1e-10);
        }
    }

    #[test]
    fn newton_polish_tightens() {
        let r = solve_bracketed(|x| x * x - 2.0, |x| 2.0 * x, 0.0, 2.0, 3).unwrap();
        assert!((r - 2.0f64.sqrt()).abs() < 1e-14);
    }
}
