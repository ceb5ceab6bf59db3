//! Least-squares exponential-rate fitting for decay/growth diagnostics.

use serde::{Deserialize, Serialize};

/// Result of fitting `ln y ≈ a + rate * t` over a time window.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct RateFit {
    pub rate: f64,
    pub intercept: f64,
    /// Two standard errors of the slope, from residual variance.
    pub half_width: f64,
    pub window: (f64, f64),
    pub n_points: usize,
}

/// Fit the log-slope of `|y|` against `t` on `window`, skipping non-positive
/// magnitudes. Returns `None` with fewer than 3 usable points.
pub fn fit_log_slope(t: &[f64], y: &[f64], window: (f64, f64)) -> Option<RateFit> {
    let mut ts = Vec::new();
    let mut ls = Vec::new();
    for (&ti, &yi) in t.iter().zip(y) {
        if ti >= window.0 && ti <= window.1 && yi.abs() > 0.0 && yi.is_finite() {
            ts.push(ti);
            ls.push(yi.abs().ln());
        }
    }
    let n = ts.len();
    if n < 3 {
        return None;
    }
    let nf = n as f64;
    let tbar = ts.iter().sum::<f64>() / nf;
    let lbar = ls.iter().sum::<f64>() / nf;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    for i in 0..n {
        sxx += (ts[i] - tbar) * (ts[i] - tbar);
        sxy += (ts[i] - tbar) * (ls[i] - lbar);
    }
    if sxx == 0.0 {
        return None;
    }
    let rate = sxy / sxx;
    let intercept = lbar - rate * tbar;
    let mut ss_res = 0.0;
    for i in 0..n {
        let r = ls[i] - (intercept + rate * ts[i]);
        ss_res += r * r;
    }
    let var = if n > 2 { ss_res / (n - 2) as f64 } else { 0.0 };
    let se = (var / sxx).sqrt();
    Some(RateFit {
        rate,
        intercept,
        half_width: 2.0 * se,
        window,
        n_points: n,
    })
}

/// Default fit window `[0.3 T, 0.9 T]`.
pub fn default_window(t_final: f64) -> (f64, f64) {
    (0.3 * t_final, 0.9 * t_final)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_exact_exponential() {
        let t: Vec<f64> = (0..100).map(|i| 0.1 * i as f64).collect();
        let y: Vec<f64> = t.iter().map(|&ti| 3.0 * (-1.7 * ti).exp()).collect();
        let fit = fit_log_slope(&t, &y, (1.0, 9.0)).unwrap();
        assert!((fit.rate + 1.7).abs() < 1e-12);
        assert!(fit.half_width < 1e-10);
    }
}
