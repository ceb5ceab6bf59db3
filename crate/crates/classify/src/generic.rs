//! Genericity of a pair (f, g): no two distinct non-damping zeros of g may
//! share the same advection speed.

use serde::{Deserialize, Serialize};
use waves_core::Nonlinearity;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GenericPairReport {
    pub generic: bool,
    /// the offending pair when not generic
    pub offending: Option<(f64, f64)>,
    /// zeros of g found in the interval with g' >= 0
    pub candidate_zeros: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GenericError {
    /// two adjacent sign changes could not be separated on the scan grid
    ZeroClusterUnresolved,
}

impl std::fmt::Display for GenericError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "zero cluster unresolved on the scan grid")
    }
}
impl std::error::Error for GenericError {}

/// Enumerate zeros of g in `interval` on a 10^4-point grid; for each pair
/// of distinct zeros with `g' >= 0` at both, require distinct `f'` values.
pub fn check_generic_pair(
    nl: &Nonlinearity,
    interval: (f64, f64),
) -> Result<GenericPairReport, GenericError> {
    const GRID: usize = 10_000;
    let (a, b) = interval;
    let mut zeros = Vec::new();
    let h = (b - a) / GRID as f64;
    let mut prev = nl.g(a);
    let mut prev_x = a;
    for i in 1..=GRID {
        let x = a + i as f64 * h;
        let v = nl.g(x);
        if prev == 0.0 {
            zeros.push(prev_x);
        } else if v != 0.0 && v.signum() != prev.signum() {
            // bisection refine
            let (mut lo, mut hi, mut flo) = (prev_x, x, prev);
            for _ in 0..80 {
                let mid = 0.5 * (lo + hi);
                let fm = nl.g(mid);
                if fm == 0.0 {
                    lo = mid;
                    hi = mid;
                    break;
                }
                if fm.signum() == flo.signum() {
                    lo = mid;
                    flo = fm;
                } else {
                    hi = mid;
                }
            }
            zeros.push(0.5 * (lo + hi));
        }
        prev = v;
        prev_x = x;
    }
    if prev == 0.0 {
        zeros.push(prev_x);
    }
    // adjacent grid cells with sign changes that collapse onto the same
    // zero mark an unresolved cluster
    for w in zeros.windows(2) {
        if (w[1] - w[0]).abs() < h {
            return Err(GenericError::ZeroClusterUnresolved);
        }
    }

    let candidates: Vec<f64> = zeros
        .into_iter()
        .filter(|&z| nl.g1(z) >= 0.0)
        .collect();
    for i in 0..candidates.len() {
        for j in (i + 1)..candidates.len() {
            let (u, v) = (candidates[i], candidates[j]);
            if (nl.f1(u) - nl.f1(v)).abs() <= 1e-10 {
                return Ok(GenericPairReport {
                    generic: false,
                    offending: Some((u, v)),
                    candidate_zeros: candidates,
                });
            }
        }
    }
    Ok(GenericPairReport {
        generic: true,
        offending: None,
        candidate_zeros: candidates,
    })
}
