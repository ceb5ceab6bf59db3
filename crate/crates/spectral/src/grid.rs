//! Sampled functions on piecewise grids aligned with a wave profile.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use waves_core::WaveProfile;

use crate::error::{Result, SpectralError};

/// Complex samples on a strictly increasing grid avoiding the
/// discontinuity set; each sample carries its piece label.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GridFunction {
    pub grid: Vec<f64>,
    pub values: Vec<Complex64>,
    pub piece_index: Vec<usize>,
}

impl GridFunction {
    pub fn len(&self) -> usize {
        self.grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.grid.is_empty()
    }

    pub fn from_fn<F: Fn(f64) -> Complex64>(grid: Vec<f64>, pieces: Vec<usize>, f: F) -> Self {
        let values = grid.iter().map(|&x| f(x)).collect();
        Self {
            grid,
            values,
            piece_index: pieces,
        }
    }

    pub fn map<F: Fn(Complex64) -> Complex64>(&self, f: F) -> Self {
        Self {
            grid: self.grid.clone(),
            values: self.values.iter().map(|&v| f(v)).collect(),
            piece_index: self.piece_index.clone(),
        }
    }

    /// Value at `x0` by quartic interpolation from the nearest same-piece
    /// samples.
    pub fn interp(&self, x0: f64) -> Complex64 {
        let i = match self
            .grid
            .binary_search_by(|g| g.partial_cmp(&x0).unwrap())
        {
            Ok(i) => return self.values[i],
            Err(i) => i,
        };
        let piece = if i < self.piece_index.len() {
            self.piece_index[i]
        } else {
            *self.piece_index.last().unwrap()
        };
        let lo = self.piece_index.partition_point(|&p| p < piece);
        let hi = self.piece_index.partition_point(|&p| p <= piece);
        let span = &self.grid[lo..hi];
        let center = span.partition_point(|&g| g < x0) + lo;
        let start = center.saturating_sub(2).clamp(lo, hi.saturating_sub(5).max(lo));
        let end = (start + 5).min(hi);
        let mut acc = Complex64::new(0.0, 0.0);
        for j in start..end {
            let mut lag = 1.0;
            for k in start..end {
                if k != j {
                    lag *= (x0 - self.grid[k]) / (self.grid[j] - self.grid[k]);
                }
            }
            acc += self.values[j] * lag;
        }
        acc
    }

    /// Ranges of indices per piece, in order.
    pub fn piece_ranges(&self) -> Vec<(usize, std::ops::Range<usize>)> {
        let mut out = Vec::new();
        let mut start = 0usize;
        while start < self.piece_index.len() {
            let piece = self.piece_index[start];
            let end = self.piece_index.partition_point(|&p| p <= piece);
            out.push((piece, start..end));
            start = end;
        }
        out
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }
}

/// Per-jump complex values, indexed like `profile.discontinuities`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JumpData {
    pub values: Vec<Complex64>,
}

impl JumpData {
    pub fn zeros(profile: &WaveProfile) -> Self {
        Self {
            values: vec![Complex64::new(0.0, 0.0); profile.discontinuities.len()],
        }
    }

    pub fn unit(profile: &WaveProfile, index: usize) -> Self {
        let mut out = Self::zeros(profile);
        out.values[index] = Complex64::new(1.0, 0.0);
        out
    }
}

/// Build a uniform-per-piece grid covering `[x_lo, x_hi]` with about `n`
/// points, keeping a `gap` clearance from every discontinuity.
pub fn profile_grid(
    profile: &WaveProfile,
    x_lo: f64,
    x_hi: f64,
    n: usize,
    gap: f64,
) -> Result<(Vec<f64>, Vec<usize>)> {
    assert!(x_lo < x_hi);
    let mut cuts = vec![x_lo];
    for d in &profile.discontinuities {
        if d.position > x_lo && d.position < x_hi {
            cuts.push(d.position);
        }
    }
    cuts.push(x_hi);
    let mut grid = Vec::new();
    let mut pieces = Vec::new();
    let total = x_hi - x_lo;
    for w in cuts.windows(2) {
        let (a, b) = (w[0] + gap, w[1] - gap);
        if b <= a {
            return Err(SpectralError::GridTooCoarse(format!(
                "piece [{}, {}] thinner than the jump clearance",
                w[0], w[1]
            )));
        }
        let m = ((n as f64) * (b - a) / total).ceil().max(8.0) as usize;
        let piece = profile.piece_index(0.5 * (a + b));
        for i in 0..=m {
            grid.push(a + (b - a) * i as f64 / m as f64);
            pieces.push(piece);
        }
    }
    Ok((grid, pieces))
}

#[cfg(test)]
mod tests {
    use super::*;
    use waves_core::catalog;

    #[test]
    fn grid_avoids_jumps_and_labels_pieces() {
        let nl = catalog::figure().unwrap();
        let wave = catalog::figure_double(&nl).unwrap();
        let (grid, pieces) = profile_grid(&wave, -6.0, 6.0, 200, 1e-6).unwrap();
        for w in grid.windows(2) {
            assert!(w[1] >= w[0]);
        }
        for (x, p) in grid.iter().zip(&pieces) {
            for d in &wave.discontinuities {
                assert!((x - d.position).abs() > 1e-12);
            }
            assert_eq!(*p, wave.piece_index(*x));
        }
        assert_eq!(
            pieces.iter().collect::<std::collections::BTreeSet<_>>().len(),
            3
        );
    }

    #[test]
    fn interpolation_is_high_order() {
        let grid: Vec<f64> = (0..=100).map(|i| i as f64 * 0.05).collect();
        let pieces = vec![0usize; grid.len()];
        let f = GridFunction::from_fn(grid, pieces, |x| Complex64::new((1.3 * x).sin(), 0.0));
        let v = f.interp(2.513);
        assert!((v.re - (1.3f64 * 2.513).sin()).abs() < 1e-7);
    }
}
