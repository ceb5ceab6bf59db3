//! The weighted derivative norm on functions vanishing at the
//! characteristic point, its equivalence constants with W^{1,inf}, and the
//! spectral projector onto the translation mode.

use num_complex::Complex64;
use waves_core::num::quad;
use waves_core::profile_ode::vector_field_derivative;
use waves_core::{Nonlinearity, WaveProfile};

use crate::chi::ChiWeight;
use crate::error::{Result, SpectralError};
use crate::fd::stencil5;
use crate::grid::GridFunction;

/// `||v||_* = sup |exp(-∫_0^x chi) (v' - (U''/U') v)|` for `v` with
/// `v(0) = 0`, differentiated on the sample grid.
pub fn star_norm(
    profile: &WaveProfile,
    nl: &Nonlinearity,
    chi: &ChiWeight,
    v: &GridFunction,
) -> Result<f64> {
    let at_zero = v.interp(0.0).norm();
    if at_zero > 1e-8 {
        return Err(SpectralError::GridTooCoarse(format!(
            "v(0) = {at_zero:.3e} is not zero"
        )));
    }
    let sigma = profile.sigma;
    let range = 0..v.len();
    let mut sup = 0.0f64;
    for i in 0..v.len() {
        let (start, weights) = stencil5(&v.grid, range.clone(), i);
        let mut dv = Complex64::new(0.0, 0.0);
        for (j, w) in weights.iter().enumerate() {
            dv += v.values[start + j] * *w;
        }
        let rho = vector_field_derivative(nl, sigma, profile.value(v.grid[i])).unwrap_or(0.0);
        let d = dv - v.values[i] * rho;
        sup = sup.max(chi.weight(v.grid[i]) * d.norm());
    }
    Ok(sup)
}

/// The kernel bound `K = sup_x |∫_0^x U'(x)/U'(y) dy|`, evaluated on an
/// expanding window until it stabilizes within 1%, plus derived equivalence
/// constants `(lower, upper)` for `||v||_* / ||v||_{W^{1,inf}}`.
pub struct EquivalenceConstants {
    pub kernel_sup: f64,
    pub lower: f64,
    pub upper: f64,
}

pub fn equivalence_constants(
    profile: &WaveProfile,
    nl: &Nonlinearity,
    chi: &ChiWeight,
) -> Result<EquivalenceConstants> {
    let du = |x: f64| profile.derivative(nl, x);
    let kernel_at = |x: f64| {
        let v = quad::integrate(|y| 1.0 / du(y), 0.0_f64.min(x), 0.0_f64.max(x), 1e-12);
        (du(x) * v).abs()
    };
    let mut prev_sup = 0.0f64;
    let mut window = 4.0f64;
    let kernel_sup;
    loop {
        let mut kernel_sup_w: f64 = 0.0;
        for i in 0..=400 {
            let x = -window + 2.0 * window * i as f64 / 400.0;
            kernel_sup_w = kernel_sup_w.max(kernel_at(x));
        }
        if prev_sup > 0.0 && (kernel_sup_w - prev_sup).abs() <= 0.01 * kernel_sup_w {
            kernel_sup = kernel_sup_w;
            break;
        }
        prev_sup = kernel_sup_w;
        window *= 2.0;
        if window > 300.0 {
            return Err(SpectralError::WindowNotConverged(format!(
                "kernel sup {kernel_sup_w} still moving at window {window}"
            )));
        }
    }

    // weight extrema and the log-slope bound
    let mut w_max = 0.0f64;
    let mut w_min = f64::INFINITY;
    let mut rho_max = 0.0f64;
    for i in 0..=2000 {
        let x = -25.0 + 50.0 * i as f64 / 2000.0;
        let w = chi.weight(x);
        w_max = w_max.max(w);
        w_min = w_min.min(w);
        rho_max = rho_max
            .max(vector_field_derivative(nl, profile.sigma, profile.value(x)).unwrap_or(0.0).abs());
    }
    // ||v||_* <= w_max (1 + rho_max K) ||Dv||-side estimate
    let upper = w_max * (1.0 + rho_max);
    // ||v||_{W^{1,inf}} <= max(K, 1 + rho_max K) sup|Dv|
    //                   <= max(K, 1 + rho_max K) / w_min ||v||_*
    let lower = w_min / kernel_sup.max(1.0 + rho_max * kernel_sup);
    Ok(EquivalenceConstants {
        kernel_sup,
        lower,
        upper,
    })
}

/// Spectral projector onto the translation mode:
/// `Pi A = A(0) U'/U'(0)`.
pub fn project_zero_mode(
    profile: &WaveProfile,
    nl: &Nonlinearity,
    a: &GridFunction,
) -> GridFunction {
    let a0 = a.interp(0.0);
    let du0 = profile.derivative(nl, 0.0);
    GridFunction {
        grid: a.grid.clone(),
        values: a
            .grid
            .iter()
            .map(|&x| a0 * (profile.derivative(nl, x) / du0))
            .collect(),
        piece_index: a.piece_index.clone(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use waves_core::catalog;

    fn setup() -> (Nonlinearity, WaveProfile, ChiWeight) {
        let nl = catalog::figure().unwrap();
        let wave = catalog::figure_front(&nl).unwrap();
        let chi = crate::chi::weight_chi(&wave, &nl, 1).unwrap();
        (nl, wave, chi)
    }

    fn grid_fn(f: impl Fn(f64) -> f64) -> GridFunction {
        let grid: Vec<f64> = (0..=1200).map(|i| -12.0 + 0.02 * i as f64).collect();
        let pieces = vec![0usize; grid.len()];
        GridFunction::from_fn(grid, pieces, |x| Complex64::new(f(x), 0.0))
    }

    #[test]
    fn zero_function_has_zero_norm() {
        let (nl, wave, chi) = setup();
        let v = grid_fn(|_| 0.0);
        assert_eq!(star_norm(&wave, &nl, &chi, &v).unwrap(), 0.0);
    }

    #[test]
    fn kernel_sup_is_window_stable() {
        let (nl, wave, chi) = setup();
        let eq = equivalence_constants(&wave, &nl, &chi).unwrap();
        assert!(eq.kernel_sup.is_finite() && eq.kernel_sup > 0.0);
        assert!(eq.lower > 0.0 && eq.upper > eq.lower);
    }

    #[test]
    fn random_compact_functions_lie_within_the_constants() {
        let (nl, wave, chi) = setup();
        let eq = equivalence_constants(&wave, &nl, &chi).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let a: f64 = rng.gen_range(0.3..2.0);
            let b: f64 = rng.gen_range(0.5..2.5);
            let c: f64 = rng.gen_range(-1.0..1.0);
            // compactly supported with v(0) = 0
            let f = move |x: f64| {
                a * x.sin().powi(2) * x.signum().max(0.0) * waves_core::num::bump::bump(x / 6.0)
                    + c * (b * x).sin() * waves_core::num::bump::bump((x - 2.0) / 3.0)
            };
            let v = grid_fn(f);
            let star = star_norm(&wave, &nl, &chi, &v).unwrap();
            // W^{1,inf} norm on the grid
            let mut w1 = 0.0f64;
            for i in 1..v.len() - 1 {
                let d = (v.values[i + 1].re - v.values[i - 1].re)
                    / (v.grid[i + 1] - v.grid[i - 1]);
                w1 = w1.max(v.values[i].norm()).max(d.abs());
            }
            if w1 < 1e-12 {
                continue;
            }
            let ratio = star / w1;
            assert!(
                ratio >= eq.lower * 0.99 && ratio <= eq.upper * 1.01,
                "ratio {ratio} outside [{}, {}]",
                eq.lower,
                eq.upper
            );
        }
    }

    #[test]
    fn projector_fixes_the_translation_mode_and_is_idempotent() {
        let (nl, wave, _chi) = setup();
        let v = {
            let grid: Vec<f64> = (0..=600).map(|i| -6.0 + 0.02 * i as f64).collect();
            let pieces = vec![0usize; grid.len()];
            GridFunction::from_fn(grid, pieces, |x| {
                Complex64::new(wave.derivative(&nl, x), 0.0)
            })
        };
        let pv = project_zero_mode(&wave, &nl, &v);
        for i in 0..v.len() {
            assert!((pv.values[i] - v.values[i]).norm() < 1e-12);
        }
        // annihilates functions vanishing at 0
        let w = v.map(|_| Complex64::new(0.0, 0.0));
        let mut w2 = w.clone();
        for (i, x) in w.grid.iter().enumerate() {
            w2.values[i] = Complex64::new(x.sin() * x.signum(), 0.0) * Complex64::new(*x, 0.0);
        }
        let pw = project_zero_mode(&wave, &nl, &w2);
        assert!(pw.sup_norm() < 1e-12);
        // idempotent and linear
        let a = {
            let grid: Vec<f64> = (0..=600).map(|i| -6.0 + 0.02 * i as f64).collect();
            let pieces = vec![0usize; grid.len()];
            GridFunction::from_fn(grid, pieces, |x| Complex64::new((0.3 * x).cos(), 0.1))
        };
        let pa = project_zero_mode(&wave, &nl, &a);
        let ppa = project_zero_mode(&wave, &nl, &pa);
        for i in 0..a.len() {
            assert!((ppa.values[i] - pa.values[i]).norm() < 1e-12);
        }
    }

    #[test]
    fn projector_is_linear() {
        let (nl, wave, _) = setup();
        let grid: Vec<f64> = (0..=400).map(|i| -4.0 + 0.02 * i as f64).collect();
        let pieces = vec![0usize; grid.len()];
        let a = GridFunction::from_fn(grid.clone(), pieces.clone(), |x| {
            Complex64::new((1.1 * x).sin() + 0.3, -0.2 * x)
        });
        let b = GridFunction::from_fn(grid, pieces, |x| Complex64::new(0.5 * x * x - 1.0, 0.7));
        let (alpha, beta) = (Complex64::new(1.3, -0.4), Complex64::new(-0.6, 0.9));
        let mut combo = a.clone();
        for i in 0..a.len() {
            combo.values[i] = alpha * a.values[i] + beta * b.values[i];
        }
        let p_combo = project_zero_mode(&wave, &nl, &combo);
        let pa = project_zero_mode(&wave, &nl, &a);
        let pb = project_zero_mode(&wave, &nl, &b);
        for i in 0..a.len() {
            let expect = alpha * pa.values[i] + beta * pb.values[i];
            assert!((p_combo.values[i] - expect).norm() < 1e-12);
        }
    }
}
