//! The spectral report: endstate rates, characteristic eigenvalue ladders,
//! jump eigenvalues, and the decay rates theta and theta_k.

use serde::{Deserialize, Serialize};
use waves_core::{Nonlinearity, WaveProfile};

use crate::witness::Verdict;

/// Eigenvalue ladder attached to one characteristic point: `-k g'(u_star)`
/// for k = 0..=K.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CharLadder {
    pub x_star: f64,
    pub u_star: f64,
    pub eigenvalues: Vec<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SpectralReport {
    /// `g'` at the endstates (-inf, +inf)
    pub endstate_rates: (f64, f64),
    pub ladders: Vec<CharLadder>,
    /// `[g(U)]_d / [U]_d` per discontinuity
    pub jump_eigenvalues: Vec<(f64, f64)>,
    /// sharp decay rate for the linearized dynamics, when the wave is stable
    pub theta: Option<f64>,
    /// per-derivative decay rates `theta_k` for continuous fronts
    pub theta_k: Vec<f64>,
}

/// Default ladder depth.
pub const DEFAULT_LADDER_DEPTH: usize = 5;

/// Assemble the spectral report for a non-degenerate wave.
///
/// For continuous fronts, `theta = min(g'(u_star), -g'(u_-inf), -g'(u_+inf))`
/// and `theta_k = min(k g'(u_star), -g'(u_-inf), -g'(u_+inf))`; for waves
/// with jumps the rate also competes with the jump relaxation rates
/// `-[g(U)]_d/[U]_d`.
pub fn spectral_report(profile: &WaveProfile, nl: &Nonlinearity, depth: usize) -> SpectralReport {
    let chars = profile.characteristic_points();
    let ladders: Vec<CharLadder> = chars
        .iter()
        .map(|&(x_star, u_star)| CharLadder {
            x_star,
            u_star,
            eigenvalues: (0..=depth).map(|k| -(k as f64) * nl.g1(u_star)).collect(),
        })
        .collect();
    let jump_eigenvalues: Vec<(f64, f64)> = profile
        .discontinuities
        .iter()
        .map(|j| (j.position, profile.jump_eigenvalue(nl, j)))
        .collect();
    let endstate_rates = (nl.g1(profile.endstates.0), nl.g1(profile.endstates.1));

    let verdict = crate::classify(profile, nl).verdict;
    let theta = theta_for(&verdict, profile, nl);
    let theta_k = theta_k_table(&verdict, profile, nl, depth);

    SpectralReport {
        endstate_rates,
        ladders,
        jump_eigenvalues,
        theta,
        theta_k,
    }
}

fn theta_for(verdict: &Verdict, profile: &WaveProfile, nl: &Nonlinearity) -> Option<f64> {
    if !verdict.is_stable() {
        return None;
    }
    let mut candidates: Vec<f64> = Vec::new();
    match verdict {
        Verdict::Constant => candidates.push(-nl.g1(profile.endstates.0)),
        Verdict::RiemannShock => {
            candidates.push(-nl.g1(profile.endstates.0));
            candidates.push(-nl.g1(profile.endstates.1));
        }
        _ => {
            candidates.push(-nl.g1(profile.endstates.0));
            candidates.push(-nl.g1(profile.endstates.1));
            for (_, u_star) in profile.characteristic_points() {
                candidates.push(nl.g1(u_star));
            }
            for jump in &profile.discontinuities {
                candidates.push(-profile.jump_eigenvalue(nl, jump));
            }
        }
    }
    candidates
        .into_iter()
        .fold(None, |acc: Option<f64>, c| Some(acc.map_or(c, |a| a.min(c))))
}

fn theta_k_table(
    verdict: &Verdict,
    profile: &WaveProfile,
    nl: &Nonlinearity,
    depth: usize,
) -> Vec<f64> {
    // the derivative ladder rates are specific to continuous fronts
    if *verdict != Verdict::ContinuousFront {
        return Vec::new();
    }
    let (_, u_star) = profile.characteristic_points()[0];
    let g_star = nl.g1(u_star);
    let cap = (-nl.g1(profile.endstates.0)).min(-nl.g1(profile.endstates.1));
    (0..=depth)
        .map(|k| (k as f64 * g_star).min(cap))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;
    use waves_core::catalog;

    #[test]
    fn figure_front_report() {
        let nl = catalog::figure().unwrap();
        let wave = catalog::figure_front(&nl).unwrap();
        let report = spectral_report(&wave, &nl, 3);
        // ladder {0, -pi, -2pi, -3pi}
        assert_eq!(report.ladders.len(), 1);
        for (k, ev) in report.ladders[0].eigenvalues.iter().enumerate() {
            assert!((ev + k as f64 * PI).abs() < 1e-9, "k={k}: {ev}");
        }
        // endstate rates (-pi, -pi)
        assert!((report.endstate_rates.0 + PI).abs() < 1e-9);
        assert!((report.endstate_rates.1 + PI).abs() < 1e-9);
        // theta = pi
        assert!((report.theta.unwrap() - PI).abs() < 1e-9);
        // theta_k = min(k pi, pi)
        for (k, th) in report.theta_k.iter().enumerate() {
            let expect = (k as f64 * PI).min(PI);
            assert!((th - expect).abs() < 1e-9, "theta_{k} = {th}");
        }
        // theta == theta_1 whenever g'(u_star) >= min(-g'(u_pm))
        assert!((report.theta.unwrap() - report.theta_k[1]).abs() < 1e-12);
        // theta_k nondecreasing until saturation
        for w in report.theta_k.windows(2) {
            assert!(w[1] >= w[0] - 1e-12);
        }
    }

    #[test]
    fn riemann_between_equilibria_has_zero_jump_eigenvalue() {
        let nl = catalog::figure().unwrap();
        let wave = catalog::figure_riemann(&nl).unwrap();
        let report = spectral_report(&wave, &nl, 2);
        assert_eq!(report.jump_eigenvalues.len(), 1);
        assert!(report.jump_eigenvalues[0].1.abs() < 1e-12);
        assert!((report.theta.unwrap() - PI).abs() < 1e-9);
        assert!(report.theta_k.is_empty());
    }

    #[test]
    fn composite_theta_includes_jump_relaxation() {
        let nl = catalog::figure().unwrap();
        let wave = catalog::figure_double(&nl).unwrap();
        let report = spectral_report(&wave, &nl, 2);
        let theta = report.theta.unwrap();
        let jump_rate = -report.jump_eigenvalues[0].1;
        assert!(jump_rate > 0.0 && jump_rate < PI);
        assert!((theta - jump_rate).abs() < 1e-9, "theta {theta} vs {jump_rate}");
    }

    #[test]
    fn unstable_wave_has_no_theta() {
        let nl = catalog::figure().unwrap();
        let wave = catalog::figure_glued_pair(&nl, 0.5).unwrap();
        let report = spectral_report(&wave, &nl, 2);
        assert!(report.theta.is_none());
    }
}
