//! Dirac-derivative eigenvectors of the adjoint operator at a
//! characteristic point.
//!
//! The combination `w = sum_j c_j delta^(j)_{x_star}` satisfies
//! `lambda w - a dx(w) - c w = 0` distributionally with
//! `lambda = -l g'(u_star)`; the coefficients solve a triangular system
//! whose entries are Taylor data of `a = f'(U)-sigma` and `c = g'(U)`.

use serde::{Deserialize, Serialize};
use waves_core::{Nonlinearity, WaveProfile};

use crate::error::Result;
use crate::taylor::{characteristic_expansion, CharacteristicExpansion};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DiracLadder {
    pub x_star: f64,
    pub u_star: f64,
    /// coefficients of delta^(j) for j = 0..=ell; the leading one is 1
    pub coefficients: Vec<f64>,
    pub eigenvalue: f64,
}

fn binom(n: usize, k: usize) -> f64 {
    let mut acc = 1.0;
    for j in 0..k {
        acc = acc * (n - j) as f64 / (j + 1) as f64;
    }
    acc
}

/// Off-diagonal entry multiplying `c_j` in the delta^(i) balance, `j > i`.
fn coupling(exp: &CharacteristicExpansion, i: usize, j: usize) -> f64 {
    let m_a = j + 1 - i;
    let m_c = j - i;
    let sign_a = if m_a % 2 == 0 { 1.0 } else { -1.0 };
    let sign_c = if m_c % 2 == 0 { 1.0 } else { -1.0 };
    -sign_a * binom(j + 1, m_a) * exp.a_derivs[m_a] - sign_c * binom(j, m_c) * exp.c_derivs[m_c]
}

/// Build the order-`ell` adjoint ladder at the `which`-th characteristic
/// point of the profile.
pub fn adjoint_ladder(
    profile: &WaveProfile,
    nl: &Nonlinearity,
    ell: usize,
    which: usize,
) -> Result<DiracLadder> {
    let exp = characteristic_expansion(nl, profile, which, ell + 1)?;
    let g1 = exp.c_derivs[0]; // g'(u_star) = c(x_star)
    let mut c = vec![0.0; ell + 1];
    c[ell] = 1.0;
    for i in (0..ell).rev() {
        let mut acc = 0.0;
        for j in (i + 1)..=ell {
            acc += coupling(&exp, i, j) * c[j];
        }
        // diagonal entry (i - ell) g'(u_star)
        c[i] = -acc / ((i as f64 - ell as f64) * g1);
    }
    Ok(DiracLadder {
        x_star: exp.x_star,
        u_star: exp.u_star,
        coefficients: c,
        eigenvalue: -(ell as f64) * g1,
    })
}

/// A polynomial test function with exact derivatives.
#[derive(Debug, Clone)]
pub struct TestPoly {
    /// coefficients in powers of (x - x_star)
    pub coeffs: Vec<f64>,
}

impl TestPoly {
    pub fn deriv_at_center(&self, order: usize) -> f64 {
        if order >= self.coeffs.len() {
            return 0.0;
        }
        let mut fact = 1.0;
        for j in 1..=order {
            fact *= j as f64;
        }
        self.coeffs[order] * fact
    }

    pub fn eval_shifted(&self, s: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * s + c)
    }

    /// `max_{m <= order} sup_{|s|<=1} |phi^(m)|`, the C^k norm on a unit
    /// neighborhood of the center.
    pub fn ck_norm(&self, order: usize) -> f64 {
        let mut worst = 0.0f64;
        let mut d = self.clone();
        for _ in 0..=order {
            for i in 0..=100 {
                let s = -1.0 + 2.0 * i as f64 / 100.0;
                worst = worst.max(d.eval_shifted(s).abs());
            }
            // differentiate
            let mut next = Vec::new();
            for (k, c) in d.coeffs.iter().enumerate().skip(1) {
                next.push(c * k as f64);
            }
            d = TestPoly { coeffs: next };
            if d.coeffs.is_empty() {
                break;
            }
        }
        worst.max(1e-300)
    }
}

/// Distributional residual pairing `<(lambda - L*) w, phi>` divided by the
/// C^(ell+1) norm of `phi`.
///
/// The pairing reduces to derivatives of `lambda phi + (a phi)' - c phi` at
/// the characteristic point, evaluated from the same Taylor data that built
/// the ladder.
pub fn ladder_residual(
    profile: &WaveProfile,
    nl: &Nonlinearity,
    ladder: &DiracLadder,
    phi: &TestPoly,
) -> Result<f64> {
    let ell = ladder.coefficients.len() - 1;
    let exp = characteristic_expansion(nl, profile, which_of(profile, ladder), ell + 1)?;
    let lambda = ladder.eigenvalue;
    // h = lambda phi + (a phi)' - c phi; need h^(j)(x_star) for j <= ell
    let h_deriv = |j: usize| -> f64 {
        let mut acc = lambda * phi.deriv_at_center(j);
        // (a phi)^(j+1) by Leibniz
        for m in 0..=(j + 1) {
            acc += binom(j + 1, m) * exp.a_derivs[m] * phi.deriv_at_center(j + 1 - m);
        }
        // -(c phi)^(j)
        for m in 0..=j {
            acc -= binom(j, m) * exp.c_derivs[m] * phi.deriv_at_center(j - m);
        }
        acc
    };
    let mut pairing = 0.0;
    for (j, cj) in ladder.coefficients.iter().enumerate() {
        let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
        pairing += cj * sign * h_deriv(j);
    }
    Ok(pairing.abs() / phi.ck_norm(ell + 1))
}

fn which_of(profile: &WaveProfile, ladder: &DiracLadder) -> usize {
    profile
        .characteristic_points()
        .iter()
        .position(|&(x, _)| (x - ladder.x_star).abs() < 1e-9)
        .unwrap_or(0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;
    use waves_core::catalog;

    #[test]
    fn order_zero_is_the_plain_dirac() {
        let nl = catalog::figure().unwrap();
        let wave = catalog::figure_front(&nl).unwrap();
        let ladder = adjoint_ladder(&wave, &nl, 0, 0).unwrap();
        assert_eq!(ladder.coefficients, vec![1.0]);
        assert_eq!(ladder.eigenvalue, 0.0);
        // residual vanishes on test polynomials
        let phi = TestPoly {
            coeffs: vec![0.3, -1.2, 0.5, 2.0],
        };
        let res = ladder_residual(&wave, &nl, &ladder, &phi).unwrap();
        assert!(res < 1e-12, "residual {res}");
    }

    #[test]
    fn eigenvalues_follow_the_ladder() {
        let nl = catalog::figure().unwrap();
        let wave = catalog::figure_front(&nl).unwrap();
        for ell in 0..=3 {
            let ladder = adjoint_ladder(&wave, &nl, ell, 0).unwrap();
            assert!(
                (ladder.eigenvalue + ell as f64 * PI).abs() < 1e-10,
                "ell={ell}: {}",
                ladder.eigenvalue
            );
            assert_eq!(ladder.coefficients.len(), ell + 1);
            assert_eq!(*ladder.coefficients.last().unwrap(), 1.0);
        }
    }

    #[test]
    fn residual_pairing_on_random_polynomials() {
        let nl = catalog::figure().unwrap();
        let wave = catalog::figure_front(&nl).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for ell in 1..=3 {
            let ladder = adjoint_ladder(&wave, &nl, ell, 0).unwrap();
            for _ in 0..20 {
                let deg = rng.gen_range(ell + 2..ell + 6);
                let coeffs: Vec<f64> = (0..=deg).map(|_| rng.gen_range(-2.0..2.0)).collect();
                let phi = TestPoly { coeffs };
                let res = ladder_residual(&wave, &nl, &ladder, &phi).unwrap();
                assert!(res <= 1e-8, "ell={ell}: residual {res}");
            }
        }
    }

    #[test]
    fn ladder_is_translation_equivariant() {
        let nl = catalog::figure().unwrap();
        let wave = catalog::figure_front(&nl).unwrap();
        let shifted = wave.translated(1.3);
        let a = adjoint_ladder(&wave, &nl, 2, 0).unwrap();
        let b = adjoint_ladder(&shifted, &nl, 2, 0).unwrap();
        assert!((b.x_star - (a.x_star + 1.3)).abs() < 1e-9);
        for (ca, cb) in a.coefficients.iter().zip(&b.coefficients) {
            assert!((ca - cb).abs() < 1e-10);
        }
    }

    #[test]
    fn breaking_fixture_has_positive_eigenvalues() {
        let nl = catalog::breaking().unwrap();
        let wave = catalog::breaking_front(&nl).unwrap();
        let ladder = adjoint_ladder(&wave, &nl, 1, 0).unwrap();
        // g'(u_star) = -pi: eigenvalue -1 * g' = +pi
        assert!((ladder.eigenvalue - PI).abs() < 1e-10);
    }
}
