//! Non-degeneracy checks: sound characteristic values, strict entropy
//! inequalities at jumps, non-characteristic simple-zero endstates.

use serde::{Deserialize, Serialize};
use waves_core::{Nonlinearity, WaveProfile};

/// One measured condition with its margin.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CheckItem {
    pub name: String,
    /// positive = satisfied with this margin
    pub margin: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct NondegeneracyReport {
    pub checks: Vec<CheckItem>,
}

impl NondegeneracyReport {
    pub fn pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn violations(&self) -> Vec<&CheckItem> {
        self.checks.iter().filter(|c| !c.pass).collect()
    }
}

/// Measure every non-degeneracy condition of the wave: (i) `f'' != 0` and
/// `g' != 0` at each characteristic value, (ii) strict Lax and Oleinik at
/// each jump, (iii) `f'(u_inf) != sigma` and `g'(u_inf) != 0` at endstates.
pub fn check_nondegenerate(profile: &WaveProfile, nl: &Nonlinearity) -> NondegeneracyReport {
    let mut checks = Vec::new();
    let sigma = profile.sigma;

    for (x_star, u_star) in profile.characteristic_points() {
        let f2 = nl.f2(u_star).abs();
        checks.push(CheckItem {
            name: format!("|f''(u_star)| > 0 at x_star={x_star:.6}"),
            margin: f2,
            pass: f2 > 1e-12,
        });
        let g1 = nl.g1(u_star).abs();
        checks.push(CheckItem {
            name: format!("|g'(u_star)| > 0 at x_star={x_star:.6}"),
            margin: g1,
            pass: g1 > 1e-12,
        });
    }

    for jump in &profile.discontinuities {
        let (ml, mr) = profile.lax_margins(nl, jump);
        checks.push(CheckItem {
            name: format!("Lax left margin at d={:.6}", jump.position),
            margin: ml,
            pass: ml > 0.0,
        });
        checks.push(CheckItem {
            name: format!("Lax right margin at d={:.6}", jump.position),
            margin: mr,
            pass: mr > 0.0,
        });
        let (oleinik, _) = profile.oleinik_min_margin(nl, jump, 100);
        checks.push(CheckItem {
            name: format!("strict Oleinik at d={:.6}", jump.position),
            margin: oleinik,
            pass: oleinik > 0.0,
        });
    }

    for (side, u_inf) in [(-1i8, profile.endstates.0), (1i8, profile.endstates.1)] {
        let label = if side < 0 { "-inf" } else { "+inf" };
        let fm = (nl.f1(u_inf) - sigma).abs();
        checks.push(CheckItem {
            name: format!("|f'(u_{label}) - sigma| > 0"),
            margin: fm,
            pass: fm > nl.tau_char(),
        });
        let gm = nl.g1(u_inf).abs();
        checks.push(CheckItem {
            name: format!("|g'(u_{label})| > 0"),
            margin: gm,
            pass: gm > 1e-12,
        });
    }

    NondegeneracyReport { checks }
}
