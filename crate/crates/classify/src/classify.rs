//! The classification decision: witnesses first, then shape matching.

use waves_core::{Nonlinearity, WaveProfile};

use crate::nondegenerate::check_nondegenerate;
use crate::structure::StructureReport;
use crate::witness::{Classification, InstabilityWitness, Verdict};
use crate::STRICTNESS_MARGIN;

/// Rate scale of the pair along the wave, for the strictness margin.
fn rate_scale(profile: &WaveProfile, nl: &Nonlinearity) -> f64 {
    let mut scale = 0.0f64;
    for piece in &profile.pieces {
        for sample in [piece.left_limit, piece.right_limit] {
            if nl.contains(sample) {
                scale = scale.max(nl.g1(sample).abs());
            }
        }
    }
    scale.max(1.0)
}

/// Is the jump flanked by constant pieces on both sides (a Riemann shock)?
fn both_sides_constant(profile: &WaveProfile, position: f64) -> bool {
    let li = profile.piece_index(position - 1e-12);
    let ri = profile.piece_index(position + 1e-12);
    profile.pieces[li].constant.is_some() && profile.pieces[ri].constant.is_some()
}

/// Collect instability witnesses; values inside the strictness margin are
/// reported as degeneracies instead of being decided.
fn collect_witnesses(
    profile: &WaveProfile,
    nl: &Nonlinearity,
) -> (Vec<InstabilityWitness>, Vec<String>) {
    let margin = STRICTNESS_MARGIN * rate_scale(profile, nl);
    let mut witnesses = Vec::new();
    let mut degeneracies = Vec::new();

    for (side, u_inf) in [(-1i8, profile.endstates.0), (1i8, profile.endstates.1)] {
        let rate = nl.g1(u_inf);
        if rate > margin {
            witnesses.push(InstabilityWitness::EndstateGrowth { u_inf, rate, side });
        } else if rate.abs() <= margin {
            degeneracies.push(format!(
                "g'(u_inf) = {rate:.3e} inside the strictness margin at side {side}"
            ));
        }
    }

    for jump in &profile.discontinuities {
        // Riemann-shock jumps connect two equilibria: the jump quotient is
        // identically zero and carries no instability information
        if both_sides_constant(profile, jump.position) {
            continue;
        }
        let rate = profile.jump_eigenvalue(nl, jump);
        if rate > margin {
            witnesses.push(InstabilityWitness::BadJump {
                d: jump.position,
                rate,
            });
        } else if rate.abs() <= margin {
            degeneracies.push(format!(
                "jump quotient {rate:.3e} inside the strictness margin at d={}",
                jump.position
            ));
        }
    }

    for (x_star, u_star) in profile.characteristic_points() {
        let g1 = nl.g1(u_star);
        if g1 < -margin {
            witnesses.push(InstabilityWitness::BadCharacteristic {
                x_star,
                u_star,
                rate: -g1,
            });
        } else if g1.abs() <= margin {
            degeneracies.push(format!(
                "g'(u_star) = {g1:.3e} inside the strictness margin at x_star={x_star}"
            ));
        }
    }

    (witnesses, degeneracies)
}

/// Match the shape of a witness-free wave against the stable classes.
fn match_shape(profile: &WaveProfile) -> Verdict {
    let n_jumps = profile.discontinuities.len();
    let n_constant = profile.pieces.iter().filter(|p| p.constant.is_some()).count();
    let n_pieces = profile.pieces.len();
    match n_jumps {
        0 => {
            if n_constant == n_pieces {
                Verdict::Constant
            } else {
                Verdict::ContinuousFront
            }
        }
        1 => {
            if n_constant == 2 {
                Verdict::RiemannShock
            } else {
                Verdict::SingleJumpComposite
            }
        }
        2 => {
            if n_constant == 2 && n_pieces == 3 {
                Verdict::DoubleJumpComposite
            } else {
                Verdict::Degenerate {
                    reasons: vec!["two jumps outside the constant-interior-constant shape".into()],
                }
            }
        }
        n => Verdict::Degenerate {
            reasons: vec![format!("{n} discontinuities exceed the classified shapes")],
        },
    }
}

/// Classify the wave: degenerate inputs yield `Degenerate`, any fired
/// criterion yields `Unstable` with all witnesses, otherwise the shape
/// class.
pub fn classify(profile: &WaveProfile, nl: &Nonlinearity) -> Classification {
    let nondeg = check_nondegenerate(profile, nl);
    if !nondeg.pass() {
        return Classification::new(Verdict::Degenerate {
            reasons: nondeg
                .violations()
                .iter()
                .map(|c| format!("{} (margin {:.3e})", c.name, c.margin))
                .collect(),
        });
    }
    let (witnesses, degeneracies) = collect_witnesses(profile, nl);
    if !degeneracies.is_empty() {
        return Classification::new(Verdict::Degenerate {
            reasons: degeneracies,
        });
    }
    if !witnesses.is_empty() {
        return Classification::new(Verdict::Unstable { witnesses });
    }
    Classification::new(match_shape(profile))
}

/// Independent re-derivation of the verdict from the structure report's
/// sign data (the brute-force oracle for classification equivalence).
pub fn verdict_from_structure(
    profile: &WaveProfile,
    nl: &Nonlinearity,
    report: &StructureReport,
) -> Verdict {
    let mut unstable = false;
    // endstates: growth when g' > 0
    for u_inf in [profile.endstates.0, profile.endstates.1] {
        if nl.g1(u_inf) > 0.0 {
            unstable = true;
        }
    }
    // characteristic values: damping when g' < 0
    for piece in &report.pieces {
        if piece.g1_signs.iter().any(|&s| s < 0) {
            unstable = true;
        }
    }
    // jumps between non-constant neighbors: re-sample traces
    for jump in &profile.discontinuities {
        if both_sides_constant(profile, jump.position) {
            continue;
        }
        let ul = profile.pieces[profile.piece_index(jump.position - 1e-12)]
            .value(jump.position - 1e-12);
        let ur = profile.pieces[profile.piece_index(jump.position + 1e-12)]
            .value(jump.position + 1e-12);
        if (nl.g(ur) - nl.g(ul)) / (ur - ul) > 0.0 {
            unstable = true;
        }
    }
    if unstable {
        return Verdict::Unstable { witnesses: vec![] };
    }
    let n_constant = report.pieces.iter().filter(|p| p.constant).count();
    match profile.discontinuities.len() {
        0 if n_constant == report.pieces.len() => Verdict::Constant,
        0 => Verdict::ContinuousFront,
        1 if n_constant == 2 => Verdict::RiemannShock,
        1 => Verdict::SingleJumpComposite,
        2 if n_constant == 2 => Verdict::DoubleJumpComposite,
        _ => Verdict::Degenerate { reasons: vec![] },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;
    use waves_core::catalog;

    #[test]
    fn figure_waves_classify_into_their_classes() {
        let nl = catalog::figure().unwrap();
        assert_eq!(
            classify(&catalog::figure_front(&nl).unwrap(), &nl).verdict,
            Verdict::ContinuousFront
        );
        assert_eq!(
            classify(&catalog::figure_riemann(&nl).unwrap(), &nl).verdict,
            Verdict::RiemannShock
        );
        assert_eq!(
            classify(&catalog::figure_constant(&nl).unwrap(), &nl).verdict,
            Verdict::Constant
        );
        assert_eq!(
            classify(&catalog::figure_single_left(&nl).unwrap(), &nl).verdict,
            Verdict::SingleJumpComposite
        );
        assert_eq!(
            classify(&catalog::figure_single_right(&nl).unwrap(), &nl).verdict,
            Verdict::SingleJumpComposite
        );
        assert_eq!(
            classify(&catalog::figure_double(&nl).unwrap(), &nl).verdict,
            Verdict::DoubleJumpComposite
        );
    }

    #[test]
    fn breaking_front_carries_characteristic_witness() {
        let nl = catalog::breaking().unwrap();
        let wave = catalog::breaking_front(&nl).unwrap();
        let c = classify(&wave, &nl);
        let found = c.witnesses().iter().any(|w| match w {
            InstabilityWitness::BadCharacteristic { x_star, u_star, rate } => {
                x_star.abs() < 1e-9 && u_star.abs() < 1e-9 && (rate - PI).abs() < 1e-9
            }
            _ => false,
        });
        assert!(found, "witnesses: {:?}", c.witnesses());
    }

    #[test]
    fn glued_pair_carries_jump_witness_only() {
        let nl = catalog::figure().unwrap();
        let wave = catalog::figure_glued_pair(&nl, 0.5).unwrap();
        let c = classify(&wave, &nl);
        assert_eq!(c.witnesses().len(), 1);
        match &c.witnesses()[0] {
            InstabilityWitness::BadJump { d, rate } => {
                assert!(d.abs() < 1e-9);
                assert!((rate - 2.0).abs() < 1e-8);
            }
            other => panic!("unexpected witness {other:?}"),
        }
    }

    #[test]
    fn unstable_constant_carries_endstate_witnesses() {
        let nl = catalog::figure().unwrap();
        let wave = catalog::unstable_constant(&nl).unwrap();
        let c = classify(&wave, &nl);
        assert_eq!(c.witnesses().len(), 2);
        for w in c.witnesses() {
            match w {
                InstabilityWitness::EndstateGrowth { rate, .. } => {
                    assert!((rate - PI).abs() < 1e-12)
                }
                other => panic!("unexpected {other:?}"),
            }
        }
    }

    #[test]
    fn translation_invariance_of_verdict() {
        let nl = catalog::figure().unwrap();
        let wave = catalog::figure_double(&nl).unwrap();
        let shifted = wave.translated(3.7);
        assert_eq!(classify(&wave, &nl).verdict, classify(&shifted, &nl).verdict);
    }

    #[test]
    fn mirror_symmetry_maps_single_left_to_single_right() {
        let nl = catalog::figure().unwrap();
        let left = catalog::figure_single_left(&nl).unwrap();
        // under (x, f) -> (-x, -f) the mirrored pair admits the mirrored
        // composite with swapped endstate anchors
        let nl_m = nl.mirrored();
        let right = waves_core::build_composite(
            &nl_m,
            &waves_core::CompositeSpec {
                kind: waves_core::CompositeKind::SingleRight,
                u_minus_inf: 1.0,
                u_star: 0.0,
                u_plus_inf: -3.0,
            },
        )
        .unwrap();
        let vl = classify(&left, &nl).verdict;
        let vr = classify(&right, &nl_m).verdict;
        assert_eq!(vl, Verdict::SingleJumpComposite);
        assert_eq!(vl, vr);
    }

    #[test]
    fn family_wave_is_stable_single_jump_shape() {
        let nl = catalog::quartic_pair().unwrap();
        let wave = catalog::quartic_family_wave(&nl, 0.5).unwrap();
        let c = classify(&wave, &nl);
        assert_eq!(c.verdict, Verdict::SingleJumpComposite);
        assert!(c.is_stable());
    }
}
