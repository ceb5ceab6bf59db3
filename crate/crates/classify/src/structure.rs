//! Per-piece sign bookkeeping: characteristic-point parity, alternating
//! signs of g' along characteristic values and of f'(U)-sigma between them,
//! endstate sign relations.

use serde::{Deserialize, Serialize};
use waves_core::{Monotonicity, Nonlinearity, WaveProfile};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PieceStructure {
    pub piece_index: usize,
    pub constant: bool,
    pub unbounded_left: bool,
    pub unbounded_right: bool,
    pub characteristic_count: usize,
    /// sign of g' at each characteristic value, left to right
    pub g1_signs: Vec<i8>,
    /// sign of f'(U)-sigma on each subinterval between characteristic
    /// points (count + 1 entries for a non-constant piece)
    pub advection_signs: Vec<i8>,
    pub monotonicity: Monotonicity,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StructureReport {
    pub pieces: Vec<PieceStructure>,
    /// endstate sign relations: `f'(u_-inf)-sigma` has the sign of
    /// `g'(u_-inf)`, `f'(u_+inf)-sigma` the sign of `-g'(u_+inf)`.
    pub endstate_relation_left: bool,
    pub endstate_relation_right: bool,
    /// sign violations against the structural facts (non-empty marks a
    /// profile that cannot come from the builders)
    pub inconsistencies: Vec<String>,
}

impl StructureReport {
    pub fn consistent(&self) -> bool {
        self.inconsistencies.is_empty()
    }
}

fn signum8(v: f64) -> i8 {
    if v > 0.0 {
        1
    } else if v < 0.0 {
        -1
    } else {
        0
    }
}

/// Survey the sign structure of a non-degenerate wave.
pub fn structure_report(profile: &WaveProfile, nl: &Nonlinearity) -> StructureReport {
    let sigma = profile.sigma;
    let mut pieces = Vec::new();
    let mut inconsistencies = Vec::new();

    for (idx, piece) in profile.pieces.iter().enumerate() {
        let constant = piece.constant.is_some();
        let chars = &piece.characteristic_points;
        let g1_signs: Vec<i8> = chars.iter().map(|&(_, u)| signum8(nl.g1(u))).collect();

        // probe f'(U)-sigma between consecutive characteristic points
        let mut advection_signs = Vec::new();
        if !constant {
            let (w_lo, w_hi) = piece.dense.span();
            let mut bounds = vec![w_lo];
            bounds.extend(chars.iter().map(|c| c.0));
            bounds.push(w_hi);
            for w in bounds.windows(2) {
                let mid = 0.5 * (w[0] + w[1]);
                advection_signs.push(signum8(nl.f1(piece.value(mid)) - sigma));
            }
            // alternation of g' along characteristic values
            for pair in g1_signs.windows(2) {
                if pair[0] == pair[1] {
                    inconsistencies
                        .push(format!("g' signs do not alternate on piece {idx}: {g1_signs:?}"));
                    break;
                }
            }
            // alternation of f'(U)-sigma between characteristic points
            for pair in advection_signs.windows(2) {
                if pair[0] == pair[1] {
                    inconsistencies.push(format!(
                        "f'(U)-sigma signs do not alternate on piece {idx}: {advection_signs:?}"
                    ));
                    break;
                }
            }
            // bounded pieces pass through an odd number of characteristic
            // values, starting below the speed
            let bounded = piece.x_lo.is_finite() && piece.x_hi.is_finite();
            if bounded {
                if chars.len() % 2 == 0 {
                    inconsistencies.push(format!(
                        "bounded piece {idx} has an even characteristic count {}",
                        chars.len()
                    ));
                }
                if advection_signs.first() != Some(&-1) {
                    inconsistencies
                        .push(format!("bounded piece {idx} does not start below the speed"));
                }
            }
        } else {
            // constant pieces live at zeros of g on unbounded components
            if piece.x_lo.is_finite() && piece.x_hi.is_finite() {
                inconsistencies.push(format!("constant piece {idx} on a bounded component"));
            }
        }

        pieces.push(PieceStructure {
            piece_index: idx,
            constant,
            unbounded_left: piece.x_lo.is_infinite(),
            unbounded_right: piece.x_hi.is_infinite(),
            characteristic_count: chars.len(),
            g1_signs,
            advection_signs,
            monotonicity: piece.monotonicity,
        });
    }

    // endstate sign relations (only meaningful when the adjacent piece is
    // not constant)
    let left_piece = profile.pieces.first().unwrap();
    let right_piece = profile.pieces.last().unwrap();
    let endstate_relation_left = if left_piece.constant.is_some() {
        true
    } else {
        let s = signum8(nl.f1(profile.endstates.0) - sigma);
        s == signum8(nl.g1(profile.endstates.0))
    };
    let endstate_relation_right = if right_piece.constant.is_some() {
        true
    } else {
        let s = signum8(nl.f1(profile.endstates.1) - sigma);
        s == signum8(-nl.g1(profile.endstates.1))
    };
    if !endstate_relation_left {
        inconsistencies.push("endstate sign relation fails at -inf".into());
    }
    if !endstate_relation_right {
        inconsistencies.push("endstate sign relation fails at +inf".into());
    }

    StructureReport {
        pieces,
        endstate_relation_left,
        endstate_relation_right,
        inconsistencies,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use waves_core::catalog;

    #[test]
    fn figure_front_structure() {
        let nl = catalog::figure().unwrap();
        let wave = catalog::figure_front(&nl).unwrap();
        let report = structure_report(&wave, &nl);
        assert!(report.consistent(), "{:?}", report.inconsistencies);
        let piece = &report.pieces[0];
        assert_eq!(piece.characteristic_count, 1);
        assert_eq!(piece.g1_signs, vec![1]);
        // f'(U) negative left of the characteristic point, positive right
        assert_eq!(piece.advection_signs, vec![-1, 1]);
        // g' signs along u_-inf, u_star, u_+inf: (-, +, -)
        assert!(nl.g1(wave.endstates.0) < 0.0);
        assert!(nl.g1(wave.endstates.1) < 0.0);
    }

    #[test]
    fn riemann_structure() {
        let nl = catalog::figure().unwrap();
        let wave = catalog::figure_riemann(&nl).unwrap();
        let report = structure_report(&wave, &nl);
        assert!(report.consistent());
        assert!(report.pieces.iter().all(|p| p.constant));
        assert!(report
            .pieces
            .iter()
            .all(|p| p.unbounded_left || p.unbounded_right));
        assert_eq!(
            report.pieces.iter().map(|p| p.characteristic_count).sum::<usize>(),
            0
        );
    }

    #[test]
    fn double_composite_structure() {
        let nl = catalog::figure().unwrap();
        let wave = catalog::figure_double(&nl).unwrap();
        let report = structure_report(&wave, &nl);
        assert!(report.consistent(), "{:?}", report.inconsistencies);
        let interior = report.pieces.iter().find(|p| !p.constant).unwrap();
        assert_eq!(interior.characteristic_count, 1);
        assert_eq!(interior.advection_signs, vec![-1, 1]);
    }
}
