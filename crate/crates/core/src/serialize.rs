//! Versioned JSON serialization of wave profiles.
//!
//! Document shape:
//! `{version, sigma, discontinuities: [{d, u_left, u_right}],
//!   pieces: [{interval, breakpoints, coeffs, tail?, tail_left?, tail_right?, ...}]}`.
//! Unbounded interval ends serialize as null; a piece unbounded on exactly
//! one side carries its tail model under `tail`, a piece unbounded on both
//! sides under `tail_left`/`tail_right`.

use serde::{Deserialize, Serialize};

use crate::error::{CoreError, Result};
use crate::profile::{Jump, Monotonicity, PiecewisePoly, ProfilePiece, TailModel, WaveProfile};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Serialize, Deserialize)]
pub struct ProfileDocument {
    pub version: u32,
    pub sigma: f64,
    pub discontinuities: Vec<JumpDocument>,
    pub pieces: Vec<PieceDocument>,
    pub endstates: (f64, f64),
}

#[derive(Debug, Serialize, Deserialize)]
pub struct JumpDocument {
    pub d: f64,
    pub u_left: f64,
    pub u_right: f64,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct TailDocument {
    pub u_inf: f64,
    pub rate: f64,
    pub x_anchor: f64,
    pub u_anchor: f64,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct PieceDocument {
    /// [lo, hi], null marking an unbounded side.
    pub interval: (Option<f64>, Option<f64>),
    pub breakpoints: Vec<f64>,
    pub coeffs: Vec<[f64; 5]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub constant: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tail: Option<TailDocument>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tail_left: Option<TailDocument>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tail_right: Option<TailDocument>,
    pub characteristic_points: Vec<(f64, f64)>,
    pub monotonicity: Monotonicity,
    pub left_limit: f64,
    pub right_limit: f64,
}

fn tail_doc(t: &TailModel) -> TailDocument {
    TailDocument {
        u_inf: t.u_inf,
        rate: t.rate,
        x_anchor: t.x_anchor,
        u_anchor: t.u_anchor,
    }
}

fn tail_model(t: &TailDocument) -> TailModel {
    TailModel {
        u_inf: t.u_inf,
        rate: t.rate,
        x_anchor: t.x_anchor,
        u_anchor: t.u_anchor,
    }
}

pub fn to_document(wave: &WaveProfile) -> ProfileDocument {
    let pieces = wave
        .pieces
        .iter()
        .map(|p| {
            let lo = p.x_lo.is_finite().then_some(p.x_lo);
            let hi = p.x_hi.is_finite().then_some(p.x_hi);
            let (tail, tail_left, tail_right) = match (&p.tail_left, &p.tail_right) {
                (Some(l), Some(r)) => (None, Some(tail_doc(l)), Some(tail_doc(r))),
                (Some(l), None) => (Some(tail_doc(l)), None, None),
                (None, Some(r)) => (Some(tail_doc(r)), None, None),
                (None, None) => (None, None, None),
            };
            PieceDocument {
                interval: (lo, hi),
                breakpoints: p.dense.breakpoints.clone(),
                coeffs: p.dense.coeffs.clone(),
                constant: p.constant,
                tail,
                tail_left,
                tail_right,
                characteristic_points: p.characteristic_points.clone(),
                monotonicity: p.monotonicity,
                left_limit: p.left_limit,
                right_limit: p.right_limit,
            }
        })
        .collect();
    ProfileDocument {
        version: FORMAT_VERSION,
        sigma: wave.sigma,
        discontinuities: wave
            .discontinuities
            .iter()
            .map(|j| JumpDocument {
                d: j.position,
                u_left: j.u_left,
                u_right: j.u_right,
            })
            .collect(),
        pieces,
        endstates: wave.endstates,
    }
}

pub fn from_document(doc: &ProfileDocument) -> Result<WaveProfile> {
    if doc.version != FORMAT_VERSION {
        return Err(CoreError::InvalidSerialization(format!(
            "unsupported version {}",
            doc.version
        )));
    }
    let pieces = doc
        .pieces
        .iter()
        .map(|p| {
            let x_lo = p.interval.0.unwrap_or(f64::NEG_INFINITY);
            let x_hi = p.interval.1.unwrap_or(f64::INFINITY);
            let (tail_left, tail_right) = match (&p.tail, &p.tail_left, &p.tail_right) {
                (None, l, r) => (l.as_ref().map(tail_model), r.as_ref().map(tail_model)),
                (Some(t), None, None) => {
                    if x_lo.is_infinite() {
                        (Some(tail_model(t)), None)
                    } else {
                        (None, Some(tail_model(t)))
                    }
                }
                _ => {
                    return Err(CoreError::InvalidSerialization(
                        "both `tail` and sided tails present".into(),
                    ))
                }
            };
            if p.breakpoints.len() != p.coeffs.len() + 1 {
                return Err(CoreError::InvalidSerialization(
                    "breakpoints/coeffs length mismatch".into(),
                ));
            }
            Ok(ProfilePiece {
                x_lo,
                x_hi,
                constant: p.constant,
                dense: PiecewisePoly {
                    breakpoints: p.breakpoints.clone(),
                    coeffs: p.coeffs.clone(),
                },
                left_limit: p.left_limit,
                right_limit: p.right_limit,
                characteristic_points: p.characteristic_points.clone(),
                monotonicity: p.monotonicity,
                tail_left,
                tail_right,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(WaveProfile {
        sigma: doc.sigma,
        discontinuities: doc
            .discontinuities
            .iter()
            .map(|j| Jump {
                position: j.d,
                u_left: j.u_left,
                u_right: j.u_right,
            })
            .collect(),
        pieces,
        endstates: doc.endstates,
    })
}

pub fn to_json(wave: &WaveProfile) -> String {
    serde_json::to_string_pretty(&to_document(wave)).expect("profile serialization")
}

pub fn from_json(text: &str) -> Result<WaveProfile> {
    let doc: ProfileDocument = serde_json::from_str(text)
        .map_err(|e| CoreError::InvalidSerialization(e.to_string()))?;
    from_document(&doc)
}
