//! Assembly of admissible traveling waves: constants, Riemann shocks,
//! continuous fronts, composites with one or two jumps, glued front pairs,
//! and family members with prescribed characteristic-point positions.

use crate::error::{CoreError, Result};
use crate::nonlinearity::Nonlinearity;
use crate::num::roots;
use crate::profile::{Jump, Monotonicity, PiecewisePoly, ProfilePiece, WaveProfile};
use crate::profile_ode::{
    assemble_bidirectional_piece, assemble_single_branch_piece, integrate_profile, vector_field,
    IntegrationOptions, StopCondition,
};

/// Zero tolerance for "g vanishes" checks, relative to the source scale.
fn g_zero_tol(nl: &Nonlinearity) -> f64 {
    let mut scale = 0.0f64;
    let (lo, hi) = nl.domain();
    for i in 0..=400 {
        let u = lo + (hi - lo) * i as f64 / 400.0;
        scale = scale.max(nl.g(u).abs());
    }
    1e-9 * scale.max(1.0)
}

fn constant_piece(value: f64, x_lo: f64, x_hi: f64) -> ProfilePiece {
    ProfilePiece {
        x_lo,
        x_hi,
        constant: Some(value),
        dense: PiecewisePoly::constant(value, if x_lo.is_finite() { x_lo } else { x_hi.min(0.0) }),
        left_limit: value,
        right_limit: value,
        characteristic_points: Vec::new(),
        monotonicity: Monotonicity::Constant,
        tail_left: None,
        tail_right: None,
    }
}

/// A constant traveling wave `U = u` observed in a frame of speed `sigma`.
pub fn build_constant(nl: &Nonlinearity, u: f64, sigma: f64) -> Result<WaveProfile> {
    nl.check_domain(u)?;
    let mut violations = Vec::new();
    if nl.g(u).abs() > g_zero_tol(nl) {
        violations.push(format!("g({u}) != 0"));
    }
    if (nl.f1(u) - sigma).abs() <= nl.tau_char() {
        violations.push(format!("f'({u}) = sigma (characteristic constant)"));
    }
    if !violations.is_empty() {
        return Err(CoreError::AssumptionViolated(violations));
    }
    Ok(WaveProfile {
        sigma,
        discontinuities: Vec::new(),
        pieces: vec![constant_piece(u, f64::NEG_INFINITY, f64::INFINITY)],
        endstates: (u, u),
    })
}

/// Check the sign/zero conditions for a stable continuous front
/// (three consecutive zeros of g, the middle one amplifying).
fn front_condition_violations(
    nl: &Nonlinearity,
    u_minus: f64,
    u_star: f64,
    u_plus: f64,
) -> Vec<String> {
    let mut v = Vec::new();
    let tol = g_zero_tol(nl);
    if !(u_minus < u_star && u_star < u_plus) {
        v.push("anchors must satisfy u_- < u_* < u_+".into());
        return v;
    }
    for (name, u) in [("u_-", u_minus), ("u_*", u_star), ("u_+", u_plus)] {
        if nl.g(u).abs() > tol {
            v.push(format!("g({name}) != 0 (={:.3e})", nl.g(u)));
        }
    }
    if nl.g1(u_minus) >= 0.0 {
        v.push(format!("g'(u_-) < 0 fails (={:.3e})", nl.g1(u_minus)));
    }
    if nl.g1(u_star) <= 0.0 {
        v.push(format!("g'(u_*) > 0 fails (={:.3e})", nl.g1(u_star)));
    }
    if nl.g1(u_plus) >= 0.0 {
        v.push(format!("g'(u_+) < 0 fails (={:.3e})", nl.g1(u_plus)));
    }
    // no interior zero of g besides u_*
    for z in roots::scan_roots(|u| nl.g(u), u_minus + 1e-9, u_plus - 1e-9, 2000) {
        if (z - u_star).abs() > 1e-6 {
            v.push(format!("interior zero of g at u={z}"));
        }
    }
    let sigma = nl.f1(u_star);
    if nl.f2(u_star).abs() <= 1e-12 {
        v.push("f''(u_*) = 0".into());
    }
    // f' stays away from sigma off the characteristic value
    for i in 0..=1000 {
        let u = u_minus + (u_plus - u_minus) * i as f64 / 1000.0;
        if (u - u_star).abs() > 1e-6 && (nl.f1(u) - sigma).abs() <= nl.tau_char() {
            v.push(format!("f'(u) = f'(u_*) at u={u}"));
            break;
        }
    }
    v
}

/// Continuous front through `u_star` with speed `f'(u_star)`, checked
/// against the stable-front sign conditions.
pub fn build_front(
    nl: &Nonlinearity,
    u_minus: f64,
    u_star: f64,
    u_plus: f64,
) -> Result<WaveProfile> {
    let violations = front_condition_violations(nl, u_minus, u_star, u_plus);
    if !violations.is_empty() {
        return Err(CoreError::AssumptionViolated(violations));
    }
    build_front_raw(nl, u_star, &IntegrationOptions::default())
}

/// Integrate a monotone connection through the characteristic value
/// `u_star` without the stability sign checks. Used both by [`build_front`]
/// and to realize wave-breaking fixtures whose characteristic value damps.
pub fn build_front_raw(
    nl: &Nonlinearity,
    u_star: f64,
    opts: &IntegrationOptions,
) -> Result<WaveProfile> {
    let sigma = nl.f1(u_star);
    let left = integrate_profile(nl, sigma, u_star, 0.0, -1.0, opts)?;
    let right = integrate_profile(nl, sigma, u_star, 0.0, 1.0, opts)?;
    let piece = assemble_bidirectional_piece(nl, sigma, left, right);
    let endstates = (piece.left_limit, piece.right_limit);
    let wave = WaveProfile {
        sigma,
        discontinuities: Vec::new(),
        pieces: vec![piece],
        endstates,
    };
    Ok(wave)
}

/// Riemann shock between two damping equilibria; the Lax condition fixes
/// which value sits at which infinity.
pub fn build_riemann(nl: &Nonlinearity, u_minus: f64, u_plus: f64) -> Result<WaveProfile> {
    if u_minus == u_plus {
        return Err(CoreError::DegenerateJump(u_minus));
    }
    nl.check_domain(u_minus)?;
    nl.check_domain(u_plus)?;
    let tol = g_zero_tol(nl);
    let mut violations = Vec::new();
    for (name, u) in [("u_-", u_minus), ("u_+", u_plus)] {
        if nl.g(u).abs() > tol {
            violations.push(format!("g({name}) != 0"));
        }
        if nl.g1(u) >= 0.0 {
            violations.push(format!("g'({name}) < 0 fails (={:.3e})", nl.g1(u)));
        }
    }
    if !violations.is_empty() {
        return Err(CoreError::AssumptionViolated(violations));
    }
    let sigma = (nl.f(u_plus) - nl.f(u_minus)) / (u_plus - u_minus);
    // strict Lax labels the endstates
    let (u_left, u_right) = if nl.f1(u_minus) - sigma > 0.0 && sigma - nl.f1(u_plus) > 0.0 {
        (u_minus, u_plus)
    } else if nl.f1(u_plus) - sigma > 0.0 && sigma - nl.f1(u_minus) > 0.0 {
        (u_plus, u_minus)
    } else {
        return Err(CoreError::AssumptionViolated(vec![format!(
            "no strict Lax labeling: f'({u_minus})-sigma={:.3e}, f'({u_plus})-sigma={:.3e}",
            nl.f1(u_minus) - sigma,
            nl.f1(u_plus) - sigma
        )]));
    };
    let jump = Jump {
        position: 0.0,
        u_left,
        u_right,
    };
    let wave = WaveProfile {
        sigma,
        discontinuities: vec![jump],
        pieces: vec![
            constant_piece(u_left, f64::NEG_INFINITY, 0.0),
            constant_piece(u_right, 0.0, f64::INFINITY),
        ],
        endstates: (u_left, u_right),
    };
    let (margin, v) = wave.oleinik_min_margin(nl, &jump, 100);
    if margin <= 0.0 {
        return Err(CoreError::OleinikFailed { v, margin });
    }
    Ok(wave)
}

/// Which composite shape to assemble.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CompositeKind {
    /// Constant on the left, jump, then a smooth piece through `u_star`.
    SingleLeft,
    /// Smooth piece through `u_star`, jump, constant on the right.
    SingleRight,
    /// Constant, jump, smooth piece through `u_star`, jump, constant.
    Double,
}

/// Anchor values for a composite wave; the jump traces on the smooth side
/// are derived from flux matching.
#[derive(Debug, Clone, Copy)]
pub struct CompositeSpec {
    pub kind: CompositeKind,
    pub u_minus_inf: f64,
    pub u_star: f64,
    pub u_plus_inf: f64,
}

/// Solve `f(u) - f(u_const) = sigma (u - u_const)` for the smooth-side trace
/// bracketed between the characteristic value and the adjacent zero of g.
fn flux_matched_trace(
    nl: &Nonlinearity,
    sigma: f64,
    u_const: f64,
    u_star: f64,
    search_down: bool,
) -> Result<f64> {
    let rh = |u: f64| nl.f(u) - nl.f(u_const) - sigma * (u - u_const);
    let drh = |u: f64| nl.f1(u) - sigma;
    // adjacent non-characteristic zero of g bounds the smooth piece values
    let (lo, hi) = nl.domain();
    let eps = 1e-7 * nl.state_scale();
    let zs = roots::scan_roots(|u| nl.g(u), lo, hi, 4000);
    let bound = if search_down {
        zs.iter()
            .rev()
            .find(|&&z| z < u_star - eps && (nl.f1(z) - sigma).abs() > nl.tau_char())
            .copied()
            .unwrap_or(lo)
    } else {
        zs.iter()
            .find(|&&z| z > u_star + eps && (nl.f1(z) - sigma).abs() > nl.tau_char())
            .copied()
            .unwrap_or(hi)
    };
    let (a, b) = if search_down {
        (bound + eps, u_star - eps)
    } else {
        (u_star + eps, bound - eps)
    };
    roots::solve_bracketed(rh, drh, a, b, 3).ok_or(CoreError::RootNotBracketed {
        context: "flux-matched jump trace",
        lo: a,
        hi: b,
    })
}

/// Assemble a composite wave from anchor values.
pub fn build_composite(nl: &Nonlinearity, spec: &CompositeSpec) -> Result<WaveProfile> {
    let CompositeSpec {
        kind,
        u_minus_inf,
        u_star,
        u_plus_inf,
    } = *spec;
    nl.check_domain(u_star)?;
    nl.check_domain(u_minus_inf)?;
    nl.check_domain(u_plus_inf)?;
    let tol = g_zero_tol(nl);
    let sigma = nl.f1(u_star);
    let mut violations = Vec::new();
    for (name, u) in [
        ("u_-inf", u_minus_inf),
        ("u_*", u_star),
        ("u_+inf", u_plus_inf),
    ] {
        if nl.g(u).abs() > tol {
            violations.push(format!("g({name}) != 0"));
        }
    }
    if nl.g1(u_star) <= 0.0 {
        violations.push(format!("g'(u_*) > 0 fails (={:.3e})", nl.g1(u_star)));
    }
    if nl.g1(u_minus_inf) >= 0.0 {
        violations.push(format!("g'(u_-inf) < 0 fails (={:.3e})", nl.g1(u_minus_inf)));
    }
    if nl.g1(u_plus_inf) >= 0.0 {
        violations.push(format!("g'(u_+inf) < 0 fails (={:.3e})", nl.g1(u_plus_inf)));
    }
    if nl.f2(u_star).abs() <= 1e-12 {
        violations.push("f''(u_*) = 0".into());
    }
    if !violations.is_empty() {
        return Err(CoreError::AssumptionViolated(violations));
    }

    let opts = IntegrationOptions::default();
    // the interior piece's monotonicity decides on which side of u_star the
    // flux-matched traces live
    let increasing = vector_field(nl, sigma, u_star)? > 0.0;
    match kind {
        CompositeKind::SingleLeft => {
            let u_r = flux_matched_trace(nl, sigma, u_minus_inf, u_star, increasing)?;
            check_left_jump(nl, sigma, u_minus_inf, u_r)?;
            let left = integrate_profile(nl, sigma, u_star, 0.0, -1.0, &opts.with_stop(u_r))?;
            let d = left.x_end;
            let right = integrate_profile(nl, sigma, u_star, 0.0, 1.0, &opts)?;
            ensure_endstate(&right.stop, u_plus_inf)?;
            let interior = assemble_bidirectional_piece(nl, sigma, left, right);
            let wave = WaveProfile {
                sigma,
                discontinuities: vec![Jump {
                    position: d,
                    u_left: u_minus_inf,
                    u_right: u_r,
                }],
                pieces: vec![constant_piece(u_minus_inf, f64::NEG_INFINITY, d), interior],
                endstates: (u_minus_inf, u_plus_inf),
            };
            finish_composite(nl, wave)
        }
        CompositeKind::SingleRight => {
            let u_l = flux_matched_trace(nl, sigma, u_plus_inf, u_star, !increasing)?;
            check_right_jump(nl, sigma, u_l, u_plus_inf)?;
            let right = integrate_profile(nl, sigma, u_star, 0.0, 1.0, &opts.with_stop(u_l))?;
            let d = right.x_end;
            let left = integrate_profile(nl, sigma, u_star, 0.0, -1.0, &opts)?;
            ensure_endstate(&left.stop, u_minus_inf)?;
            let interior = assemble_bidirectional_piece(nl, sigma, left, right);
            let wave = WaveProfile {
                sigma,
                discontinuities: vec![Jump {
                    position: d,
                    u_left: u_l,
                    u_right: u_plus_inf,
                }],
                pieces: vec![interior, constant_piece(u_plus_inf, d, f64::INFINITY)],
                endstates: (u_minus_inf, u_plus_inf),
            };
            finish_composite(nl, wave)
        }
        CompositeKind::Double => {
            let u_r = flux_matched_trace(nl, sigma, u_minus_inf, u_star, increasing)?;
            check_left_jump(nl, sigma, u_minus_inf, u_r)?;
            let u_l = flux_matched_trace(nl, sigma, u_plus_inf, u_star, !increasing)?;
            check_right_jump(nl, sigma, u_l, u_plus_inf)?;
            let left = integrate_profile(nl, sigma, u_star, 0.0, -1.0, &opts.with_stop(u_r))?;
            let right = integrate_profile(nl, sigma, u_star, 0.0, 1.0, &opts.with_stop(u_l))?;
            let d_minus = left.x_end;
            let d_plus = right.x_end;
            let interior = assemble_bidirectional_piece(nl, sigma, left, right);
            let wave = WaveProfile {
                sigma,
                discontinuities: vec![
                    Jump {
                        position: d_minus,
                        u_left: u_minus_inf,
                        u_right: u_r,
                    },
                    Jump {
                        position: d_plus,
                        u_left: u_l,
                        u_right: u_plus_inf,
                    },
                ],
                pieces: vec![
                    constant_piece(u_minus_inf, f64::NEG_INFINITY, d_minus),
                    interior,
                    constant_piece(u_plus_inf, d_plus, f64::INFINITY),
                ],
                endstates: (u_minus_inf, u_plus_inf),
            };
            finish_composite(nl, wave)
        }
    }
}

fn ensure_endstate(stop: &StopCondition, expected: f64) -> Result<()> {
    match stop {
        StopCondition::Endstate { u_inf, .. } if (u_inf - expected).abs() < 1e-6 => Ok(()),
        other => Err(CoreError::AssumptionViolated(vec![format!(
            "smooth piece did not reach the prescribed endstate {expected}: {other:?}"
        )])),
    }
}

fn check_left_jump(nl: &Nonlinearity, sigma: f64, u_const: f64, u_r: f64) -> Result<()> {
    let mut v = Vec::new();
    if nl.g(u_r) / (u_r - u_const) >= 0.0 {
        v.push(format!(
            "g(u_r)/(u_r - u_-inf) < 0 fails (u_r={u_r}, ratio={:.3e})",
            nl.g(u_r) / (u_r - u_const)
        ));
    }
    if nl.f1(u_const) - sigma <= 0.0 {
        v.push(format!("Lax: f'(u_-inf) > sigma fails ({:.3e})", nl.f1(u_const) - sigma));
    }
    if nl.f1(u_r) - sigma >= 0.0 {
        v.push(format!("Lax: f'(u_r) < sigma fails ({:.3e})", nl.f1(u_r) - sigma));
    }
    if v.is_empty() {
        Ok(())
    } else {
        Err(CoreError::AssumptionViolated(v))
    }
}

fn check_right_jump(nl: &Nonlinearity, sigma: f64, u_l: f64, u_const: f64) -> Result<()> {
    let mut v = Vec::new();
    if -nl.g(u_l) / (u_const - u_l) >= 0.0 {
        v.push(format!(
            "-g(u_l)/(u_+inf - u_l) < 0 fails (u_l={u_l}, ratio={:.3e})",
            -nl.g(u_l) / (u_const - u_l)
        ));
    }
    if nl.f1(u_l) - sigma <= 0.0 {
        v.push(format!("Lax: f'(u_l) > sigma fails ({:.3e})", nl.f1(u_l) - sigma));
    }
    if nl.f1(u_const) - sigma >= 0.0 {
        v.push(format!("Lax: f'(u_+inf) < sigma fails ({:.3e})", nl.f1(u_const) - sigma));
    }
    if v.is_empty() {
        Ok(())
    } else {
        Err(CoreError::AssumptionViolated(v))
    }
}

fn finish_composite(nl: &Nonlinearity, wave: WaveProfile) -> Result<WaveProfile> {
    wave.require_admissible(nl)?;
    // every interior jump must damp
    for jump in &wave.discontinuities {
        let ratio = wave.jump_eigenvalue(nl, jump);
        if ratio >= 0.0 {
            return Err(CoreError::AssumptionViolated(vec![format!(
                "jump eigenvalue [g(U)]/[U] = {ratio:.3e} >= 0 at d={}",
                jump.position
            )]));
        }
    }
    Ok(wave)
}

/// Two translates of a continuous front glued by one Rankine-Hugoniot jump
/// crossing the characteristic value. The jump amplifies kicks
/// ([g(U)]_d/[U]_d > 0): this is the shock-instability fixture.
///
/// `level` is the left trace in (0, u_+); for the even figure flux the right
/// trace is `-level` and the jump sits at 0.
pub fn build_glued_front_pair(nl: &Nonlinearity, u_star: f64, level: f64) -> Result<WaveProfile> {
    let sigma = nl.f1(u_star);
    let opts = IntegrationOptions::default();
    // left piece: smooth through u_star, stopped where it reaches `level`
    let left_up = integrate_profile(nl, sigma, u_star, 0.0, 1.0, &opts.with_stop(level))?;
    let shift = -left_up.x_end; // move the stop to x = 0
    let left_tail = integrate_profile(nl, sigma, u_star, 0.0, -1.0, &opts)?;
    let mut left_piece = assemble_bidirectional_piece(nl, sigma, left_tail, left_up);
    left_piece = left_piece.translated(shift);

    // right trace by flux matching at sigma-frame level
    let rh = |u: f64| nl.f(u) - nl.f(level) - sigma * (u - level);
    let drh = |u: f64| nl.f1(u) - sigma;
    let u_right = roots::solve_bracketed(rh, drh, nl.domain().0.max(2.0 * u_star - level - 2.0), u_star - 1e-9, 3)
        .ok_or(CoreError::RootNotBracketed {
            context: "glued pair right trace",
            lo: 2.0 * u_star - level - 2.0,
            hi: u_star,
        })?;
    let right_down = integrate_profile(nl, sigma, u_star, 0.0, -1.0, &opts.with_stop(u_right))?;
    let shift_r = -right_down.x_end;
    let right_tail = integrate_profile(nl, sigma, u_star, 0.0, 1.0, &opts)?;
    let mut right_piece = assemble_bidirectional_piece(nl, sigma, right_down, right_tail);
    right_piece = right_piece.translated(shift_r);

    left_piece.x_hi = 0.0;
    right_piece.x_lo = 0.0;
    left_piece.right_limit = level;
    right_piece.left_limit = u_right;
    let endstates = (left_piece.left_limit, right_piece.right_limit);
    let wave = WaveProfile {
        sigma,
        discontinuities: vec![Jump {
            position: 0.0,
            u_left: level,
            u_right,
        }],
        pieces: vec![left_piece, right_piece],
        endstates,
    };
    wave.require_admissible(nl)?;
    Ok(wave)
}

/// A wave with two characteristic points separated by one damping jump
/// (the members of a genuine wave family). `level` is the left trace of the
/// jump, strictly between the first characteristic value and the next zero
/// of g above it.
pub fn build_two_char_wave(
    nl: &Nonlinearity,
    u_star_1: f64,
    u_star_2: f64,
    level: f64,
) -> Result<WaveProfile> {
    let sigma = nl.f1(u_star_1);
    if (nl.f1(u_star_2) - sigma).abs() > nl.tau_char() {
        return Err(CoreError::AssumptionViolated(vec![format!(
            "f'({u_star_2}) != f'({u_star_1}): the two characteristic values need equal speeds"
        )]));
    }
    let opts = IntegrationOptions::default();
    let piece1_up = integrate_profile(nl, sigma, u_star_1, 0.0, 1.0, &opts.with_stop(level))?;
    let d = piece1_up.x_end;
    let piece1_tail = integrate_profile(nl, sigma, u_star_1, 0.0, -1.0, &opts)?;
    let mut piece1 = assemble_bidirectional_piece(nl, sigma, piece1_tail, piece1_up);
    piece1.x_hi = d;
    piece1.right_limit = level;

    // flux-matched right trace on the far side of the flux cap between the
    // two characteristic values (the matching equation has a root on each
    // side of the cap; the jump lands past it)
    let rh = |u: f64| nl.f(u) - nl.f(level) - sigma * (u - level);
    let drh = |u: f64| nl.f1(u) - sigma;
    let eps = 1e-9 * nl.state_scale();
    let cap = roots::scan_roots(drh, level + eps, u_star_2 - eps, 2000)
        .first()
        .copied()
        .ok_or(CoreError::RootNotBracketed {
            context: "flux cap between characteristic values",
            lo: level,
            hi: u_star_2,
        })?;
    let u_right = roots::solve_bracketed(rh, drh, cap + eps, u_star_2 - eps, 3).ok_or(
        CoreError::RootNotBracketed {
            context: "two-characteristic-point jump trace",
            lo: cap,
            hi: u_star_2,
        },
    )?;
    let piece2_branch = integrate_profile(nl, sigma, u_right, d, 1.0, &opts)?;
    let mut piece2 = assemble_single_branch_piece(nl, sigma, piece2_branch);
    piece2.x_lo = d;
    piece2.left_limit = u_right;

    let endstates = (piece1.left_limit, piece2.right_limit);
    let wave = WaveProfile {
        sigma,
        discontinuities: vec![Jump {
            position: d,
            u_left: level,
            u_right,
        }],
        pieces: vec![piece1, piece2],
        endstates,
    };
    wave.require_admissible(nl)?;
    for jump in &wave.discontinuities {
        if wave.jump_eigenvalue(nl, jump) >= 0.0 {
            return Err(CoreError::AssumptionViolated(vec![
                "family fixture requires a damping jump".into(),
            ]));
        }
    }
    Ok(wave)
}

/// Prescribed characteristic-point positions for a family member.
#[derive(Debug, Clone, PartialEq)]
pub struct FamilyShift {
    pub psi_star: Vec<f64>,
}

impl FamilyShift {
    pub fn new(psi_star: Vec<f64>) -> Self {
        Self { psi_star }
    }
}

/// Move each characteristic point of a multi-characteristic-point wave to a
/// prescribed position; interior jumps are re-solved from the
/// Rankine-Hugoniot condition on the shifted smooth pieces.
pub fn construct_family_member(
    nl: &Nonlinearity,
    profile: &WaveProfile,
    shift: &FamilyShift,
) -> Result<WaveProfile> {
    let chars = profile.characteristic_points();
    let n = chars.len();
    if n < 2 {
        return Err(CoreError::AssumptionViolated(vec![
            "family construction needs at least two characteristic points".into(),
        ]));
    }
    if shift.psi_star.len() != n {
        return Err(CoreError::OutOfFamilyBall(format!(
            "expected {n} positions, got {}",
            shift.psi_star.len()
        )));
    }
    for w in shift.psi_star.windows(2) {
        if w[1] <= w[0] {
            return Err(CoreError::OutOfFamilyBall(
                "positions must be strictly increasing".into(),
            ));
        }
    }
    // amplifying signs are outside the family (Assumption of the family
    // proposition); every characteristic value must damp the shift
    for &(_, u_star) in &chars {
        if nl.g1(u_star) <= 0.0 {
            return Err(CoreError::AssumptionViolated(vec![format!(
                "g'(u_*) > 0 fails at characteristic value {u_star}"
            )]));
        }
    }
    for jump in &profile.discontinuities {
        let left_const = profile.pieces[profile.piece_index(jump.position - 1e-12)]
            .constant
            .is_some();
        let right_const = profile.pieces[profile.piece_index(jump.position + 1e-12)]
            .constant
            .is_some();
        if !(left_const && right_const) && profile.jump_eigenvalue(nl, jump) >= 0.0 {
            return Err(CoreError::AssumptionViolated(vec![format!(
                "jump at {} amplifies",
                jump.position
            )]));
        }
    }

    // deviation from the reference spacing must stay inside the family ball
    let mut max_dev = 0.0f64;
    for j in 1..n {
        let ref_gap = chars[j].0 - chars[0].0;
        let new_gap = shift.psi_star[j] - shift.psi_star[0];
        max_dev = max_dev.max((new_gap - ref_gap).abs());
    }
    let mut special = vec![];
    special.extend(chars.iter().map(|c| c.0));
    special.extend(profile.discontinuities.iter().map(|d| d.position));
    special.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let min_gap = special
        .windows(2)
        .map(|w| w[1] - w[0])
        .fold(f64::INFINITY, f64::min);
    let eps0 = 0.1 * min_gap;
    if max_dev > eps0 {
        return Err(CoreError::OutOfFamilyBall(format!(
            "spacing deviation {max_dev:.3e} exceeds eps0 = {eps0:.3e}"
        )));
    }

    let sigma = profile.sigma;
    let opts = IntegrationOptions::default();
    // one smooth piece per characteristic point (plus constant outer tails)
    let mut smooth_pieces: Vec<&ProfilePiece> = Vec::new();
    for piece in &profile.pieces {
        if piece.constant.is_none() {
            smooth_pieces.push(piece);
        }
    }
    if smooth_pieces.len() != n
        || smooth_pieces
            .iter()
            .any(|p| p.characteristic_points.len() != 1)
    {
        return Err(CoreError::AssumptionViolated(vec![
            "each smooth piece must carry exactly one characteristic point".into(),
        ]));
    }

    // per-piece translations delta_k = psi_k - x_k
    let deltas: Vec<f64> = (0..n).map(|k| shift.psi_star[k] - chars[k].0).collect();

    // re-solve each interior jump between smooth pieces k and k+1
    let mut new_jumps: Vec<Jump> = Vec::new();
    let mut new_pieces: Vec<ProfilePiece> = Vec::new();
    for (k, jump) in profile.discontinuities.iter().enumerate() {
        let left_idx = profile.piece_index(jump.position - 1e-12);
        let right_idx = profile.piece_index(jump.position + 1e-12);
        let left_const = profile.pieces[left_idx].constant;
        let right_const = profile.pieces[right_idx].constant;
        match (left_const, right_const) {
            (None, None) => {
                // locate the smooth pieces by index
                let kl = smooth_pieces
                    .iter()
                    .position(|p| std::ptr::eq(*p, &profile.pieces[left_idx]))
                    .unwrap();
                let kr = kl + 1;
                let (dl, dr) = (deltas[kl], deltas[kr]);
                // RH mismatch of the two shifted piece extensions at position d
                let ext_l = PieceExtender::new(nl, sigma, smooth_pieces[kl]);
                let ext_r = PieceExtender::new(nl, sigma, smooth_pieces[kr]);
                let rh = |d: f64| {
                    let ul = ext_l.eval(d - dl);
                    let ur = ext_r.eval(d - dr);
                    (nl.f(ur) - sigma * ur) - (nl.f(ul) - sigma * ul)
                };
                let guess = jump.position + 0.5 * (dl + dr);
                let half = (eps0 + max_dev + (dl - dr).abs()).max(1e-6) * 2.0;
                let root = roots::solve_bracketed(rh, |_| 0.0, guess - half, guess + half, 0)
                    .ok_or(CoreError::NewtonDiverged(k))?;
                // Newton polish on the RH mismatch; d/dd RH = [g(U)]_d
                let mut d_new = root;
                for _ in 0..3 {
                    let ul = ext_l.eval(d_new - dl);
                    let ur = ext_r.eval(d_new - dr);
                    let slope_d = nl.g(ur) - nl.g(ul);
                    if slope_d.abs() < 1e-14 {
                        break;
                    }
                    d_new -= rh(d_new) / slope_d;
                }
                new_jumps.push(Jump {
                    position: d_new,
                    u_left: ext_l.eval(d_new - dl),
                    u_right: ext_r.eval(d_new - dr),
                });
            }
            _ => {
                // jumps adjacent to constants translate rigidly with the
                // nearest characteristic point
                let delta = if left_const.is_some() && right_const.is_some() {
                    deltas[0]
                } else if left_const.is_some() {
                    let kr = smooth_pieces
                        .iter()
                        .position(|p| std::ptr::eq(*p, &profile.pieces[right_idx]))
                        .unwrap();
                    deltas[kr]
                } else {
                    let kl = smooth_pieces
                        .iter()
                        .position(|p| std::ptr::eq(*p, &profile.pieces[left_idx]))
                        .unwrap();
                    deltas[kl]
                };
                new_jumps.push(Jump {
                    position: jump.position + delta,
                    ..*jump
                });
            }
        }
    }

    // rebuild pieces: translate each smooth piece, then re-integrate its
    // boundary windows so the dense data reaches the new jumps
    let mut smooth_iter = 0usize;
    for piece in &profile.pieces {
        if let Some(v) = piece.constant {
            new_pieces.push(constant_piece(v, f64::NEG_INFINITY, f64::INFINITY));
            continue;
        }
        let k = smooth_iter;
        smooth_iter += 1;
        let mut p = piece.translated(deltas[k]);
        // extend the dense window if a new jump sits beyond it
        let ext = PieceExtender::new(nl, sigma, piece);
        let want_lo = neighbor_jump_below(&new_jumps, shift.psi_star[k]);
        let want_hi = neighbor_jump_above(&new_jumps, shift.psi_star[k]);
        if let Some(lo) = want_lo {
            p.x_lo = lo;
            p.left_limit = ext.eval(lo - deltas[k]);
        }
        if let Some(hi) = want_hi {
            p.x_hi = hi;
            p.right_limit = ext.eval(hi - deltas[k]);
        }
        new_pieces.push(p);
    }
    // fix constant piece bounds against the re-solved jumps
    let mut jump_iter = new_jumps.iter();
    let mut prev_bound = f64::NEG_INFINITY;
    for p in new_pieces.iter_mut() {
        let hi = jump_iter.next().map(|j| j.position).unwrap_or(f64::INFINITY);
        if p.constant.is_some() {
            p.x_lo = prev_bound;
            p.x_hi = hi;
        }
        prev_bound = hi;
    }

    let wave = WaveProfile {
        sigma,
        discontinuities: new_jumps,
        pieces: new_pieces,
        endstates: profile.endstates,
    };
    wave.require_admissible(nl)?;
    let _ = opts;
    Ok(wave)
}

fn neighbor_jump_below(jumps: &[Jump], x: f64) -> Option<f64> {
    jumps
        .iter()
        .map(|j| j.position)
        .filter(|&p| p < x)
        .fold(None, |acc: Option<f64>, p| Some(acc.map_or(p, |a| a.max(p))))
}

fn neighbor_jump_above(jumps: &[Jump], x: f64) -> Option<f64> {
    jumps
        .iter()
        .map(|j| j.position)
        .filter(|&p| p > x)
        .fold(None, |acc: Option<f64>, p| Some(acc.map_or(p, |a| a.min(p))))
}

/// Evaluate a smooth piece at points possibly beyond its integrated window
/// by continuing the profile ODE from the window edge.
pub struct PieceExtender<'a> {
    nl: &'a Nonlinearity,
    sigma: f64,
    piece: &'a ProfilePiece,
}

impl<'a> PieceExtender<'a> {
    pub fn new(nl: &'a Nonlinearity, sigma: f64, piece: &'a ProfilePiece) -> Self {
        Self { nl, sigma, piece }
    }

    pub fn eval(&self, x: f64) -> f64 {
        let (lo, hi) = self.piece.dense.span();
        if x >= lo && x <= hi {
            return self.piece.dense.eval(x);
        }
        if (x < lo && self.piece.tail_left.is_some()) || (x > hi && self.piece.tail_right.is_some())
        {
            return self.piece.value(x);
        }
        // short continuation of the ODE beyond the window
        let (x_from, u_from, dir) = if x < lo {
            (lo, self.piece.dense.eval(lo), -1.0)
        } else {
            (hi, self.piece.dense.eval(hi), 1.0)
        };
        let mut u = u_from;
        let steps = 64;
        let h = (x - x_from) / steps as f64;
        let _ = dir;
        for i in 0..steps {
            let xx = x_from + i as f64 * h;
            let _ = xx;
            let f = |_t: f64, y: &[f64; 1]| {
                [vector_field(self.nl, self.sigma, y[0]).unwrap_or(0.0)]
            };
            let y = crate::num::ode::rk4_step(&f, 0.0, &[u], h);
            u = y[0];
        }
        u
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use std::f64::consts::PI;

    #[test]
    fn figure_front_builds_and_is_admissible() {
        let nl = catalog::figure().unwrap();
        let wave = build_front(&nl, -1.0, 0.0, 1.0).unwrap();
        assert_eq!(wave.sigma, 0.0);
        assert_eq!(wave.discontinuities.len(), 0);
        assert_eq!(wave.endstates, (-1.0, 1.0));
        assert!((wave.value(0.0)).abs() < 1e-12);
        let chars = wave.characteristic_points();
        assert_eq!(chars.len(), 1);
        assert!(chars[0].0.abs() < 1e-9 && chars[0].1.abs() < 1e-9);
        // derivative at the characteristic point
        let du = wave.derivative(&nl, 0.0);
        assert!((du - 16.0 * PI / 49.0).abs() < 1e-12);
        assert!(wave.admissibility_violations(&nl).is_empty());
    }

    #[test]
    fn front_rejects_wrong_anchor() {
        let nl = catalog::figure().unwrap();
        let err = build_front(&nl, -1.0, 0.5, 1.0).unwrap_err();
        match err {
            CoreError::AssumptionViolated(v) => {
                assert!(v.iter().any(|s| s.contains("g(u_*)")), "{v:?}");
            }
            other => panic!("unexpected {other}"),
        }
    }

    #[test]
    fn front_rejects_damping_characteristic_value() {
        let nl = catalog::breaking().unwrap();
        let err = build_front(&nl, -1.0, 0.0, 1.0).unwrap_err();
        match err {
            CoreError::AssumptionViolated(v) => {
                assert!(v.iter().any(|s| s.contains("g'(u_*)")), "{v:?}");
            }
            other => panic!("unexpected {other}"),
        }
    }

    #[test]
    fn riemann_labels_by_lax() {
        let nl = catalog::figure().unwrap();
        let wave = build_riemann(&nl, -1.0, 1.0).unwrap();
        assert_eq!(wave.sigma, 0.0);
        // f'(1) > 0 > f'(-1): the left state is +1
        assert_eq!(wave.discontinuities[0].u_left, 1.0);
        assert_eq!(wave.discontinuities[0].u_right, -1.0);
        assert!(wave.admissibility_violations(&nl).is_empty());
    }

    #[test]
    fn riemann_rejects_zero_amplitude() {
        let nl = catalog::figure().unwrap();
        assert!(matches!(
            build_riemann(&nl, 1.0, 1.0).unwrap_err(),
            CoreError::DegenerateJump(_)
        ));
    }
}
