//! The characteristic field: seeded characteristics with sensitivities,
//! region bookkeeping between tracked shocks, initialization from a wave
//! profile plus perturbation, and reconstruction of snapshots.

use waves_core::num::{bump, roots};
use waves_core::{Nonlinearity, WaveProfile};

use crate::error::{Result, SimError};
use crate::interp::hermite;
use crate::shock::TrackedShock;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CharStatus {
    Active,
    Absorbed,
    Broken,
}

/// One characteristic curve: seed, current position/value, and the spatial
/// sensitivities `dX = dX/dx0`-type derivatives carried by the variational
/// equations.
#[derive(Debug, Clone, Copy)]
pub struct Characteristic {
    /// seed position (NaN for reseeded characteristics)
    pub x0: f64,
    pub pos: f64,
    pub val: f64,
    pub d_pos: f64,
    pub d_val: f64,
    pub status: CharStatus,
}

impl Characteristic {
    /// The spatial derivative `du/dx` carried by this characteristic.
    pub fn slope(&self) -> f64 {
        self.d_val / self.d_pos
    }
}

/// Characteristics of one smooth region, ordered by position.
#[derive(Debug, Clone)]
pub struct Region {
    pub chars: Vec<Characteristic>,
}

impl Region {
    pub fn active(&self) -> impl Iterator<Item = &Characteristic> {
        self.chars.iter().filter(|c| c.status == CharStatus::Active)
    }

    pub fn active_count(&self) -> usize {
        self.active().count()
    }
}

/// Initial perturbation of the wave, evaluated per region side.
#[derive(Debug, Clone)]
pub enum Perturbation {
    None,
    /// `amplitude * bump((x - center)/width)`
    Bump {
        amplitude: f64,
        center: f64,
        width: f64,
    },
    /// `eps^2 chi(eps x - 1/eps)` with chi the standard bump on (0,1):
    /// the instability-at-infinity seed
    TailSeed { eps: f64 },
    /// `eps U'(x_star) chi((x-x_star)/eta)` with `chi(s)= e s exp(-1/(1-s^2))`:
    /// the wave-breaking seed (chi(0)=0, chi'(0)=1)
    CharSeed { eps: f64, eta: f64, x_star: f64 },
    /// `-delta U'(x) bump((x-center)/width)`: shifts the characteristic
    /// point near `center` by about `delta`
    ProfileShift {
        delta: f64,
        center: f64,
        width: f64,
    },
    /// one-sided: `None` left of `position`, inner perturbation on the right
    RightOf {
        position: f64,
        inner: Box<Perturbation>,
    },
    Sum(Vec<Perturbation>),
}

impl Perturbation {
    /// `(value, derivative)` at `x`; `profile` supplies `U'` where needed.
    pub fn eval(&self, nl: &Nonlinearity, profile: &WaveProfile, x: f64) -> (f64, f64) {
        match self {
            Perturbation::None => (0.0, 0.0),
            Perturbation::Bump {
                amplitude,
                center,
                width,
            } => {
                let s = (x - center) / width;
                (
                    amplitude * bump::bump(s),
                    amplitude * bump::bump_deriv(1, s) / width,
                )
            }
            Perturbation::TailSeed { eps } => {
                let t = eps * x - 1.0 / eps;
                let s = 2.0 * t - 1.0;
                (
                    eps * eps * bump::bump(s),
                    2.0 * eps.powi(3) * bump::bump_deriv(1, s),
                )
            }
            Perturbation::CharSeed { eps, eta, x_star } => {
                let s = (x - x_star) / eta;
                let du = profile.derivative(nl, *x_star);
                let e = std::f64::consts::E;
                let chi = e * s * bump::bump(s);
                let dchi = e * (bump::bump(s) + s * bump::bump_deriv(1, s)) / eta;
                (eps * du * chi, eps * du * dchi)
            }
            Perturbation::ProfileShift {
                delta,
                center,
                width,
            } => {
                let s = (x - center) / width;
                let du = profile.derivative(nl, x);
                // derivative of U' along x via the profile ODE
                let ddu = waves_core::profile_ode::vector_field_derivative(
                    nl,
                    profile.sigma,
                    profile.value(x),
                )
                .unwrap_or(0.0)
                    * du;
                (
                    -delta * du * bump::bump(s),
                    -delta * (ddu * bump::bump(s) + du * bump::bump_deriv(1, s) / width),
                )
            }
            Perturbation::RightOf { position, inner } => {
                if x >= *position {
                    inner.eval(nl, profile, x)
                } else {
                    (0.0, 0.0)
                }
            }
            Perturbation::Sum(list) => list.iter().fold((0.0, 0.0), |acc, p| {
                let (v, d) = p.eval(nl, profile, x);
                (acc.0 + v, acc.1 + d)
            }),
        }
    }
}

/// Seeding density specification: base spacing away from special points,
/// proportional grading `kappa |x - special|` toward them, floored at
/// `h_min`. Proportional grading keeps the characteristic fan at a sonic
/// point sampled at constant relative density while it stretches.
#[derive(Debug, Clone, Copy)]
pub struct SamplingSpec {
    pub window: (f64, f64),
    pub h_base: f64,
    pub h_min: f64,
    pub kappa: f64,
}

impl SamplingSpec {
    pub fn new(window: (f64, f64), h_base: f64) -> Self {
        Self {
            window,
            h_base,
            h_min: h_base * 5e-2,
            kappa: 0.02,
        }
    }

    pub fn target_gap(&self, dist_to_special: f64) -> f64 {
        (self.kappa * dist_to_special).clamp(self.h_min, self.h_base)
    }
}

/// The full simulator state.
pub struct CharacteristicField {
    pub t: f64,
    pub regions: Vec<Region>,
    pub shocks: Vec<TrackedShock>,
    pub nl: Nonlinearity,
    pub sigma: f64,
    pub spec: SamplingSpec,
    /// pinned characteristic-point positions at t = 0 (they travel with
    /// speed sigma)
    pub pinned: Vec<f64>,
    /// (t, x) records of wave-breaking events
    pub breaking_events: Vec<(f64, f64)>,
    /// frozen `(value, d/dx)` fed in at a window edge whose characteristics
    /// flow inward (regions draining into a shock refill from here)
    pub inflow_left: Option<(f64, f64)>,
    pub inflow_right: Option<(f64, f64)>,
}

/// Current positions of the special points the seeding density tracks.
impl CharacteristicField {
    pub fn special_points(&self) -> Vec<f64> {
        let mut pts: Vec<f64> = self
            .pinned
            .iter()
            .map(|&x| x + self.sigma * self.t)
            .collect();
        pts.extend(self.shocks.iter().filter(|s| s.alive).map(|s| s.pos));
        pts
    }

    pub fn active_char_count(&self) -> usize {
        self.regions.iter().map(|r| r.active_count()).sum()
    }

    /// Reconstruct `u` on a grid. Every sample must land in a region whose
    /// cover is intact; the snapshot flags stretches where the grid is much
    /// finer than the characteristic cover.
    pub fn reconstruct(&self, grid: &[f64]) -> Result<Snapshot> {
        let shocks: Vec<f64> = self
            .shocks
            .iter()
            .filter(|s| s.alive)
            .map(|s| s.pos)
            .collect();
        let mut values = Vec::with_capacity(grid.len());
        let mut labels = Vec::with_capacity(grid.len());
        let mut coarse = false;
        let grid_step = if grid.len() > 1 {
            (grid[grid.len() - 1] - grid[0]) / (grid.len() - 1) as f64
        } else {
            f64::INFINITY
        };
        for &x in grid {
            let region_idx = shocks.partition_point(|&s| s < x);
            let region = &self.regions[region_idx];
            let (v, gap, broken) = interp_region(region, x)?;
            if broken {
                return Err(SimError::BrokenRegion(region_idx));
            }
            if gap > 10.0 * grid_step {
                coarse = true;
            }
            values.push(v);
            labels.push(region_idx);
        }
        Ok(Snapshot {
            t: self.t,
            grid: grid.to_vec(),
            values,
            region_labels: labels,
            shock_positions: shocks,
            shock_traces: self
                .shocks
                .iter()
                .filter(|s| s.alive)
                .map(|s| (s.u_left, s.u_right))
                .collect(),
            grid_too_coarse: coarse,
        })
    }

    /// Interpolated solution value at one point.
    pub fn value_at(&self, x: f64) -> Result<f64> {
        let shocks: Vec<f64> = self
            .shocks
            .iter()
            .filter(|s| s.alive)
            .map(|s| s.pos)
            .collect();
        let region_idx = shocks.partition_point(|&s| s < x);
        let (v, _, broken) = interp_region(&self.regions[region_idx], x)?;
        if broken {
            return Err(SimError::BrokenRegion(region_idx));
        }
        Ok(v)
    }
}

fn interp_region(region: &Region, x: f64) -> Result<(f64, f64, bool)> {
    // bracketing active characteristics
    let chars = &region.chars;
    let mut left: Option<&Characteristic> = None;
    let mut right: Option<&Characteristic> = None;
    for c in chars {
        if c.status != CharStatus::Active {
            if c.status == CharStatus::Broken && (c.pos - x).abs() < 0.5 {
                return Ok((f64::NAN, 0.0, true));
            }
            continue;
        }
        if c.pos <= x {
            left = Some(c);
        }
        if c.pos >= x {
            right = Some(c);
            break;
        }
    }
    match (left, right) {
        (Some(l), Some(r)) => {
            if std::ptr::eq(l, r) {
                return Ok((l.val, 0.0, false));
            }
            let gap = r.pos - l.pos;
            let v = hermite(l.pos, l.val, l.slope(), r.pos, r.val, r.slope(), x);
            Ok((v, gap, false))
        }
        (Some(l), None) => Ok((l.val, f64::INFINITY, false)),
        (None, Some(r)) => Ok((r.val, f64::INFINITY, false)),
        (None, None) => Err(SimError::TraceStencil {
            side: "both",
            pos: x,
        }),
    }
}

/// A reconstructed solution sample.
#[derive(Debug, Clone)]
pub struct Snapshot {
    pub t: f64,
    pub grid: Vec<f64>,
    pub values: Vec<f64>,
    pub region_labels: Vec<usize>,
    pub shock_positions: Vec<f64>,
    /// both traces per live shock
    pub shock_traces: Vec<(f64, f64)>,
    pub grid_too_coarse: bool,
}

/// Seed a field from the wave plus perturbation.
///
/// Characteristics are seeded at graded density (denser near jumps,
/// characteristic points, and the perturbation support is covered by the
/// base density), one characteristic exactly on each characteristic point;
/// shocks start on the profile's discontinuities with perturbed traces.
pub fn init_field(
    profile: &WaveProfile,
    nl: &Nonlinearity,
    perturbation: &Perturbation,
    spec: &SamplingSpec,
) -> Result<CharacteristicField> {
    let (x_lo, x_hi) = spec.window;
    let mut cut_positions: Vec<f64> = profile
        .discontinuities
        .iter()
        .map(|d| d.position)
        .collect();
    // a one-sided perturbation introduces a new tracked shock at its seam
    let mut extra_shock: Option<f64> = None;
    if let Perturbation::RightOf { position, .. } = perturbation {
        if !cut_positions.iter().any(|d| (d - position).abs() < 1e-12) {
            cut_positions.push(*position);
            extra_shock = Some(*position);
        }
    }
    cut_positions.sort_by(|a, b| a.partial_cmp(b).unwrap());

    let pinned: Vec<f64> = profile.characteristic_points().iter().map(|c| c.0).collect();
    let mut specials = pinned.clone();
    specials.extend(cut_positions.iter().copied());

    // region boundaries
    let mut bounds = vec![x_lo];
    bounds.extend(cut_positions.iter().copied().filter(|&d| d > x_lo && d < x_hi));
    bounds.push(x_hi);

    let eval_initial = |x: f64| -> Result<(f64, f64)> {
        let u = profile.value(x);
        let du = profile.derivative(nl, x);
        let (p, dp) = perturbation.eval(nl, profile, x);
        let v = u + p;
        if !nl.contains(v) {
            return Err(SimError::DomainExit { x, u: v });
        }
        Ok((v, du + dp))
    };

    let mut regions = Vec::new();
    for w in bounds.windows(2) {
        let (a, b) = (w[0], w[1]);
        let mut chars = Vec::new();
        let clearance = spec.h_min;
        let mut x = a + if a == x_lo { 0.0 } else { clearance };
        while x < b - clearance * 0.5 {
            let dist = specials
                .iter()
                .map(|s| (x - s).abs())
                .fold(f64::INFINITY, f64::min);
            let (v, dv) = eval_initial(x)?;
            chars.push(Characteristic {
                x0: x,
                pos: x,
                val: v,
                d_pos: 1.0,
                d_val: dv,
                status: CharStatus::Active,
            });
            x += spec.target_gap(dist);
        }
        // pin characteristics exactly on interior characteristic points
        for &p in &pinned {
            if p > a && p < b {
                let (v, dv) = eval_initial(p)?;
                chars.push(Characteristic {
                    x0: p,
                    pos: p,
                    val: v,
                    d_pos: 1.0,
                    d_val: dv,
                    status: CharStatus::Active,
                });
            }
        }
        chars.sort_by(|p, q| p.pos.partial_cmp(&q.pos).unwrap());
        chars.dedup_by(|p, q| (p.pos - q.pos).abs() < 1e-13);
        regions.push(Region { chars });
    }

    // tracked shocks with perturbed traces
    let mut shocks = Vec::new();
    for d in &profile.discontinuities {
        if d.position <= x_lo || d.position >= x_hi {
            continue;
        }
        let (pl, _) = perturbation.eval(nl, profile, d.position - 1e-12);
        let (pr, _) = perturbation.eval(nl, profile, d.position + 1e-12);
        shocks.push(TrackedShock::new(
            d.position,
            d.u_left + pl,
            d.u_right + pr,
        ));
    }
    if let Some(pos) = extra_shock {
        let u = profile.value(pos);
        let (pl, _) = perturbation.eval(nl, profile, pos - 1e-12);
        let (pr, _) = perturbation.eval(nl, profile, pos + 1e-12);
        shocks.push(TrackedShock::new(pos, u + pl, u + pr));
    }
    shocks.sort_by(|a, b| a.pos.partial_cmp(&b.pos).unwrap());

    // characteristics entering through a window edge carry the frozen
    // background state (the perturbation is compactly supported inside)
    let edge_state = |x: f64| -> (f64, f64) { (profile.value(x), profile.derivative(nl, x)) };
    let inflow_left = (nl.f1(profile.value(x_lo)) > 0.0).then(|| edge_state(x_lo));
    let inflow_right = (nl.f1(profile.value(x_hi)) < 0.0).then(|| edge_state(x_hi));

    Ok(CharacteristicField {
        t: 0.0,
        regions,
        shocks,
        nl: nl.clone(),
        sigma: profile.sigma,
        spec: *spec,
        pinned,
        breaking_events: Vec::new(),
        inflow_left,
        inflow_right,
    })
}

/// Locate the root of `U + v0 = u_star` near the `which`-th characteristic
/// point (the asymptotic phase pin). Errors when the sampling detects more
/// than one sign change (perturbation outside the lemma's ball).
pub fn locate_characteristic_point(
    profile: &WaveProfile,
    nl: &Nonlinearity,
    perturbation: &Perturbation,
    which: usize,
) -> Result<f64> {
    let (x_star, u_star) = profile.characteristic_points()[which];
    let h = |x: f64| {
        profile.value(x) + perturbation.eval(nl, profile, x).0 - u_star
    };
    // neighboring special points bound the search
    let mut lo = x_star - 3.0;
    let mut hi = x_star + 3.0;
    for d in &profile.discontinuities {
        if d.position < x_star {
            lo = lo.max(d.position + 1e-6);
        } else {
            hi = hi.min(d.position - 1e-6);
        }
    }
    let mut sign_changes = 0usize;
    let n = 2000;
    let mut prev_sign = h(lo).signum();
    for i in 1..=n {
        let x = lo + (hi - lo) * i as f64 / n as f64;
        let cur = h(x);
        if cur == 0.0 {
            // root exactly on the grid
            sign_changes += 1;
            prev_sign = 0.0;
            continue;
        }
        if prev_sign != 0.0 && cur.signum() != prev_sign {
            sign_changes += 1;
        }
        prev_sign = cur.signum();
    }
    if sign_changes != 1 {
        return Err(SimError::MultipleRoots {
            count: sign_changes,
        });
    }
    let root = roots::solve_bracketed(
        h,
        |x| {
            profile.derivative(nl, x) + {
                let hh = 1e-7;
                (perturbation.eval(nl, profile, x + hh).0
                    - perturbation.eval(nl, profile, x - hh).0)
                    / (2.0 * hh)
            }
        },
        lo,
        hi,
        3,
    )
    .ok_or(SimError::MultipleRoots { count: 0 })?;
    Ok(root)
}

#[cfg(test)]
mod tests {
    use super::*;
    use waves_core::catalog;

    #[test]
    fn zero_perturbation_reproduces_the_wave() {
        let nl = catalog::figure().unwrap();
        let wave = catalog::figure_front(&nl).unwrap();
        let spec = SamplingSpec::new((-8.0, 8.0), 0.02);
        let field = init_field(&wave, &nl, &Perturbation::None, &spec).unwrap();
        for region in &field.regions {
            for c in region.active() {
                assert!((c.val - wave.value(c.pos)).abs() < 1e-12);
                assert_eq!(c.d_pos, 1.0);
            }
        }
        // one characteristic sits exactly on the characteristic point
        assert!(field
            .regions
            .iter()
            .flat_map(|r| r.chars.iter())
            .any(|c| c.pos == 0.0 && c.val.abs() < 1e-12));
    }

    #[test]
    fn shocks_start_on_the_jumps_with_wave_speed() {
        let nl = catalog::figure().unwrap();
        let wave = catalog::figure_double(&nl).unwrap();
        let spec = SamplingSpec::new((-8.0, 8.0), 0.05);
        let field = init_field(&wave, &nl, &Perturbation::None, &spec).unwrap();
        assert_eq!(field.shocks.len(), 2);
        for (s, d) in field.shocks.iter().zip(&wave.discontinuities) {
            assert_eq!(s.pos, d.position);
            let speed = waves_core::slope(&nl, s.u_left, s.u_right);
            assert!((speed - wave.sigma).abs() < 1e-9);
        }
        assert_eq!(field.regions.len(), 3);
    }

    #[test]
    fn domain_exit_is_reported() {
        let nl = catalog::figure().unwrap();
        let wave = catalog::figure_front(&nl).unwrap();
        let spec = SamplingSpec::new((-4.0, 4.0), 0.1);
        let p = Perturbation::Bump {
            amplitude: 15.0,
            center: 0.0,
            width: 1.0,
        };
        assert!(matches!(
            init_field(&wave, &nl, &p, &spec),
            Err(SimError::DomainExit { .. })
        ));
    }

    #[test]
    fn characteristic_point_location() {
        let nl = catalog::figure().unwrap();
        let wave = catalog::figure_front(&nl).unwrap();
        // zero perturbation pins the origin
        let x = locate_characteristic_point(&wave, &nl, &Perturbation::None, 0).unwrap();
        assert!(x.abs() < 1e-12);
        // small constant shift: root ~ -c/U'(0)
        let c = 1e-3;
        let p = Perturbation::Bump {
            amplitude: c / bump::bump(0.0),
            center: 0.0,
            width: 50.0,
        };
        let x = locate_characteristic_point(&wave, &nl, &p, 0).unwrap();
        let expect = -c / wave.derivative(&nl, 0.0);
        assert!((x - expect).abs() < 1e-5, "{x} vs {expect}");
        // oversized perturbation: multiple roots are detected
        let p_big = Perturbation::Bump {
            amplitude: -3.0,
            center: 1.5,
            width: 0.5,
        };
        assert!(matches!(
            locate_characteristic_point(&wave, &nl, &p_big, 0),
            Err(SimError::MultipleRoots { .. })
        ));
    }

    #[test]
    fn reconstruct_exact_wave() {
        let nl = catalog::figure().unwrap();
        let wave = catalog::figure_front(&nl).unwrap();
        let spec = SamplingSpec::new((-8.0, 8.0), 0.02);
        let field = init_field(&wave, &nl, &Perturbation::None, &spec).unwrap();
        let grid: Vec<f64> = (-70..=70).map(|i| i as f64 * 0.1).collect();
        let snap = field.reconstruct(&grid).unwrap();
        for (x, v) in snap.grid.iter().zip(&snap.values) {
            assert!((v - wave.value(*x)).abs() < 1e-7, "x={x}");
        }
        assert!(!snap.grid_too_coarse);
    }

    #[test]
    fn coarse_field_is_flagged() {
        let nl = catalog::figure().unwrap();
        let wave = catalog::figure_front(&nl).unwrap();
        let spec = SamplingSpec {
            window: (-8.0, 8.0),
            h_base: 1.0,
            h_min: 0.5,
            kappa: 1.0,
        };
        let field = init_field(&wave, &nl, &Perturbation::None, &spec).unwrap();
        let grid: Vec<f64> = (0..=200).map(|i| -2.0 + i as f64 * 0.02).collect();
        let snap = field.reconstruct(&grid).unwrap();
        assert!(snap.grid_too_coarse);
    }
}
