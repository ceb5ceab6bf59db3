//! Run configuration: JSON documents with strict schemas (unknown keys are
//! rejected).

use serde::Deserialize;
use waves_core::{catalog, Nonlinearity, WaveProfile};
use waves_sim::Perturbation;

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, untagged)]
pub enum NonlinearitySpec {
    Catalog {
        catalog: String,
    },
    Expressions {
        f: String,
        g: String,
        domain: (f64, f64),
    },
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, tag = "type", rename_all = "kebab-case")]
pub enum WaveSpec {
    Constant {
        u: f64,
        sigma: f64,
    },
    Riemann {
        u_minus: f64,
        u_plus: f64,
    },
    Front {
        u_minus: f64,
        u_star: f64,
        u_plus: f64,
    },
    /// monotone connection without the stability sign checks
    FrontRaw {
        u_star: f64,
    },
    SingleLeft {
        u_minus_inf: f64,
        u_star: f64,
        u_plus_inf: f64,
    },
    SingleRight {
        u_minus_inf: f64,
        u_star: f64,
        u_plus_inf: f64,
    },
    Double {
        u_minus_inf: f64,
        u_star: f64,
        u_plus_inf: f64,
    },
    GluedPair {
        u_star: f64,
        level: f64,
    },
    TwoChar {
        u_star_1: f64,
        u_star_2: f64,
        level: f64,
    },
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, tag = "shape", rename_all = "kebab-case")]
pub enum PerturbationSpec {
    None,
    Bump {
        amplitude: f64,
        center: f64,
        width: f64,
    },
    ProfileShift {
        delta: f64,
        center: f64,
        width: f64,
    },
    /// seeded random bumps drawn from the run seed
    RandomBumps {
        count: usize,
        amplitude: f64,
        window: (f64, f64),
    },
    Sum {
        parts: Vec<PerturbationSpec>,
    },
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimulateSpec {
    pub t_final: f64,
    #[serde(default = "default_dt")]
    pub dt: f64,
    pub window: (f64, f64),
    #[serde(default = "default_h_base")]
    pub h_base: f64,
    pub perturbation: PerturbationSpec,
    /// snapshot sample count over the window at the final time
    #[serde(default = "default_samples")]
    pub snapshot_samples: usize,
    /// number of intermediate snapshots
    #[serde(default = "default_snapshots")]
    pub snapshots: usize,
}

fn default_dt() -> f64 {
    1e-3
}
fn default_h_base() -> f64 {
    4e-3
}
fn default_samples() -> usize {
    2001
}
fn default_snapshots() -> usize {
    5
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentSpec {
    pub name: String,
    #[serde(default)]
    pub eps: Option<f64>,
    #[serde(default)]
    pub r: Option<f64>,
    #[serde(default)]
    pub t_final: Option<f64>,
    #[serde(default)]
    pub dt: Option<f64>,
    #[serde(default)]
    pub amplitude: Option<f64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub nonlinearity: NonlinearitySpec,
    pub wave: WaveSpec,
    #[serde(default)]
    pub simulate: Option<SimulateSpec>,
    #[serde(default)]
    pub experiment: Option<ExperimentSpec>,
    #[serde(default)]
    pub seed: u64,
    /// spectral-report ladder depth
    #[serde(default = "default_depth")]
    pub ladder_depth: usize,
}

fn default_depth() -> usize {
    5
}

impl RunConfig {
    pub fn nonlinearity(&self) -> Result<Nonlinearity, crate::commands::CliError> {
        match &self.nonlinearity {
            NonlinearitySpec::Catalog { catalog: name } => {
                Ok(catalog::nonlinearity_by_name(name)?)
            }
            NonlinearitySpec::Expressions { f, g, domain } => {
                Ok(crate::deriv::nonlinearity_from_expressions(f, g, *domain)?)
            }
        }
    }

    pub fn wave(&self, nl: &Nonlinearity) -> Result<WaveProfile, crate::commands::CliError> {
        use waves_core::{
            build_composite, build_front, build_front_raw, build_glued_front_pair, build_riemann,
            build_two_char_wave, CompositeKind, CompositeSpec,
        };
        let wave = match &self.wave {
            WaveSpec::Constant { u, sigma } => waves_core::builders::build_constant(nl, *u, *sigma)?,
            WaveSpec::Riemann { u_minus, u_plus } => build_riemann(nl, *u_minus, *u_plus)?,
            WaveSpec::Front {
                u_minus,
                u_star,
                u_plus,
            } => build_front(nl, *u_minus, *u_star, *u_plus)?,
            WaveSpec::FrontRaw { u_star } => {
                build_front_raw(nl, *u_star, &waves_core::IntegrationOptions::default())?
            }
            WaveSpec::SingleLeft {
                u_minus_inf,
                u_star,
                u_plus_inf,
            } => build_composite(
                nl,
                &CompositeSpec {
                    kind: CompositeKind::SingleLeft,
                    u_minus_inf: *u_minus_inf,
                    u_star: *u_star,
                    u_plus_inf: *u_plus_inf,
                },
            )?,
            WaveSpec::SingleRight {
                u_minus_inf,
                u_star,
                u_plus_inf,
            } => build_composite(
                nl,
                &CompositeSpec {
                    kind: CompositeKind::SingleRight,
                    u_minus_inf: *u_minus_inf,
                    u_star: *u_star,
                    u_plus_inf: *u_plus_inf,
                },
            )?,
            WaveSpec::Double {
                u_minus_inf,
                u_star,
                u_plus_inf,
            } => build_composite(
                nl,
                &CompositeSpec {
                    kind: CompositeKind::Double,
                    u_minus_inf: *u_minus_inf,
                    u_star: *u_star,
                    u_plus_inf: *u_plus_inf,
                },
            )?,
            WaveSpec::GluedPair { u_star, level } => build_glued_front_pair(nl, *u_star, *level)?,
            WaveSpec::TwoChar {
                u_star_1,
                u_star_2,
                level,
            } => build_two_char_wave(nl, *u_star_1, *u_star_2, *level)?,
        };
        Ok(wave)
    }
}

impl PerturbationSpec {
    pub fn build(&self, seed: u64) -> Perturbation {
        use rand::{Rng, SeedableRng};
        match self {
            PerturbationSpec::None => Perturbation::None,
            PerturbationSpec::Bump {
                amplitude,
                center,
                width,
            } => Perturbation::Bump {
                amplitude: *amplitude,
                center: *center,
                width: *width,
            },
            PerturbationSpec::ProfileShift {
                delta,
                center,
                width,
            } => Perturbation::ProfileShift {
                delta: *delta,
                center: *center,
                width: *width,
            },
            PerturbationSpec::RandomBumps {
                count,
                amplitude,
                window,
            } => {
                let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
                let parts = (0..*count)
                    .map(|_| Perturbation::Bump {
                        amplitude: amplitude * rng.gen_range(-1.0..1.0),
                        center: rng.gen_range(window.0..window.1),
                        width: rng.gen_range(0.3..1.5),
                    })
                    .collect();
                Perturbation::Sum(parts)
            }
            PerturbationSpec::Sum { parts } => {
                Perturbation::Sum(parts.iter().map(|p| p.build(seed)).collect())
            }
        }
    }
}

pub fn parse_config(text: &str) -> Result<RunConfig, serde_json::Error> {
    serde_json::from_str(text)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_keys_are_rejected() {
        let text = r#"{
            "nonlinearity": {"catalog": "figure"},
            "wave": {"type": "front", "u_minus": -1.0, "u_star": 0.0, "u_plus": 1.0},
            "bogus": 1
        }"#;
        assert!(parse_config(text).is_err());
    }

    #[test]
    fn catalog_config_builds() {
        let text = r#"{
            "nonlinearity": {"catalog": "figure"},
            "wave": {"type": "front", "u_minus": -1.0, "u_star": 0.0, "u_plus": 1.0}
        }"#;
        let cfg = parse_config(text).unwrap();
        let nl = cfg.nonlinearity().unwrap();
        let wave = cfg.wave(&nl).unwrap();
        assert_eq!(wave.sigma, 0.0);
    }

    #[test]
    fn expression_config_builds() {
        let text = r#"{
            "nonlinearity": {"f": "-cos(7/4*u)", "g": "sin(pi*u)", "domain": [-4.0, 4.0]},
            "wave": {"type": "riemann", "u_minus": -1.0, "u_plus": 1.0}
        }"#;
        let cfg = parse_config(text).unwrap();
        let nl = cfg.nonlinearity().unwrap();
        let wave = cfg.wave(&nl).unwrap();
        assert_eq!(wave.discontinuities.len(), 1);
    }
}
