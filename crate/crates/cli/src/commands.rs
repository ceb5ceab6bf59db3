//! Implementations behind the subcommands.

use std::path::{Path, PathBuf};

use thiserror::Error;
use waves_core::{catalog, Nonlinearity, WaveProfile};
use waves_sim::experiments::*;
use waves_sim::{ExperimentResult, Perturbation, SamplingSpec, StepPolicy};

use crate::config::{ExperimentSpec, RunConfig};
use crate::output;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Core(#[from] waves_core::CoreError),
    #[error("{0}")]
    Spectral(#[from] waves_spectral::SpectralError),
    #[error("{0}")]
    Sim(#[from] waves_sim::SimError),
    #[error("{0}")]
    Expr(#[from] crate::deriv::ExprNonlinearityError),
    #[error("config: {0}")]
    Config(#[from] serde_json::Error),
    #[error("{0}")]
    Io(#[from] std::io::Error),
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Core(_) => "core",
            CliError::Spectral(_) => "spectral",
            CliError::Sim(_) => "sim",
            CliError::Expr(_) => "expression",
            CliError::Config(_) => "config",
            CliError::Io(_) => "io",
            CliError::Usage(_) => "usage",
        }
    }
}

pub fn load_config(path: &Path) -> Result<RunConfig, CliError> {
    let text = std::fs::read_to_string(path)?;
    Ok(crate::config::parse_config(&text)?)
}

/// `profile`: build the wave and emit the versioned JSON document.
pub fn cmd_profile(cfg: &RunConfig, out: Option<&Path>) -> Result<String, CliError> {
    let nl = cfg.nonlinearity()?;
    let wave = cfg.wave(&nl)?;
    wave.require_admissible(&nl)?;
    let text = waves_core::serialize::to_json(&wave);
    if let Some(dir) = out {
        output::write_file(dir, "profile.json", &text)?;
    }
    Ok(text)
}

/// `classify`: verdict JSON.
pub fn cmd_classify(cfg: &RunConfig, out: Option<&Path>) -> Result<String, CliError> {
    let nl = cfg.nonlinearity()?;
    let wave = cfg.wave(&nl)?;
    let text = output::classification_json(&wave, &nl);
    if let Some(dir) = out {
        output::write_file(dir, "classification.json", &text)?;
    }
    Ok(text)
}

/// `spectrum`: spectral report JSON.
pub fn cmd_spectrum(cfg: &RunConfig, out: Option<&Path>) -> Result<String, CliError> {
    let nl = cfg.nonlinearity()?;
    let wave = cfg.wave(&nl)?;
    let report = waves_classify::spectral_report(&wave, &nl, cfg.ladder_depth);
    let text = serde_json::to_string_pretty(&report).expect("report serialization");
    if let Some(dir) = out {
        output::write_file(dir, "spectrum.json", &text)?;
    }
    Ok(text)
}

/// `simulate`: run a configured evolution, emitting snapshots and the
/// diagnostic series.
pub fn cmd_simulate(cfg: &RunConfig, out: &Path) -> Result<String, CliError> {
    let nl = cfg.nonlinearity()?;
    let wave = cfg.wave(&nl)?;
    let sim = cfg
        .simulate
        .as_ref()
        .ok_or_else(|| CliError::Usage("config lacks a `simulate` block".into()))?;
    let perturbation = sim.perturbation.build(cfg.seed);
    let spec = SamplingSpec::new(sim.window, sim.h_base);
    let mut field = waves_sim::init_field(&wave, &nl, &perturbation, &spec)?;
    let policy = StepPolicy {
        dt: sim.dt,
        ..StepPolicy::default()
    };
    let margin = 0.5;
    let grid: Vec<f64> = (0..sim.snapshot_samples)
        .map(|i| {
            sim.window.0
                + margin
                + (sim.window.1 - sim.window.0 - 2.0 * margin) * i as f64
                    / (sim.snapshot_samples - 1) as f64
        })
        .collect();
    let n_steps = (sim.t_final / sim.dt).round() as usize;
    let snap_every = (n_steps / sim.snapshots.max(1)).max(1);
    let mut snap_idx = 0usize;
    let mut series = waves_sim::TimeSeries::default();
    let mut emit = |field: &waves_sim::CharacteristicField| -> Result<(), CliError> {
        let snap = field.reconstruct(&grid)?;
        output::write_file(
            out,
            &format!("snapshot_{snap_idx:03}.csv"),
            &output::snapshot_csv(&snap),
        )?;
        snap_idx += 1;
        Ok(())
    };
    emit(&field)?;
    for i in 1..=n_steps {
        match waves_sim::step(&mut field, &policy)? {
            waves_sim::StepOutcome::Advanced => {}
            waves_sim::StepOutcome::Broke { t, x } => {
                series.push(t, &[("breaking_x", x)]);
                break;
            }
        }
        if i % snap_every == 0 || i == n_steps {
            emit(&field)?;
        }
        if i % 50 == 0 {
            let active = field.active_char_count() as f64;
            series.push(field.t, &[("active_characteristics", active)]);
        }
    }
    output::write_file(out, "diagnostics.csv", &series.to_csv())?;
    let summary = serde_json::json!({
        "t_final": field.t,
        "snapshots": snap_idx,
        "breaking_events": field.breaking_events,
        "shocks": field.shocks.iter().filter(|s| s.alive).map(|s| s.pos).collect::<Vec<_>>(),
    });
    let text = serde_json::to_string_pretty(&summary).unwrap();
    output::write_file(out, "summary.json", &text)?;
    Ok(text)
}

fn fixture_for(name: &str) -> Result<(Nonlinearity, WaveProfile), CliError> {
    match name {
        "infinity" => {
            let nl = catalog::figure()?;
            let wave = catalog::unstable_constant(&nl)?;
            Ok((nl, wave))
        }
        "charpoint" => {
            let nl = catalog::breaking()?;
            let wave = catalog::breaking_front(&nl)?;
            Ok((nl, wave))
        }
        "shock" => {
            let nl = catalog::figure()?;
            let wave = catalog::figure_glued_pair(&nl, 0.5)?;
            Ok((nl, wave))
        }
        "front-decay" | "small-shock" | "weyl" => {
            let nl = catalog::figure()?;
            let wave = catalog::figure_front_tight(&nl)?;
            Ok((nl, wave))
        }
        "composite" => {
            let nl = catalog::quartic_pair()?;
            let wave = catalog::quartic_family_wave(&nl, 0.5)?;
            Ok((nl, wave))
        }
        other => Err(CliError::Usage(format!(
            "unknown experiment '{other}' (have: infinity, charpoint, shock, front-decay, small-shock, composite, weyl)"
        ))),
    }
}

/// `experiment <name>`: run a named experiment on its paper fixture (or the
/// configured wave) and emit the series CSV plus summary JSON.
pub fn cmd_experiment(
    name: &str,
    cfg: Option<&RunConfig>,
    catalog_name: Option<&str>,
    out: Option<&Path>,
) -> Result<String, CliError> {
    let (nl, wave) = match (cfg, catalog_name) {
        (Some(c), _) => {
            let nl = c.nonlinearity()?;
            let wave = c.wave(&nl)?;
            (nl, wave)
        }
        (None, Some("figure")) | (None, None) => fixture_for(name)?,
        (None, Some(other)) => {
            let nl = catalog::nonlinearity_by_name(other)?;
            let wave = fixture_for(name)?.1;
            (nl, wave)
        }
    };
    let spec = cfg.and_then(|c| c.experiment.clone()).unwrap_or(ExperimentSpec {
        name: name.to_string(),
        eps: None,
        r: None,
        t_final: None,
        dt: None,
        amplitude: None,
    });

    if name == "weyl" {
        let opts = waves_spectral::WeylOptions::default();
        let (points, rate) =
            waves_spectral::weyl_sweep(&wave, &nl, &[1e-1, 3e-2, 1e-2], &opts)?;
        let csv = output::weyl_csv(&points, rate);
        if let Some(dir) = out {
            output::write_file(dir, "weyl_sweep.csv", &csv)?;
        }
        let summary = serde_json::json!({
            "name": "weyl",
            "fitted_rate": rate,
            "expected_rate": waves_spectral::weyl::expected_rate(opts.p, opts.q),
            "points": points,
        });
        return Ok(serde_json::to_string_pretty(&summary).unwrap());
    }

    let result: ExperimentResult = match name {
        "infinity" => run_experiment_infinity(
            &nl,
            &wave,
            &InfinityParams {
                eps: spec.eps.unwrap_or(0.1),
                dt: spec.dt.unwrap_or(1e-3),
            },
        )?,
        "charpoint" => run_experiment_charpoint(
            &nl,
            &wave,
            &CharpointParams {
                r: spec.r.unwrap_or(0.1),
                dt: spec.dt.unwrap_or(1e-3),
            },
        )?,
        "shock" => run_experiment_shock(
            &nl,
            &wave,
            &ShockParams {
                eps: spec.eps.unwrap_or(1e-4),
            },
        )?,
        "front-decay" => {
            let mut params = FrontDecayParams::default();
            if let Some(a) = spec.amplitude {
                params.perturbation = Perturbation::Bump {
                    amplitude: a,
                    center: 0.6,
                    width: 2.0,
                };
            }
            if let Some(t) = spec.t_final {
                params.t_final = t;
                params.fit_window = (t / 3.0, t);
            }
            if let Some(dt) = spec.dt {
                params.dt = dt;
            }
            run_experiment_front_decay(&nl, &wave, &params)?
        }
        "small-shock" => run_experiment_small_shock(
            &nl,
            &wave,
            &SmallShockParams {
                eps: spec.eps.unwrap_or(1e-3),
                t_final: spec.t_final.unwrap_or(10.0),
                dt: spec.dt.unwrap_or(1e-3),
                ..SmallShockParams::default()
            },
        )?,
        "composite" => {
            let chars = wave.characteristic_points();
            let report = waves_classify::spectral_report(&wave, &nl, 2);
            let theta_candidates: Vec<f64> = report
                .jump_eigenvalues
                .iter()
                .map(|(_, r)| -r)
                .chain(chars.iter().map(|c| nl.g1(c.1)))
                .chain([-nl.g1(wave.endstates.0), -nl.g1(wave.endstates.1)])
                .collect();
            let theta = theta_candidates
                .into_iter()
                .fold(f64::INFINITY, f64::min);
            let t_final = spec.t_final.unwrap_or(7.0);
            run_experiment_composite(
                &nl,
                &wave,
                &CompositeParams {
                    perturbation: Perturbation::ProfileShift {
                        delta: spec.eps.unwrap_or(5e-3),
                        center: chars.last().map(|c| c.0).unwrap_or(0.0),
                        width: 0.6,
                    },
                    t_final,
                    dt: spec.dt.unwrap_or(1e-3),
                    fit_window: (0.3 * t_final, 0.9 * t_final),
                    theta,
                    theta_tol: 0.15,
                    window: (-8.0, 10.0),
                },
            )?
        }
        other => {
            return Err(CliError::Usage(format!(
                "unknown experiment '{other}'"
            )))
        }
    };
    if let Some(dir) = out {
        output::write_file(dir, &format!("{name}_series.csv"), &result.series.to_csv())?;
        output::write_file(dir, &format!("{name}_summary.json"), &result.summary_json())?;
    }
    Ok(result.summary_json())
}

/// `figures`: plot-ready CSVs of the five stable classes and the three
/// composite shapes.
pub fn cmd_figures(out: &Path) -> Result<String, CliError> {
    let nl = catalog::figure()?;
    let window = (-8.0, 8.0);
    let n = 1600;
    let files: Vec<(&str, WaveProfile)> = vec![
        ("class1_constant.csv", catalog::figure_constant(&nl)?),
        ("class2_riemann.csv", catalog::figure_riemann(&nl)?),
        ("class3_front.csv", catalog::figure_front(&nl)?),
        ("class4_single_jump.csv", catalog::figure_single_left(&nl)?),
        ("class5_double_jump.csv", catalog::figure_double(&nl)?),
        ("composite_single_left.csv", catalog::figure_single_left(&nl)?),
        (
            "composite_single_right.csv",
            catalog::figure_single_right(&nl)?,
        ),
        ("composite_double.csv", catalog::figure_double(&nl)?),
    ];
    let mut names = Vec::new();
    for (name, wave) in &files {
        wave.require_admissible(&nl)?;
        output::write_file(out, name, &output::profile_csv(wave, window, n))?;
        names.push(*name);
    }
    Ok(serde_json::json!({ "written": names, "directory": out }).to_string())
}

/// Paths used by tests.
pub fn default_out_dir() -> PathBuf {
    PathBuf::from("waves-out")
}
