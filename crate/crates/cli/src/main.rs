//! `waves`: build, classify, spectrally diagnose and evolve traveling waves
//! of scalar balance laws `∂t u + ∂x f(u) = g(u)`.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use waves_cli::commands::{self, CliError};

#[derive(Parser)]
#[command(name = "waves", version, about)]
struct Cli {
    /// JSON run configuration
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// output directory
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// seed for randomized perturbations
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// stdout format of the primary document
    #[arg(long, global = true, default_value = "json")]
    format: String,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a wave and serialize its profile
    Profile,
    /// Classify a wave (stable class, or witnesses of instability)
    Classify,
    /// Emit the spectral report (rates, ladders, theta tables)
    Spectrum,
    /// Evolve a configured initial perturbation
    Simulate,
    /// Run a named experiment on its standard fixture
    Experiment {
        /// one of: infinity, charpoint, shock, front-decay, small-shock,
        /// composite, weyl
        name: String,
        /// fixture catalog name when no config is given
        #[arg(long)]
        catalog: Option<String>,
    },
    /// Emit plot-ready CSVs of the stable profile classes and composites
    Figures,
}

fn run(cli: &Cli) -> Result<String, CliError> {
    let mut cfg = match &cli.config {
        Some(path) => Some(commands::load_config(path)?),
        None => None,
    };
    if let Some(c) = cfg.as_mut() {
        if cli.seed != 0 {
            c.seed = cli.seed;
        }
    }
    let out = cli.out.as_deref();
    match &cli.command {
        Command::Profile => {
            let cfg = cfg.ok_or_else(|| CliError::Usage("profile needs --config".into()))?;
            commands::cmd_profile(&cfg, out)
        }
        Command::Classify => {
            let cfg = cfg.ok_or_else(|| CliError::Usage("classify needs --config".into()))?;
            commands::cmd_classify(&cfg, out)
        }
        Command::Spectrum => {
            let cfg = cfg.ok_or_else(|| CliError::Usage("spectrum needs --config".into()))?;
            commands::cmd_spectrum(&cfg, out)
        }
        Command::Simulate => {
            let cfg = cfg.ok_or_else(|| CliError::Usage("simulate needs --config".into()))?;
            let dir = out
                .map(|p| p.to_path_buf())
                .unwrap_or_else(commands::default_out_dir);
            commands::cmd_simulate(&cfg, &dir)
        }
        Command::Experiment { name, catalog } => {
            commands::cmd_experiment(name, cfg.as_ref(), catalog.as_deref(), out)
        }
        Command::Figures => {
            let dir = out
                .map(|p| p.to_path_buf())
                .unwrap_or_else(commands::default_out_dir);
            commands::cmd_figures(&dir)
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter("WAVES_LOG")).init();
    let cli = Cli::parse();
    match run(&cli) {
        Ok(text) => {
            println!("{text}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("{}", waves_cli::output::error_json(e.kind(), &e.to_string()));
            ExitCode::FAILURE
        }
    }
}
