//! End-to-end binary runs: exit codes, document shapes, reproducibility.

use std::fs;
use std::path::Path;
use std::process::Command;

fn waves() -> Command {
    Command::new(env!("CARGO_BIN_EXE_waves"))
}

fn write_config(dir: &Path, name: &str, text: &str) -> std::path::PathBuf {
    fs::create_dir_all(dir).unwrap();
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path
}

const FRONT_CONFIG: &str = r#"{
    "nonlinearity": {"catalog": "figure"},
    "wave": {"type": "front", "u_minus": -1.0, "u_star": 0.0, "u_plus": 1.0}
}"#;

#[test]
fn unknown_subcommand_exits_2_with_usage() {
    let out = waves().arg("frobnicate").output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.to_lowercase().contains("usage"), "{err}");
}

#[test]
fn classify_prints_the_verdict_json() {
    let dir = std::env::temp_dir().join("waves-cli-classify");
    let cfg = write_config(&dir, "front.json", FRONT_CONFIG);
    let out = waves().args(["classify", "--config"]).arg(&cfg).output().unwrap();
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["verdict"], "ContinuousFront");
}

#[test]
fn spectrum_reports_theta_pi_for_the_front() {
    let dir = std::env::temp_dir().join("waves-cli-spectrum");
    let cfg = write_config(&dir, "front.json", FRONT_CONFIG);
    let out = waves().args(["spectrum", "--config"]).arg(&cfg).output().unwrap();
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let theta = doc["theta"].as_f64().unwrap();
    assert!((theta - std::f64::consts::PI).abs() < 1e-9);
    assert_eq!(doc["ladders"].as_array().unwrap().len(), 1);
}

#[test]
fn profile_round_trips_through_the_serializer() {
    let dir = std::env::temp_dir().join("waves-cli-profile");
    let cfg = write_config(&dir, "front.json", FRONT_CONFIG);
    let out = waves()
        .args(["profile", "--config"])
        .arg(&cfg)
        .args(["--out"])
        .arg(&dir)
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = fs::read_to_string(dir.join("profile.json")).unwrap();
    let wave = waves_core::serialize::from_json(&text).unwrap();
    assert_eq!(wave.sigma, 0.0);
    assert!(wave.value(0.0).abs() < 1e-12);
    let doc: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(doc["version"], 1);
    assert!(doc["pieces"].as_array().is_some());
}

#[test]
fn module_errors_exit_nonzero_with_error_json() {
    let dir = std::env::temp_dir().join("waves-cli-err");
    // u_star = 0.5 is not a zero of the source
    let cfg = write_config(
        &dir,
        "bad.json",
        r#"{
            "nonlinearity": {"catalog": "figure"},
            "wave": {"type": "front", "u_minus": -1.0, "u_star": 0.5, "u_plus": 1.0}
        }"#,
    );
    let out = waves().args(["classify", "--config"]).arg(&cfg).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    let doc: serde_json::Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(doc["error"]["kind"], "core");
    assert!(doc["error"]["message"].as_str().unwrap().contains("g(u_*)"));
}

#[test]
fn figures_emits_eight_monotone_piece_tables() {
    let dir = std::env::temp_dir().join("waves-cli-figs");
    let _ = fs::remove_dir_all(&dir);
    let out = waves().arg("figures").arg("--out").arg(&dir).output().unwrap();
    assert!(out.status.success());
    let mut files: Vec<_> = fs::read_dir(&dir)
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .collect();
    files.sort();
    assert_eq!(files.len(), 8, "{files:?}");
    for name in &files {
        let text = fs::read_to_string(dir.join(name)).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("x,u"));
        let rows: Vec<(f64, f64)> = lines
            .map(|l| {
                let mut it = l.split(',');
                (
                    it.next().unwrap().parse().unwrap(),
                    it.next().unwrap().parse().unwrap(),
                )
            })
            .collect();
        assert!(rows.len() > 1000);
        // x nondecreasing, u monotone between duplicated jump abscissas
        for w in rows.windows(2) {
            assert!(w[1].0 >= w[0].0, "{name}: x not sorted");
        }
    }
}

#[test]
fn simulate_runs_are_byte_reproducible() {
    let dir = std::env::temp_dir().join("waves-cli-repro");
    let _ = fs::remove_dir_all(&dir);
    let cfg = write_config(
        &dir,
        "sim.json",
        r#"{
            "nonlinearity": {"catalog": "figure"},
            "wave": {"type": "front", "u_minus": -1.0, "u_star": 0.0, "u_plus": 1.0},
            "seed": 7,
            "simulate": {
                "t_final": 0.2,
                "dt": 0.001,
                "window": [-6.0, 6.0],
                "h_base": 0.02,
                "perturbation": {"shape": "random-bumps", "count": 3, "amplitude": 0.01, "window": [-2.0, 2.0]},
                "snapshots": 2,
                "snapshot_samples": 401
            }
        }"#,
    );
    let run = |sub: &str| {
        let out_dir = dir.join(sub);
        let out = waves()
            .args(["simulate", "--config"])
            .arg(&cfg)
            .arg("--out")
            .arg(&out_dir)
            .output()
            .unwrap();
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
        fs::read(out_dir.join("snapshot_002.csv")).unwrap()
    };
    let a = run("a");
    let b = run("b");
    assert_eq!(a, b, "same config and seed must give identical bytes");
}

#[test]
fn experiment_weyl_emits_the_sweep_csv() {
    let dir = std::env::temp_dir().join("waves-cli-weyl");
    let _ = fs::remove_dir_all(&dir);
    let out = waves()
        .args(["experiment", "weyl", "--catalog", "figure", "--out"])
        .arg(&dir)
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let rate = doc["fitted_rate"].as_f64().unwrap();
    assert!((rate - 1.0).abs() < 0.1, "rate {rate}");
    let csv = fs::read_to_string(dir.join("weyl_sweep.csv")).unwrap();
    assert!(csv.starts_with("eps,quotient,fitted_rate"));
    assert_eq!(csv.lines().count(), 4);
}
