//! Output plumbing: plot-ready CSV tables and machine-readable errors.
//!
//! Floats print in Rust's shortest round-trip form, so identical runs give
//! byte-identical files.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use waves_core::{Nonlinearity, WaveProfile};

/// A `(x, u)` table of the profile; at each jump both one-sided values are
/// emitted at the same position.
pub fn profile_csv(wave: &WaveProfile, window: (f64, f64), n: usize) -> String {
    let mut rows: Vec<(f64, f64)> = Vec::with_capacity(n + 4);
    for i in 0..=n {
        let x = window.0 + (window.1 - window.0) * i as f64 / n as f64;
        rows.push((x, wave.value(x)));
    }
    for jump in &wave.discontinuities {
        if jump.position > window.0 && jump.position < window.1 {
            rows.push((jump.position, jump.u_left));
            rows.push((jump.position, jump.u_right));
        }
    }
    rows.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    let mut out = String::from("x,u\n");
    for (x, u) in rows {
        let _ = writeln!(out, "{x},{u}");
    }
    out
}

/// Columns `(eps, quotient, fitted_rate)` for a Weyl sweep; the fitted rate
/// is repeated per row.
pub fn weyl_csv(points: &[waves_spectral::WeylPoint], fitted_rate: f64) -> String {
    let mut out = String::from("eps,quotient,fitted_rate\n");
    for p in points {
        let _ = writeln!(out, "{},{},{}", p.eps, p.quotient, fitted_rate);
    }
    out
}

pub fn write_file(dir: &Path, name: &str, contents: &str) -> std::io::Result<()> {
    fs::create_dir_all(dir)?;
    fs::write(dir.join(name), contents)
}

/// Machine-readable error document.
pub fn error_json(kind: &str, message: &str) -> String {
    serde_json::json!({
        "error": { "kind": kind, "message": message }
    })
    .to_string()
}

/// Snapshot CSV: x, u, region.
pub fn snapshot_csv(snap: &waves_sim::Snapshot) -> String {
    let mut out = String::from("x,u,region\n");
    for i in 0..snap.grid.len() {
        let _ = writeln!(
            out,
            "{},{},{}",
            snap.grid[i], snap.values[i], snap.region_labels[i]
        );
    }
    out
}

/// Classification JSON with the nonlinearity margins attached.
pub fn classification_json(
    wave: &WaveProfile,
    nl: &Nonlinearity,
) -> String {
    let c = waves_classify::classify(wave, nl);
    serde_json::to_string_pretty(&c).expect("classification serialization")
}
