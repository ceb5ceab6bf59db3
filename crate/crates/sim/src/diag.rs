//! Experiment diagnostics: time series, rate fits, predicted-vs-measured
//! comparisons, CSV and JSON emission.

use serde::{Deserialize, Serialize};
use waves_core::num::fit::RateFit;

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct TimeSeries {
    pub t: Vec<f64>,
    pub columns: Vec<(String, Vec<f64>)>,
}

impl TimeSeries {
    pub fn push(&mut self, t: f64, values: &[(&str, f64)]) {
        if self.columns.is_empty() {
            for (name, _) in values {
                self.columns.push((name.to_string(), Vec::new()));
            }
        }
        self.t.push(t);
        for ((_, col), (_, v)) in self.columns.iter_mut().zip(values) {
            col.push(*v);
        }
    }

    pub fn column(&self, name: &str) -> Option<&[f64]> {
        self.columns
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, c)| c.as_slice())
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("t");
        for (name, _) in &self.columns {
            out.push(',');
            out.push_str(name);
        }
        out.push('\n');
        for i in 0..self.t.len() {
            out.push_str(&format!("{}", self.t[i]));
            for (_, col) in &self.columns {
                out.push_str(&format!(",{}", col[i]));
            }
            out.push('\n');
        }
        out
    }
}

/// One predicted-vs-measured line of the experiment summary.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Comparison {
    pub name: String,
    pub predicted: f64,
    pub measured: f64,
    /// |measured - predicted| relative to max(|predicted|, floor)
    pub rel_err: f64,
    pub tol: f64,
    pub pass: bool,
}

impl Comparison {
    pub fn relative(name: &str, predicted: f64, measured: f64, tol: f64) -> Self {
        let rel_err = (measured - predicted).abs() / predicted.abs().max(1e-300);
        Self {
            name: name.to_string(),
            predicted,
            measured,
            rel_err,
            tol,
            pass: rel_err <= tol,
        }
    }

    pub fn absolute(name: &str, predicted: f64, measured: f64, tol: f64) -> Self {
        let err = (measured - predicted).abs();
        Self {
            name: name.to_string(),
            predicted,
            measured,
            rel_err: err,
            tol,
            pass: err <= tol,
        }
    }

    pub fn bound(name: &str, measured: f64, lo: f64, hi: f64) -> Self {
        Self {
            name: name.to_string(),
            predicted: 0.5 * (lo + hi),
            measured,
            rel_err: 0.0,
            tol: 0.0,
            pass: measured >= lo && measured <= hi,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExperimentResult {
    pub name: String,
    pub series: TimeSeries,
    pub fits: Vec<(String, RateFit)>,
    pub comparisons: Vec<Comparison>,
    pub passed: bool,
}

impl ExperimentResult {
    pub fn new(name: &str) -> Self {
        Self {
            name: name.to_string(),
            series: TimeSeries::default(),
            fits: Vec::new(),
            comparisons: Vec::new(),
            passed: true,
        }
    }

    pub fn finish(&mut self) {
        self.passed = self.comparisons.iter().all(|c| c.pass);
    }

    pub fn comparison(&self, name: &str) -> Option<&Comparison> {
        self.comparisons.iter().find(|c| c.name == name)
    }

    pub fn fit(&self, name: &str) -> Option<&RateFit> {
        self.fits.iter().find(|(n, _)| n == name).map(|(_, f)| f)
    }

    pub fn summary_json(&self) -> String {
        #[derive(Serialize)]
        struct Summary<'a> {
            name: &'a str,
            fits: &'a [(String, RateFit)],
            comparisons: &'a [Comparison],
            passed: bool,
        }
        serde_json::to_string_pretty(&Summary {
            name: &self.name,
            fits: &self.fits,
            comparisons: &self.comparisons,
            passed: self.passed,
        })
        .expect("summary serialization")
    }
}
