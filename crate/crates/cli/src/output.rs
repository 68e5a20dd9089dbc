//! Deterministic file output: CSV tables and the TOML run summary.
//!
//! Floats are serialized with 17 significant digits, enough to round-trip
//! f64 exactly, so identical runs produce byte-identical files.

use serde::Serialize;
use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use crate::error::RunError;

/// 17 significant digits: exact f64 round-trip.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

pub struct CsvWriter {
    path: PathBuf,
    buf: String,
    cols: usize,
}

impl CsvWriter {
    pub fn create(dir: &Path, name: &str, header: &[&str]) -> Self {
        let mut buf = String::new();
        buf.push_str(&header.join(","));
        buf.push('\n');
        Self {
            path: dir.join(name),
            buf,
            cols: header.len(),
        }
    }

    pub fn row(&mut self, values: &[f64]) {
        assert_eq!(values.len(), self.cols, "row width mismatch");
        let mut first = true;
        for v in values {
            if !first {
                self.buf.push(',');
            }
            self.buf.push_str(&fmt_f64(*v));
            first = false;
        }
        self.buf.push('\n');
    }

    pub fn finish(self) -> Result<PathBuf, RunError> {
        let mut f = fs::File::create(&self.path)?;
        f.write_all(self.buf.as_bytes())?;
        Ok(self.path)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckOut {
    pub name: String,
    pub value: f64,
    pub threshold: f64,
    /// "lt" when value must stay below threshold, "ge" when at or above.
    pub direction: String,
    pub passed: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ParamsOut {
    pub rho: f64,
    pub m: u32,
    pub n: u32,
    pub s_fiber: f64,
    pub sigma: f64,
    pub a_coeff: f64,
    pub alpha_exp: f64,
    pub regime: String,
}

impl ParamsOut {
    pub fn from_core(p: &rbflow_core::params::FlowParams) -> Self {
        Self {
            rho: p.rho,
            m: p.m,
            n: p.n,
            s_fiber: p.s_fiber,
            sigma: p.sigma,
            a_coeff: p.a_coeff,
            alpha_exp: p.alpha_exp,
            regime: format!("{:?}", p.regime),
        }
    }
}

/// One structured report per run; the acceptance suite consumes these
/// instead of logs.
#[derive(Clone, Debug, Serialize)]
pub struct RunSummary {
    pub schema_version: u32,
    pub mode: String,
    pub scenario: Option<String>,
    pub seed: u64,
    pub passed: bool,
    pub label: Option<String>,
    pub params: Option<ParamsOut>,
    pub measured: BTreeMap<String, f64>,
    pub checks: Vec<CheckOut>,
}

impl RunSummary {
    pub fn new(mode: &str, scenario: Option<String>, seed: u64) -> Self {
        Self {
            schema_version: crate::config::SCHEMA_VERSION,
            mode: mode.to_string(),
            scenario,
            seed,
            passed: true,
            label: None,
            params: None,
            measured: BTreeMap::new(),
            checks: Vec::new(),
        }
    }

    pub fn measure(&mut self, name: &str, value: f64) {
        self.measured.insert(name.to_string(), value);
    }

    /// Records a check that `value < threshold`.
    pub fn check_lt(&mut self, name: &str, value: f64, threshold: f64) -> bool {
        let passed = value < threshold;
        self.checks.push(CheckOut {
            name: name.to_string(),
            value,
            threshold,
            direction: "lt".into(),
            passed,
        });
        self.passed &= passed;
        passed
    }

    /// Records a check that `value >= threshold`.
    pub fn check_ge(&mut self, name: &str, value: f64, threshold: f64) -> bool {
        let passed = value >= threshold;
        self.checks.push(CheckOut {
            name: name.to_string(),
            value,
            threshold,
            direction: "ge".into(),
            passed,
        });
        self.passed &= passed;
        passed
    }

    pub fn write(&self, dir: &Path) -> Result<PathBuf, RunError> {
        let text = toml::to_string_pretty(self)
            .map_err(|e| RunError::Validation(format!("summary serialization: {e}")))?;
        let path = dir.join("summary.toml");
        fs::write(&path, text)?;
        Ok(path)
    }
}

pub fn ensure_dir(dir: &Path) -> Result<(), RunError> {
    fs::create_dir_all(dir)?;
    Ok(())
}
