//! Solver parameters and the flat `key=value` config file format.
//!
//! Defaults follow the published tuning of the method. Precedence when the
//! CLI assembles an effective configuration: flags > config file >
//! `GMAOS_CONFIG` > defaults.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use thiserror::Error;

/// All tunables of the solver, line search and stepsize models.
#[derive(Clone, Debug, PartialEq)]
pub struct SolverConfig {
    /// Gradient infinity-norm stopping tolerance.
    pub epsilon: f64,
    pub max_iter: usize,
    pub max_feval: usize,
    /// Stepsize clamp bounds applied after dispatch.
    pub lambda_min: f64,
    pub lambda_max: f64,
    /// Line-search sufficient-decrease constant.
    pub sigma: f64,
    /// Scale factor for the previous stepsize in the last-resort fallback.
    pub delta: f64,
    /// Conic-model scalar-matrix factor.
    pub xi1: f64,
    /// Quadratic-model scalar-matrix factor.
    pub xi2: f64,
    /// Gradient-norm ratio threshold for the near-collinear fallback.
    pub xi3: f64,
    /// Clip bound factor for the quadratic-model residual.
    pub eta_bar: f64,
    /// Quadratic-closeness thresholds, `c1 < c2`.
    pub c1: f64,
    pub c2: f64,
    /// Nonmonotone averaging parameter bounds; the solver uses `eta_max`.
    pub eta_min: f64,
    pub eta_max: f64,
    pub max_backtracks: usize,
    /// Seed recorded for reproducible perturbations and benchmark records.
    pub seed: u64,
    /// Keep a per-iteration trace in the report.
    pub collect_trace: bool,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            epsilon: 1e-6,
            max_iter: 140_000,
            max_feval: 50_000,
            lambda_min: 1e-30,
            lambda_max: 1e30,
            sigma: 1e-4,
            delta: 10.0,
            xi1: 2.15,
            xi2: 1.07,
            xi3: 0.9,
            eta_bar: 5.0 / 3.0 * 1e-5,
            c1: 1e-8,
            c2: 0.07,
            eta_min: 1.0,
            eta_max: 1.0,
            max_backtracks: 60,
            seed: 20240817,
            collect_trace: false,
        }
    }
}

impl SolverConfig {
    /// Probe-offset rule `tau = min(0.1 * alpha_prev, 0.01)`, floored away
    /// from zero.
    pub fn tau(&self, alpha_prev: f64) -> f64 {
        (0.1 * alpha_prev).min(0.01).max(1e-12)
    }

    /// Serializes as flat `key=value` lines; round-trips through [`SolverConfig::parse`].
    pub fn dump(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "epsilon={}", self.epsilon);
        let _ = writeln!(out, "max_iter={}", self.max_iter);
        let _ = writeln!(out, "max_feval={}", self.max_feval);
        let _ = writeln!(out, "lambda_min={}", self.lambda_min);
        let _ = writeln!(out, "lambda_max={}", self.lambda_max);
        let _ = writeln!(out, "sigma={}", self.sigma);
        let _ = writeln!(out, "delta={}", self.delta);
        let _ = writeln!(out, "xi1={}", self.xi1);
        let _ = writeln!(out, "xi2={}", self.xi2);
        let _ = writeln!(out, "xi3={}", self.xi3);
        let _ = writeln!(out, "eta_bar={}", self.eta_bar);
        let _ = writeln!(out, "c1={}", self.c1);
        let _ = writeln!(out, "c2={}", self.c2);
        let _ = writeln!(out, "eta_min={}", self.eta_min);
        let _ = writeln!(out, "eta_max={}", self.eta_max);
        let _ = writeln!(out, "max_backtracks={}", self.max_backtracks);
        let _ = writeln!(out, "seed={}", self.seed);
        out
    }

    /// Applies `key=value` lines on top of `self`. Blank lines and `#`
    /// comments are skipped.
    pub fn apply(&mut self, text: &str) -> Result<(), ConfigError> {
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or(ConfigError::Malformed {
                line: lineno + 1,
            })?;
            let key = key.trim();
            let value = value.trim();
            let bad = || ConfigError::BadValue { key: key.to_string(), line: lineno + 1 };
            match key {
                "epsilon" => self.epsilon = value.parse().map_err(|_| bad())?,
                "max_iter" => self.max_iter = value.parse().map_err(|_| bad())?,
                "max_feval" => self.max_feval = value.parse().map_err(|_| bad())?,
                "lambda_min" => self.lambda_min = value.parse().map_err(|_| bad())?,
                "lambda_max" => self.lambda_max = value.parse().map_err(|_| bad())?,
                "sigma" => self.sigma = value.parse().map_err(|_| bad())?,
                "delta" => self.delta = value.parse().map_err(|_| bad())?,
                "xi1" => self.xi1 = value.parse().map_err(|_| bad())?,
                "xi2" => self.xi2 = value.parse().map_err(|_| bad())?,
                "xi3" => self.xi3 = value.parse().map_err(|_| bad())?,
                "eta_bar" => self.eta_bar = value.parse().map_err(|_| bad())?,
                "c1" => self.c1 = value.parse().map_err(|_| bad())?,
                "c2" => self.c2 = value.parse().map_err(|_| bad())?,
                "eta_min" => self.eta_min = value.parse().map_err(|_| bad())?,
                "eta_max" => self.eta_max = value.parse().map_err(|_| bad())?,
                "max_backtracks" => self.max_backtracks = value.parse().map_err(|_| bad())?,
                "seed" => self.seed = value.parse().map_err(|_| bad())?,
                _ => {
                    return Err(ConfigError::UnknownKey {
                        key: key.to_string(),
                        line: lineno + 1,
                    })
                }
            }
        }
        Ok(())
    }

    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut cfg = SolverConfig::default();
        cfg.apply(text)?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::parse(&text)
    }
}

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read config file {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("malformed line {line}: expected key=value")]
    Malformed { line: usize },
    #[error("bad value for `{key}` on line {line}")]
    BadValue { key: String, line: usize },
    #[error("unknown config key `{key}` on line {line}")]
    UnknownKey { key: String, line: usize },
}
