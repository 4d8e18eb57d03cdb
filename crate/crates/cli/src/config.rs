//! Job configuration: flags overlay a JSON config file, which overlays the
//! environment and built-in defaults.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::CliError;

pub const DEFAULT_TOL: f64 = 1e-6;
pub const TOL_ENV: &str = "HYPERLAP_TOL";

/// A string or a list of strings.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum OneOrMany {
    One(String),
    Many(Vec<String>),
}

impl OneOrMany {
    pub fn into_vec(self) -> Vec<String> {
        match self {
            OneOrMany::One(s) => vec![s],
            OneOrMany::Many(v) => v,
        }
    }
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProfileConfig {
    pub c0: f64,
    pub c1: f64,
    pub p: f64,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobConfig {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub command: Option<String>,
    /// Hyperfunction: builtin notation, `@file`, or a literal object.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub u: Option<Value>,
    /// Function of ζ (inverse, roundtrip) or right-hand side (solve).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub f: Option<Value>,
    /// Support set: an interval string or {"vertex", "generators"}.
    #[serde(rename = "K", skip_serializing_if = "Option::is_none")]
    pub k: Option<Value>,
    #[serde(rename = "P", skip_serializing_if = "Option::is_none")]
    pub p: Option<OneOrMany>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub zeta: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub psi: Option<ProfileConfig>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub xi0: Option<Vec<f64>>,
    /// Ray-loop standoff of the forward transform.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eps: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub growth: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub densities: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mesh: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub char_tol: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub suites: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tol_source: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub csv: Option<String>,
}

macro_rules! overlay {
    ($base:expr, $top:expr, $($field:ident),*) => {
        $( if $top.$field.is_some() { $base.$field = $top.$field; } )*
    };
}

impl JobConfig {
    pub fn load(path: &str) -> Result<JobConfig, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Config(format!("cannot read config {path}: {e}")))?;
        let cfg: JobConfig = serde_json::from_str(&text).map_err(|e| CliError::Config(format!("config {path}: {e}")))?;
        if cfg.tol_source.is_some() {
            return Err(CliError::Config("tol_source is an output field".into()));
        }
        Ok(cfg)
    }

    /// Fields set in `top` replace those in `self`.
    pub fn overlay(mut self, top: JobConfig) -> JobConfig {
        overlay!(self, top, command, u, f, k, p, zeta, psi, xi0, eps, growth, densities, mesh, char_tol, suites, tol, out, csv);
        self
    }

    /// Resolves the tolerance (flag or config, then the environment, then
    /// the default) and checks numeric fields.
    pub fn finish(mut self, tol_from_flag: bool) -> Result<JobConfig, CliError> {
        let (tol, source) = match self.tol {
            Some(t) => (t, if tol_from_flag { "flag" } else { "config" }),
            None => match std::env::var(TOL_ENV) {
                Ok(s) => {
                    let t = s.trim().parse::<f64>().map_err(|_| CliError::Config(format!("{TOL_ENV}={s} is not a number")))?;
                    (t, "env")
                }
                Err(_) => (DEFAULT_TOL, "default"),
            },
        };
        if !(tol > 0.0 && tol.is_finite()) {
            return Err(CliError::Config(format!("tolerance must be positive, got {tol}")));
        }
        self.tol = Some(tol);
        self.tol_source = Some(source.into());
        for (name, v) in [("eps", self.eps), ("mesh", self.mesh), ("char_tol", self.char_tol)] {
            if let Some(v) = v {
                if !(v > 0.0 && v.is_finite()) {
                    return Err(CliError::Config(format!("{name} must be positive, got {v}")));
                }
            }
        }
        Ok(self)
    }

    pub fn tol(&self) -> f64 {
        self.tol.unwrap_or(DEFAULT_TOL)
    }
}
