use std::collections::BTreeMap;
use std::path::PathBuf;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ConfigError {
    #[error("unknown tolerance `{0}` (known: {1})")]
    UnknownTolerance(String, String),
    #[error("tolerance `{0}` must be a positive number, got `{1}`")]
    BadTolerance(String, String),
    #[error("expected name=value, got `{0}`")]
    Malformed(String),
    #[error("degree range {0}..={1} is empty or starts below 1")]
    DegreeRange(usize, usize),
}

/// Named tolerances and their defaults.
pub const DEFAULT_TOLERANCES: [(&str, f64); 6] = [
    // ||A R + B S - 1|| for the Sylvester backend
    ("residual", 1e-9),
    // coefficientwise gap between backends
    ("agreement", 1e-7),
    // relative gap in the resultant triple
    ("resultant", 1e-6),
    ("sandwich", 1e-9),
    // distance of argument-principle integrals from integers
    ("winding", 1e-6),
    // relative error in the closed-form examples
    ("examples", 1e-8),
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub seed: u64,
    pub tolerances: BTreeMap<String, f64>,
    pub ensemble_size: usize,
    pub degree_min: usize,
    pub degree_max: usize,
    pub delta_floor: f64,
    pub separation_samples: usize,
    pub out_dir: Option<PathBuf>,
    /// Timing makes reports differ between runs, so it is opt-in.
    pub record_timing: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            seed: 20_240_917,
            tolerances: DEFAULT_TOLERANCES
                .iter()
                .map(|&(k, v)| (k.to_string(), v))
                .collect(),
            ensemble_size: 500,
            degree_min: 1,
            degree_max: 5,
            delta_floor: 0.05,
            separation_samples: 10_000,
            out_dir: None,
            record_timing: false,
        }
    }
}

impl RunConfig {
    pub fn tol(&self, name: &str) -> f64 {
        self.tolerances.get(name).copied().unwrap_or_else(|| {
            DEFAULT_TOLERANCES
                .iter()
                .find(|(k, _)| *k == name)
                .map(|&(_, v)| v)
                .unwrap_or_else(|| panic!("no tolerance named {name}"))
        })
    }

    /// Applies `name=value`.
    pub fn set_tolerance(&mut self, assignment: &str) -> Result<(), ConfigError> {
        let (name, value) = assignment
            .split_once('=')
            .ok_or_else(|| ConfigError::Malformed(assignment.into()))?;
        let name = name.trim();
        if !DEFAULT_TOLERANCES.iter().any(|(k, _)| *k == name) {
            let known: Vec<&str> = DEFAULT_TOLERANCES.iter().map(|(k, _)| *k).collect();
            return Err(ConfigError::UnknownTolerance(name.into(), known.join(", ")));
        }
        let parsed: f64 = value
            .trim()
            .parse()
            .map_err(|_| ConfigError::BadTolerance(name.into(), value.into()))?;
        if !(parsed > 0.0 && parsed.is_finite()) {
            return Err(ConfigError::BadTolerance(name.into(), value.into()));
        }
        self.tolerances.insert(name.into(), parsed);
        Ok(())
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.degree_min == 0 || self.degree_min > self.degree_max {
            return Err(ConfigError::DegreeRange(self.degree_min, self.degree_max));
        }
        for (k, v) in &self.tolerances {
            if v.is_nan() || *v <= 0.0 {
                return Err(ConfigError::BadTolerance(k.clone(), v.to_string()));
            }
        }
        Ok(())
    }
}
