use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::variation::{DeOperatorConfig, GaOperatorConfig};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum AlgorithmKind {
    #[serde(rename = "nsga2")]
    Nsga2,
    #[serde(rename = "rnsga2")]
    Rnsga2,
    #[serde(rename = "r2nsga2")]
    R2nsga2,
    #[serde(rename = "moead-nums")]
    MoeadNums,
}

impl AlgorithmKind {
    pub const ALL: [AlgorithmKind; 4] = [Self::Nsga2, Self::Rnsga2, Self::R2nsga2, Self::MoeadNums];

    pub fn as_str(self) -> &'static str {
        match self {
            Self::Nsga2 => "nsga2",
            Self::Rnsga2 => "rnsga2",
            Self::R2nsga2 => "r2nsga2",
            Self::MoeadNums => "moead-nums",
        }
    }

    /// Whether the algorithm steers toward a reference point.
    pub fn uses_reference_point(self) -> bool {
        !matches!(self, Self::Nsga2)
    }
}

impl fmt::Display for AlgorithmKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for AlgorithmKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|k| k.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::config("algorithm", format!("unknown algorithm `{s}`")))
    }
}

/// Tunables shared by all four algorithms; each reads the fields it needs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AlgorithmConfig {
    pub name: AlgorithmKind,
    pub mu: usize,
    /// Importance weights of the distance to the reference point; `None`
    /// means equal weights.
    pub weights_w: Option<Vec<f64>>,
    pub epsilon_clear: f64,
    pub delta: f64,
    pub tau: f64,
    pub rho: f64,
    pub neighborhood_t: usize,
    pub max_replace: usize,
    pub ga: GaOperatorConfig,
    pub de: DeOperatorConfig,
}

impl Default for AlgorithmConfig {
    fn default() -> Self {
        Self {
            name: AlgorithmKind::Rnsga2,
            mu: 100,
            weights_w: None,
            epsilon_clear: 0.001,
            delta: 0.3,
            tau: 0.5,
            rho: 1e-6,
            neighborhood_t: 20,
            max_replace: 2,
            ga: GaOperatorConfig::default(),
            de: DeOperatorConfig::default(),
        }
    }
}

impl AlgorithmConfig {
    pub fn new(name: AlgorithmKind) -> Self {
        Self { name, ..Self::default() }
    }

    /// Checks every invariant that does not depend on the problem.
    pub fn validate(&self) -> Result<()> {
        if self.mu < 4 {
            return Err(Error::config("mu", format!("population too small: {}", self.mu)));
        }
        if !(0.0..=1.0).contains(&self.delta) {
            return Err(Error::config("delta", format!("must lie in [0, 1], got {}", self.delta)));
        }
        if !(self.rho > 0.0) {
            return Err(Error::config("rho", format!("must be positive, got {}", self.rho)));
        }
        if !(self.tau > 0.0 && self.tau <= 1.0) {
            return Err(Error::config("tau", format!("must lie in (0, 1], got {}", self.tau)));
        }
        if !(self.epsilon_clear >= 0.0) {
            return Err(Error::config("epsilon_clear", format!("must be non-negative, got {}", self.epsilon_clear)));
        }
        if self.neighborhood_t < 3 {
            return Err(Error::config("neighborhood_t", "DE needs a neighborhood of at least 3"));
        }
        if self.max_replace == 0 {
            return Err(Error::config("max_replace", "must be at least 1"));
        }
        if let Some(w) = &self.weights_w {
            if w.iter().any(|&v| !(v >= 0.0)) || (w.iter().sum::<f64>() - 1.0).abs() > 1e-9 {
                return Err(Error::config("weights_w", "must be non-negative and sum to 1"));
            }
        }
        self.ga.validate()?;
        self.de.validate()
    }

    /// Checks the invariants tied to the objective count.
    pub fn validate_for(&self, m: usize) -> Result<()> {
        self.validate()?;
        if self.mu < 2 * m {
            return Err(Error::config("mu", format!("must be at least 2m = {}, got {}", 2 * m, self.mu)));
        }
        if self.name == AlgorithmKind::MoeadNums && self.neighborhood_t > self.mu {
            return Err(Error::config("neighborhood_t", "cannot exceed mu"));
        }
        if let Some(w) = &self.weights_w {
            if w.len() != m {
                return Err(Error::config("weights_w", format!("expected {m} entries, got {}", w.len())));
            }
        }
        Ok(())
    }

    pub fn importance_weights(&self, m: usize) -> Vec<f64> {
        self.weights_w.clone().unwrap_or_else(|| vec![1.0 / m as f64; m])
    }
}
