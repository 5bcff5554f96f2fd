use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::oracle::{ExactAccounting, OracleMode};
use crate::spectrum::ResidualPolicy;

/// Where the spectral model comes from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SpectrumSource {
    Tfim {
        sites: usize,
        coupling: f64,
    },
    /// A spectrum JSON document (`phases`, `weights`, `target_index`).
    File {
        path: PathBuf,
    },
}

impl Default for SpectrumSource {
    fn default() -> Self {
        Self::Tfim {
            sites: 8,
            coupling: 4.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Method {
    /// Full depth, `ξ = 1`.
    Rpe,
    RpeLowdepth {
        xi: Vec<f64>,
    },
    Qpe {
        ancilla: Vec<u32>,
        #[serde(default = "one")]
        shots: u64,
    },
}

fn one() -> u64 {
    1
}

/// How `δ` is chosen for each `p₀`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DeltaPolicy {
    /// The same `δ` for every `p₀`.
    Value(f64),
    /// `δ = (1 − p₀)·margin`.
    Margin(f64),
}

impl Default for DeltaPolicy {
    fn default() -> Self {
        Self::Margin(1.05)
    }
}

impl DeltaPolicy {
    pub fn delta(&self, p0: f64) -> f64 {
        match *self {
            Self::Value(d) => d,
            Self::Margin(m) => (1.0 - p0) * m,
        }
    }
}

/// A sweep over methods, accuracies and overlaps.
///
/// Loaded from TOML; every key is optional and falls back to [`Default`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentPlan {
    pub spectrum: SpectrumSource,
    /// Target eigenstate; defaults to the ground state (or the file's target).
    pub target_index: Option<usize>,
    pub residual: ResidualPolicy,
    pub methods: Vec<Method>,
    pub epsilons: Vec<f64>,
    /// Overlaps to impose. Empty with a file source keeps the file's weights.
    pub p0: Vec<f64>,
    pub delta: DeltaPolicy,
    pub eta: f64,
    pub trials: u64,
    pub master_seed: u64,
    pub oracle: OracleMode,
    pub exact_accounting: ExactAccounting,
}

impl Default for ExperimentPlan {
    fn default() -> Self {
        Self {
            spectrum: SpectrumSource::default(),
            target_index: None,
            residual: ResidualPolicy::default(),
            methods: vec![Method::Rpe],
            epsilons: vec![1e-3],
            p0: vec![0.8],
            delta: DeltaPolicy::default(),
            eta: 0.1,
            trials: 200,
            master_seed: 0,
            oracle: OracleMode::default(),
            exact_accounting: ExactAccounting::default(),
        }
    }
}

impl ExperimentPlan {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_owned(),
            source,
        })?;
        let mut plan = Self::from_toml_str(&text)?;
        // relative spectrum paths are resolved against the config file
        if let SpectrumSource::File { path: p } = &mut plan.spectrum {
            if p.is_relative() {
                if let Some(dir) = path.parent() {
                    *p = dir.join(&*p);
                }
            }
        }
        Ok(plan)
    }

    pub fn to_toml_string(&self) -> Result<String> {
        toml::to_string_pretty(self).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(invalid("plan needs at least one trial per cell"));
        }
        if !(self.eta > 0.0 && self.eta < 1.0) {
            return Err(invalid(format!("eta must lie in (0, 1), got {}", self.eta)));
        }
        if self.methods.is_empty() {
            return Err(invalid("plan lists no methods"));
        }
        let uses_rpe = self
            .methods
            .iter()
            .any(|m| !matches!(m, Method::Qpe { .. }));
        if uses_rpe && self.epsilons.is_empty() {
            return Err(invalid("RPE methods need at least one epsilon"));
        }
        if let Some(e) = self.epsilons.iter().find(|e| !(e.is_finite() && **e > 0.0)) {
            return Err(invalid(format!("epsilon must be positive, got {e}")));
        }
        if let Some(p) = self.p0.iter().find(|p| !(**p > 0.0 && **p <= 1.0)) {
            return Err(invalid(format!("p0 must lie in (0, 1], got {p}")));
        }
        if self.p0.is_empty() && matches!(self.spectrum, SpectrumSource::Tfim { .. }) {
            return Err(invalid("a TFIM plan needs at least one p0"));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn toml_round_trip() {
        let text = r#"
            master_seed = 7
            trials = 10
            epsilons = [0.01, 0.001]
            p0 = [0.6, 0.8]
            residual = "uniform"
            delta = { value = 0.25 }

            [spectrum]
            kind = "tfim"
            sites = 4
            coupling = 2.0

            [[methods]]
            kind = "rpe"

            [[methods]]
            kind = "rpe_lowdepth"
            xi = [1.0, 0.3]

            [[methods]]
            kind = "qpe"
            ancilla = [4, 6]
        "#;
        let plan = ExperimentPlan::from_toml_str(text).unwrap();
        assert_eq!(plan.trials, 10);
        assert_eq!(plan.delta, DeltaPolicy::Value(0.25));
        assert_eq!(plan.residual, ResidualPolicy::Uniform);
        assert_eq!(
            plan.methods[2],
            Method::Qpe {
                ancilla: vec![4, 6],
                shots: 1
            }
        );
        assert_eq!(plan.eta, 0.1);
        plan.validate().unwrap();
        let again = ExperimentPlan::from_toml_str(&plan.to_toml_string().unwrap()).unwrap();
        assert_eq!(plan, again);
    }

    #[test]
    fn unknown_keys_are_rejected() {
        assert!(ExperimentPlan::from_toml_str("trails = 3").is_err());
    }

    #[test]
    #[allow(clippy::field_reassign_with_default)]
    fn validation_catches_bad_plans() {
        let mut p = ExperimentPlan::default();
        p.validate().unwrap();
        p.trials = 0;
        assert!(p.validate().is_err());
        let mut p = ExperimentPlan::default();
        p.eta = 1.0;
        assert!(p.validate().is_err());
        let mut p = ExperimentPlan::default();
        p.epsilons.clear();
        assert!(p.validate().is_err());
        p.methods = vec![Method::Qpe {
            ancilla: vec![4],
            shots: 1,
        }];
        p.validate().unwrap();
        let mut p = ExperimentPlan::default();
        p.p0 = vec![1.5];
        assert!(p.validate().is_err());
    }

    #[test]
    fn delta_policy() {
        assert!((DeltaPolicy::Margin(1.05).delta(0.8) - 0.21).abs() < 1e-15);
        assert_eq!(DeltaPolicy::Value(0.3).delta(0.9), 0.3);
    }
}
