use std::fmt;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::ensembles::{EnsembleSpec, GateEnsemble};
use crate::error::{Error, Result};
use crate::estimators::DEFAULT_B;
use crate::moments::Group;
use crate::state::DEFAULT_MAX_QUBITS;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentKind {
    Collision,
    Lxeb,
    Maxp,
    MomentValidation,
    Variance,
    CliffordUniformity,
    OrthogonalCollision,
}

impl ExperimentKind {
    pub fn needs_ensemble(self) -> bool {
        self != Self::MomentValidation
    }
}

impl fmt::Display for ExperimentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v = serde_json::to_value(self).map_err(|_| fmt::Error)?;
        f.write_str(v.as_str().unwrap_or("?"))
    }
}

/// Full-Haar moment validation settings. Each dimension draws `trials` matrices.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MomentSettings {
    pub group: Group,
    #[serde(default = "default_dims")]
    pub dims: Vec<u64>,
    #[serde(default = "default_orders")]
    pub orders: Vec<u32>,
    /// Also estimate the variance over matrices of `Var_x(p)`.
    #[serde(default)]
    pub variance_of_variance: bool,
}

fn default_dims() -> Vec<u64> {
    vec![2, 4, 8]
}

fn default_orders() -> Vec<u32> {
    vec![1, 2, 3, 4]
}

fn default_b() -> f64 {
    DEFAULT_B
}

fn default_max_qubits() -> usize {
    DEFAULT_MAX_QUBITS
}

/// Porter-Thomas histogram settings over `d·p` in `[0, max)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HistogramSettings {
    pub bins: usize,
    pub max: f64,
}

/// Contents of an experiment config file. Unknown keys are rejected.
///
/// `workers`, `report_path` and `trials_path` control execution only and are
/// left out of the report's config echo, so reports do not depend on them.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: ExperimentKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ensemble: Option<EnsembleSpec>,
    pub trials: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(default = "default_b")]
    pub b: f64,
    pub master_seed: u64,
    /// Deviation thresholds for the collision ladder, in units of `1/d`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta_ladder: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub moments: Option<MomentSettings>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub histogram: Option<HistogramSettings>,
    #[serde(default = "default_max_qubits")]
    pub max_qubits: usize,
    #[serde(default, skip_serializing)]
    pub workers: Option<usize>,
    #[serde(default, skip_serializing)]
    pub report_path: Option<PathBuf>,
    #[serde(default, skip_serializing)]
    pub trials_path: Option<PathBuf>,
}

impl ExperimentConfig {
    /// Minimal config for `kind` on `ensemble`.
    pub fn new(kind: ExperimentKind, ensemble: Option<EnsembleSpec>, trials: u64, master_seed: u64) -> Self {
        Self {
            experiment: kind,
            ensemble,
            trials,
            k: None,
            b: DEFAULT_B,
            master_seed,
            delta_ladder: None,
            moments: None,
            histogram: None,
            max_qubits: DEFAULT_MAX_QUBITS,
            workers: None,
            report_path: None,
            trials_path: None,
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: Self = serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Config(m));
        if self.trials == 0 {
            return bad("trials must be at least 1".into());
        }
        if !(self.b > 1.0 && self.b < 2.0) {
            return bad(format!("b = {} not in (1, 2)", self.b));
        }
        if self.experiment.needs_ensemble() {
            let Some(ens) = &self.ensemble else {
                return bad(format!("experiment {} needs an ensemble", self.experiment));
            };
            ens.validate().map_err(|e| Error::Config(e.to_string()))?;
        }
        match self.experiment {
            ExperimentKind::Lxeb if self.k.unwrap_or(0) == 0 => {
                return bad("lxeb experiments need k >= 1".into());
            }
            ExperimentKind::MomentValidation => {
                let Some(m) = &self.moments else {
                    return bad("moment-validation needs a \"moments\" section".into());
                };
                if m.dims.iter().any(|&d| !(2..=64).contains(&d)) {
                    return bad("moment dimensions must be in [2, 64]".into());
                }
                if m.orders.iter().any(|&t| t == 0 || t > 8) {
                    return bad("moment orders must be in [1, 8]".into());
                }
            }
            ExperimentKind::OrthogonalCollision => {
                if self.ensemble.as_ref().map(|e| e.kind) != Some(GateEnsemble::HaarOrthogonal) {
                    return bad("orthogonal-collision needs a haar-orthogonal ensemble".into());
                }
            }
            _ => {}
        }
        if let Some(h) = &self.histogram {
            if h.bins == 0 || !(h.max > 0.0) {
                return bad("histogram needs bins >= 1 and max > 0".into());
            }
        }
        if let Some(w) = self.workers {
            if w == 0 {
                return bad("workers must be at least 1".into());
            }
        }
        Ok(())
    }

    pub fn report_path(&self) -> PathBuf {
        self.report_path.clone().unwrap_or_else(|| "report.json".into())
    }

    pub fn trials_path(&self) -> PathBuf {
        self.trials_path.clone().unwrap_or_else(|| "trials.csv".into())
    }
}
