//! The JSON run manifest.

use crate::error::{HarnessError, Result};
use crate::formats::read_large_scale;
use sapgm_core::problems::{build_problem, canonical_name, DEFAULT_EPS_HAT, PROBLEM_NAMES};
use sapgm_core::{ProblemParams, ProblemSpec, SolverConfig};
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};
use std::sync::Arc;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum SolverKind {
    /// Smoothing on.
    Sapgm,
    /// Smoothing off; smooth problems only.
    Fpga,
}

impl SolverKind {
    pub fn label(self) -> &'static str {
        match self {
            Self::Sapgm => "sapgm",
            Self::Fpga => "fpga",
        }
    }
}

/// Problem construction parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ProblemSection {
    /// Dimension of JOS1.
    pub n: usize,
    pub m_rows: usize,
    pub large_n: usize,
    pub spar: f64,
    pub data_seed: u64,
    pub epsilon_hat: f64,
    pub l1_in_prox: bool,
    /// Large-scale data written by `sapgm gen`; replaces the generator fields.
    pub data_file: Option<PathBuf>,
}

impl Default for ProblemSection {
    fn default() -> Self {
        let p = ProblemParams::default();
        Self {
            n: p.n,
            m_rows: p.m_rows,
            large_n: p.large_n,
            spar: p.spar,
            data_seed: p.seed,
            epsilon_hat: DEFAULT_EPS_HAT,
            l1_in_prox: p.l1_in_prox,
            data_file: None,
        }
    }
}

/// Solver parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ConfigSection {
    pub alpha: f64,
    pub sigma: f64,
    pub mu0: f64,
    pub gamma0: f64,
    pub eta: f64,
    pub eps: f64,
    pub max_iter: usize,
    pub fw_iters: usize,
    pub fw_tol: f64,
    pub paper_literal_backtrack: bool,
}

impl Default for ConfigSection {
    fn default() -> Self {
        let c = SolverConfig::default();
        Self {
            alpha: c.alpha,
            sigma: c.sigma,
            mu0: c.mu0,
            gamma0: c.gamma0,
            eta: c.eta,
            eps: c.eps,
            max_iter: c.max_iter,
            fw_iters: c.fw_iters,
            fw_tol: c.fw_tol,
            paper_literal_backtrack: c.paper_literal_backtrack,
        }
    }
}

/// Everything a `run` needs; determines every byte of `runs.csv` and `front.csv`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunManifest {
    pub problem: String,
    pub solver: SolverKind,
    pub starts: usize,
    /// Seed of the start sampler.
    pub seed: u64,
    pub params: ProblemSection,
    pub config: ConfigSection,
    /// Write `trace.csv`.
    pub trace: bool,
    pub out: Option<PathBuf>,
}

impl Default for RunManifest {
    fn default() -> Self {
        Self {
            problem: String::new(),
            solver: SolverKind::Sapgm,
            starts: 200,
            seed: 0,
            params: ProblemSection::default(),
            config: ConfigSection::default(),
            trace: false,
            out: None,
        }
    }
}

impl RunManifest {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| HarnessError::usage(format!("manifest: {e}")))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| HarnessError::file(path, e.to_string()))?;
        serde_json::from_str(&text).map_err(|e| HarnessError::usage(format!("{}: {e}", path.display())))
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)? + "\n")
    }

    /// Rejects unknown problems, nonsmooth problems under `fpga` and invalid
    /// solver parameters.
    pub fn validate(&self) -> Result<()> {
        let name = canonical_name(&self.problem);
        if !PROBLEM_NAMES.contains(&name.as_str()) {
            return Err(HarnessError::usage(format!(
                "unknown problem '{}'; expected one of {}",
                self.problem,
                PROBLEM_NAMES.join(", ")
            )));
        }
        if self.solver == SolverKind::Fpga && (name.ends_with("_l1") || !["jos1", "bk1", "sp1"].contains(&name.as_str())) {
            return Err(HarnessError::usage(format!("fpga needs a smooth problem, '{}' is nonsmooth", self.problem)));
        }
        self.solver_config().validate().map_err(|e| HarnessError::usage(e.to_string()))
    }

    pub fn solver_config(&self) -> SolverConfig {
        let c = &self.config;
        SolverConfig {
            alpha: c.alpha,
            sigma: c.sigma,
            mu0: c.mu0,
            gamma0: c.gamma0,
            eta: c.eta,
            eps: c.eps,
            max_iter: c.max_iter,
            fw_iters: c.fw_iters,
            fw_tol: c.fw_tol,
            smoothing_enabled: self.solver == SolverKind::Sapgm,
            paper_literal_backtrack: c.paper_literal_backtrack,
            full_trace: false,
        }
    }

    pub fn problem_params(&self) -> Result<ProblemParams> {
        let p = &self.params;
        let data = match &p.data_file {
            Some(path) => Some(Arc::new(read_large_scale(path)?)),
            None => None,
        };
        Ok(ProblemParams {
            n: p.n,
            m_rows: p.m_rows,
            large_n: p.large_n,
            spar: p.spar,
            seed: p.data_seed,
            epsilon_hat: p.epsilon_hat,
            l1_in_prox: p.l1_in_prox,
            data,
        })
    }

    pub fn build_problem(&self) -> Result<ProblemSpec> {
        Ok(build_problem(&self.problem, &self.problem_params()?)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_object_takes_defaults() {
        let m = RunManifest::from_json("{\"problem\": \"CR&MF2\"}").unwrap();
        assert_eq!(m.starts, 200);
        assert_eq!(m.solver_config(), SolverConfig::default());
        m.validate().unwrap();
    }

    #[test]
    fn json_round_trip() {
        let m = RunManifest { problem: "jos1".into(), solver: SolverKind::Fpga, starts: 7, ..RunManifest::default() };
        assert_eq!(RunManifest::from_json(&m.to_json().unwrap()).unwrap(), m);
    }

    #[test]
    fn bad_names_are_usage_errors() {
        let m = RunManifest { problem: "zdt1".into(), ..RunManifest::default() };
        assert!(matches!(m.validate(), Err(HarnessError::Usage(_))));
        assert!(matches!(RunManifest::from_json("{\"solver\": \"newton\"}"), Err(HarnessError::Usage(_))));
        assert!(matches!(RunManifest::from_json("{\"startz\": 3}"), Err(HarnessError::Usage(_))));
        let m = RunManifest { problem: "jos1_l1".into(), solver: SolverKind::Fpga, ..RunManifest::default() };
        assert!(matches!(m.validate(), Err(HarnessError::Usage(_))));
    }

    #[test]
    fn invalid_parameters_are_rejected() {
        let mut m = RunManifest { problem: "jos1".into(), ..RunManifest::default() };
        m.config.alpha = 2.0;
        assert!(m.validate().is_err());
    }
}
