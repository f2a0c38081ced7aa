use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{FloerError, Result};
use crate::floer_function::FunctionCheckOptions;
use crate::floer_map::AxiomOptions;
use crate::sobolev_evidence::HolderOptions;

/// Environment variable holding the number of worker threads.
pub const WORKERS_ENV: &str = "FLOERLAB_WORKERS";

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    FloerFunction,
    FloerMap,
    LoopAtlas,
    Pullback,
    SobolevEvidence,
}

impl Suite {
    pub const ALL: [Suite; 5] =
        [Suite::FloerFunction, Suite::FloerMap, Suite::LoopAtlas, Suite::Pullback, Suite::SobolevEvidence];

    pub fn name(self) -> &'static str {
        match self {
            Suite::FloerFunction => "floer_function",
            Suite::FloerMap => "floer_map",
            Suite::LoopAtlas => "loop_atlas",
            Suite::Pullback => "pullback",
            Suite::SobolevEvidence => "sobolev_evidence",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    pub grad: f64,
    pub hess: f64,
    pub symmetry: f64,
    pub consistency: f64,
    /// First truncation of the stabilization window.
    pub stabilize_from: usize,
    /// Relative band for bounded sweeps.
    pub rel_tol: f64,
    pub fredholm_gap: f64,
    pub holder: f64,
    pub derivative: f64,
    pub cocycle: f64,
    pub leibniz_slope: f64,
    pub leibniz_slack: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            grad: 1e-7,
            hess: 1e-6,
            symmetry: 1e-10,
            consistency: 1e-6,
            stabilize_from: 64,
            rel_tol: 0.05,
            fredholm_gap: 0.02,
            holder: 0.1,
            derivative: 1e-4,
            cocycle: 1e-10,
            leibniz_slope: 2.0,
            leibniz_slack: 0.2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    #[serde(rename = "N")]
    pub n: Vec<usize>,
    pub s: Vec<f64>,
    pub seed: u64,
    /// Random base loops per suite.
    pub samples: usize,
    /// Overlap loops per chart pair in the atlas suite.
    pub atlas_loops: usize,
    /// Largest truncation used by the transitivity locality sweep.
    pub transitivity_max_n: usize,
    pub suites: Vec<Suite>,
    pub negative_controls: bool,
    pub tolerances: Tolerances,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            n: crate::sweep::DEFAULT_SWEEP.to_vec(),
            s: vec![0.75],
            seed: 0,
            samples: 2,
            atlas_loops: 1,
            transitivity_max_n: 64,
            suites: Suite::ALL.to_vec(),
            negative_controls: false,
            tolerances: Tolerances::default(),
            out: None,
        }
    }
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: RunConfig = serde_json::from_str(text).map_err(|e| FloerError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| FloerError::Config(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(FloerError::Config(m));
        if self.n.is_empty() {
            return bad("empty N list".into());
        }
        if let Some(n) = self.n.iter().find(|n| !n.is_power_of_two() || !(16..=512).contains(*n)) {
            return bad(format!("N = {n} is not a power of two in [16, 512]"));
        }
        if self.n.windows(2).any(|w| w[0] >= w[1]) {
            return bad("N list must be strictly increasing".into());
        }
        if self.s.is_empty() {
            return bad("empty s list".into());
        }
        if let Some(s) = self.s.iter().find(|s| !(**s > 0.5 && **s < 1.0)) {
            return bad(format!("s = {s} outside (1/2, 1)"));
        }
        if self.samples == 0 || self.atlas_loops == 0 {
            return bad("samples and atlas_loops must be positive".into());
        }
        if !self.transitivity_max_n.is_power_of_two() || self.transitivity_max_n < 16 {
            return bad(format!("transitivity_max_n = {} is not a power of two ≥ 16", self.transitivity_max_n));
        }
        if self.suites.is_empty() {
            return bad("no suites selected".into());
        }
        let t = &self.tolerances;
        let positive = [
            t.grad,
            t.hess,
            t.symmetry,
            t.consistency,
            t.rel_tol,
            t.fredholm_gap,
            t.holder,
            t.derivative,
            t.cocycle,
            t.leibniz_slack,
        ];
        if positive.iter().any(|v| !(v.is_finite() && *v > 0.0)) {
            return bad("tolerances must be positive and finite".into());
        }
        Ok(())
    }

    /// Selected suites, deduplicated and ordered by name.
    pub fn suite_list(&self) -> Vec<Suite> {
        let mut v = self.suites.clone();
        v.sort();
        v.dedup();
        v
    }

    pub fn function_options(&self) -> FunctionCheckOptions {
        let t = &self.tolerances;
        FunctionCheckOptions {
            grad_tol: t.grad,
            hess_tol: t.hess,
            symmetry_tol: t.symmetry,
            consistency_tol: t.consistency,
            sweep: self.n.clone(),
            stabilize_from: t.stabilize_from,
            rel_tol: t.rel_tol,
            gap_tol: t.fredholm_gap,
            seed: self.seed,
            ..FunctionCheckOptions::default()
        }
    }

    pub fn axiom_options(&self) -> AxiomOptions {
        AxiomOptions {
            sweep: self.n.clone(),
            stabilize_from: self.tolerances.stabilize_from,
            rel_tol: self.tolerances.rel_tol,
            derivative_tol: self.tolerances.derivative,
            seed: self.seed,
            ..AxiomOptions::default()
        }
    }

    pub fn holder_options(&self) -> HolderOptions {
        HolderOptions {
            sweep: self.n.clone(),
            stabilize_from: self.tolerances.stabilize_from,
            rel_tol: self.tolerances.holder,
            seed: self.seed,
            ..HolderOptions::default()
        }
    }
}

/// Worker count from [`WORKERS_ENV`]; `None` when unset.
pub fn workers_from_env() -> Result<Option<usize>> {
    match std::env::var(WORKERS_ENV) {
        Err(_) => Ok(None),
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(FloerError::Config(format!("{WORKERS_ENV}={v:?} is not a positive integer"))),
        },
    }
}
