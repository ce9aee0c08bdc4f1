//! JSON experiment configuration.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::functions::{lookup, TestFunction};
use crate::domain::DomainConfig;
use crate::error::{Error, Result};
use crate::kfunctional::LambdaGrid;
use crate::norms::FracParams;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    WhitneyProps,
    PouProps,
    Lemma21,
    Remark22,
    Lemma31,
    Kfunc,
    Theorem11,
    Bbm,
}

impl Suite {
    pub const ALL: [Suite; 8] = [
        Suite::WhitneyProps,
        Suite::PouProps,
        Suite::Lemma21,
        Suite::Remark22,
        Suite::Lemma31,
        Suite::Kfunc,
        Suite::Theorem11,
        Suite::Bbm,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::WhitneyProps => "whitney-props",
            Suite::PouProps => "pou-props",
            Suite::Lemma21 => "lemma21",
            Suite::Remark22 => "remark22",
            Suite::Lemma31 => "lemma31",
            Suite::Kfunc => "kfunc",
            Suite::Theorem11 => "theorem11",
            Suite::Bbm => "bbm",
        }
    }
}

fn default_s() -> Vec<f64> {
    vec![0.5]
}
fn default_p() -> Vec<f64> {
    vec![2.0]
}
fn default_alpha() -> Vec<f64> {
    vec![0.0]
}
fn default_tau() -> Vec<f64> {
    vec![0.25, 0.5, 0.75]
}
fn default_refinement() -> Vec<f64> {
    vec![1.0, 0.5, 0.3, 0.1]
}
fn default_pou() -> Vec<f64> {
    vec![1.0, 0.5, 0.25]
}
fn default_constructive() -> Vec<f64> {
    vec![0.5, 0.25, 0.125]
}
fn default_bbm_s() -> Vec<f64> {
    vec![0.8, 0.9, 0.95]
}
fn default_seed() -> u64 {
    42
}
fn default_triples() -> usize {
    100
}
fn default_coupling() -> f64 {
    1.0
}
fn default_scan() -> usize {
    24
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub domain: DomainConfig,
    /// Resolutions for refinement studies; defaults to the domain resolution
    /// alone. Stability checks compare consecutive entries.
    #[serde(default)]
    pub resolutions: Vec<usize>,
    #[serde(default = "default_s")]
    pub s: Vec<f64>,
    #[serde(default = "default_p")]
    pub p: Vec<f64>,
    #[serde(default = "default_alpha")]
    pub alpha: Vec<f64>,
    #[serde(default = "default_tau")]
    pub tau: Vec<f64>,
    pub functions: Vec<String>,
    #[serde(default)]
    pub lambda_grid: LambdaGrid,
    #[serde(default = "default_refinement")]
    pub refinement_lambdas: Vec<f64>,
    #[serde(default = "default_pou")]
    pub pou_lambdas: Vec<f64>,
    #[serde(default = "default_constructive")]
    pub constructive_lambdas: Vec<f64>,
    /// `λ' = coupling·λ` refinement parameter for the constructive decomposition
    #[serde(default = "default_coupling")]
    pub coupling: f64,
    #[serde(default = "default_bbm_s")]
    pub bbm_s: Vec<f64>,
    /// Weight exponent of the restricted seminorm in the limit diagnostic.
    #[serde(default)]
    pub bbm_beta: f64,
    #[serde(default = "default_triples")]
    pub triples: usize,
    #[serde(default = "default_seed")]
    pub seed: u64,
    /// Lattice points per axis in the partition-of-unity gradient scan.
    #[serde(default = "default_scan")]
    pub gradient_scan: usize,
    #[serde(default)]
    pub out_dir: Option<PathBuf>,
    #[serde(default)]
    pub suites: Vec<Suite>,
    #[serde(default)]
    pub parallel: bool,
}

fn field(name: &str, reason: impl std::fmt::Display) -> Error {
    Error::Config(format!("field `{name}`: {reason}"))
}

fn nonempty<T>(name: &str, v: &[T]) -> Result<()> {
    if v.is_empty() {
        Err(field(name, "must not be empty"))
    } else {
        Ok(())
    }
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: Self = serde_json::from_str(text).map_err(|e| {
            Error::Config(format!("line {}, column {}: {e}", e.line(), e.column()))
        })?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_json(&text).map_err(|e| match e {
            Error::Config(m) => Error::Config(format!("{}: {m}", path.display())),
            other => other,
        })
    }

    pub fn validate(&self) -> Result<()> {
        self.domain.spec.validate()?;
        if self.domain.resolution < 8 || self.resolutions.iter().any(|&r| r < 8) {
            return Err(field("resolution", "must be at least 8"));
        }
        if self.functions.is_empty() {
            return Err(Error::NoFunctionsSelected);
        }
        for id in &self.functions {
            lookup(id)?;
        }
        for (name, v) in [("s", &self.s), ("p", &self.p), ("alpha", &self.alpha), ("tau", &self.tau)] {
            nonempty(name, v)?;
        }
        for &s in &self.s {
            for &p in &self.p {
                for &a in &self.alpha {
                    for &t in &self.tau {
                        FracParams::matched(s, p, a)
                            .and_then(|x| x.with_tau(t))
                            .map_err(|e| field("s/p/alpha/tau", e))?;
                    }
                }
            }
        }
        for (name, v) in [
            ("refinement_lambdas", &self.refinement_lambdas),
            ("pou_lambdas", &self.pou_lambdas),
            ("constructive_lambdas", &self.constructive_lambdas),
        ] {
            if v.iter().any(|&l| !(l > 0.0 && l <= 1.0)) {
                return Err(field(name, "every λ must lie in (0,1]"));
            }
        }
        if self.bbm_s.iter().any(|&s| !(s > 0.0 && s < 1.0)) {
            return Err(field("bbm_s", "every s must lie in (0,1)"));
        }
        if !(self.bbm_beta.is_finite() && self.bbm_beta >= 0.0) {
            return Err(field("bbm_beta", "must be nonnegative"));
        }
        if !(self.coupling > 0.0 && self.coupling.is_finite()) {
            return Err(field("coupling", "must be positive"));
        }
        if self.lambda_grid.points < 2 {
            return Err(field("lambda_grid.points", "must be at least 2"));
        }
        if self.gradient_scan == 0 {
            return Err(field("gradient_scan", "must be positive"));
        }
        Ok(())
    }

    pub fn resolutions(&self) -> Vec<usize> {
        if self.resolutions.is_empty() {
            vec![self.domain.resolution]
        } else {
            self.resolutions.clone()
        }
    }

    pub fn test_functions(&self) -> Result<Vec<TestFunction>> {
        self.functions.iter().map(|id| lookup(id)).collect()
    }

    pub fn selected_suites(&self) -> Vec<Suite> {
        if self.suites.is_empty() {
            Suite::ALL.to_vec()
        } else {
            self.suites.clone()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"{"domain": {"kind": "unit_square", "resolution": 16}, "functions": ["linear"]}"#;

    #[test]
    fn defaults_fill_in() {
        let cfg = ExperimentConfig::from_json(MINIMAL).unwrap();
        assert_eq!(cfg.seed, 42);
        assert_eq!(cfg.resolutions(), vec![16]);
        assert_eq!(cfg.selected_suites().len(), 8);
        assert_eq!(cfg.lambda_grid.points, 32);
    }

    #[test]
    fn empty_function_list_is_rejected() {
        let text = r#"{"domain": {"kind": "unit_square", "resolution": 16}, "functions": []}"#;
        let err = ExperimentConfig::from_json(text).unwrap_err();
        assert_eq!(err.to_string(), "no functions selected");
    }

    #[test]
    fn errors_name_the_line_or_field() {
        let text = "{\n \"domain\": {\"kind\": \"unit_square\", \"resolution\": 16},\n \"functions\": [\"linear\"],\n \"sss\": 1\n}";
        let err = ExperimentConfig::from_json(text).unwrap_err().to_string();
        assert!(err.contains("line 4"), "{err}");
        let text = r#"{"domain": {"kind": "unit_square", "resolution": 16}, "functions": ["linear"], "tau": [1.5]}"#;
        let err = ExperimentConfig::from_json(text).unwrap_err().to_string();
        assert!(err.contains("tau"), "{err}");
        let text = r#"{"domain": {"kind": "unit_square", "resolution": 16}, "functions": ["nope"]}"#;
        assert!(matches!(ExperimentConfig::from_json(text), Err(Error::UnknownFunction(_))));
    }

    #[test]
    fn suites_parse_by_name() {
        let text = r#"{"domain": {"kind": "power_cusp", "gamma": 2.0, "resolution": 64}, "functions": ["linear"], "suites": ["whitney-props", "lemma31"]}"#;
        let cfg = ExperimentConfig::from_json(text).unwrap();
        assert_eq!(cfg.suites, vec![Suite::WhitneyProps, Suite::Lemma31]);
    }
}
