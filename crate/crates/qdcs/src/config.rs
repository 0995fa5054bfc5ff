//! TOML run configuration.
//!
//! Every command-line flag has a counterpart here; values given on the
//! command line take precedence over the file, which takes precedence
//! over built-in defaults. All fields are optional so a file may set
//! only what it cares about.

use std::path::PathBuf;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Error;

/// Which construction the `state` subcommand runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MethodChoice {
    Perturbative,
    Numeric,
    /// Run both constructions and report their difference.
    Both,
}

impl FromStr for MethodChoice {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "perturbative" => Ok(Self::Perturbative),
            "numeric" => Ok(Self::Numeric),
            "both" => Ok(Self::Both),
            other => Err(Error::Parse(format!(
                "unknown method {other:?}, expected perturbative, numeric, or both"
            ))),
        }
    }
}

impl std::fmt::Display for MethodChoice {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Self::Perturbative => "perturbative",
            Self::Numeric => "numeric",
            Self::Both => "both",
        })
    }
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    /// Validity-margin threshold shared by all subcommands.
    pub threshold: Option<f64>,
    /// Accepted for interface stability; the pipeline is deterministic.
    pub seedless: Option<bool>,
    pub state: StateSection,
    pub overlap: OverlapSection,
    pub concurrence: ConcurrenceSection,
    pub sweep: SweepSection,
    pub verify: VerifySection,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct StateSection {
    pub alpha_re: Option<f64>,
    pub alpha_im: Option<f64>,
    pub eps: Option<f64>,
    pub dim: Option<usize>,
    /// One of `perturbative`, `numeric`, `both`.
    pub method: Option<String>,
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OverlapSection {
    pub a_re: Option<f64>,
    pub a_im: Option<f64>,
    pub b_re: Option<f64>,
    pub b_im: Option<f64>,
    pub eps: Option<f64>,
    /// One of `dd`, `dn`, `nd`, `std`.
    pub kind: Option<String>,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ConcurrenceSection {
    /// Path to a pair-specification JSON file.
    pub spec: Option<PathBuf>,
    /// Use the built-in exchange superposition family.
    pub psi2: Option<bool>,
    pub alpha: Option<f64>,
    pub theta: Option<f64>,
    pub eps: Option<f64>,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepSection {
    pub dim: Option<usize>,
    pub out: Option<PathBuf>,
    pub alpha: AlphaSweepSection,
    pub theta: ThetaSweepSection,
    pub region: RegionSweepSection,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AlphaSweepSection {
    pub min: Option<f64>,
    pub max: Option<f64>,
    pub steps: Option<usize>,
    pub theta: Option<f64>,
    pub eps_list: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ThetaSweepSection {
    pub alpha: Option<f64>,
    pub min: Option<f64>,
    pub max: Option<f64>,
    pub steps: Option<usize>,
    pub eps_list: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RegionSweepSection {
    pub alpha_min: Option<f64>,
    pub alpha_max: Option<f64>,
    pub alpha_steps: Option<usize>,
    pub eps_min: Option<f64>,
    pub eps_max: Option<f64>,
    pub eps_steps: Option<usize>,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct VerifySection {
    pub dim: Option<usize>,
    pub eps_grid: Option<Vec<f64>>,
    pub report: Option<PathBuf>,
}

impl RunConfig {
    fn validate(&self) -> Result<(), Error> {
        let floats: [(&str, Option<f64>); 21] = [
            ("threshold", self.threshold),
            ("state.alpha_re", self.state.alpha_re),
            ("state.alpha_im", self.state.alpha_im),
            ("state.eps", self.state.eps),
            ("overlap.a_re", self.overlap.a_re),
            ("overlap.a_im", self.overlap.a_im),
            ("overlap.b_re", self.overlap.b_re),
            ("overlap.b_im", self.overlap.b_im),
            ("overlap.eps", self.overlap.eps),
            ("concurrence.alpha", self.concurrence.alpha),
            ("concurrence.theta", self.concurrence.theta),
            ("concurrence.eps", self.concurrence.eps),
            ("sweep.alpha.min", self.sweep.alpha.min),
            ("sweep.alpha.max", self.sweep.alpha.max),
            ("sweep.alpha.theta", self.sweep.alpha.theta),
            ("sweep.theta.alpha", self.sweep.theta.alpha),
            ("sweep.theta.min", self.sweep.theta.min),
            ("sweep.theta.max", self.sweep.theta.max),
            ("sweep.region.alpha_min", self.sweep.region.alpha_min),
            ("sweep.region.alpha_max", self.sweep.region.alpha_max),
            ("sweep.region.eps_min", self.sweep.region.eps_min),
        ];
        for (name, value) in floats {
            if let Some(x) = value {
                if !x.is_finite() {
                    return Err(Error::Parse(format!("config: {name} must be finite")));
                }
            }
        }
        if let Some(x) = self.sweep.region.eps_max {
            if !x.is_finite() {
                return Err(Error::Parse(
                    "config: sweep.region.eps_max must be finite".into(),
                ));
            }
        }
        for (name, list) in [
            ("sweep.alpha.eps_list", &self.sweep.alpha.eps_list),
            ("sweep.theta.eps_list", &self.sweep.theta.eps_list),
            ("verify.eps_grid", &self.verify.eps_grid),
        ] {
            if let Some(values) = list {
                if values.iter().any(|x| !x.is_finite()) {
                    return Err(Error::Parse(format!("config: {name} must be finite")));
                }
            }
        }
        if let Some(method) = &self.state.method {
            MethodChoice::from_str(method)?;
        }
        if let Some(kind) = &self.overlap.kind {
            crate::states::OverlapKind::from_str(kind)?;
        }
        Ok(())
    }
}

/// Parses and validates a TOML run configuration.
pub fn parse_config(text: &str) -> Result<RunConfig, Error> {
    let config: RunConfig =
        toml::from_str(text).map_err(|e| Error::Parse(format!("config: {e}")))?;
    config.validate()?;
    Ok(config)
}

/// Reads and parses a configuration file.
pub fn load_config(path: &std::path::Path) -> Result<RunConfig, Error> {
    parse_config(&std::fs::read_to_string(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn full_config_parses_with_every_section() {
        let text = r#"
threshold = 0.2
seedless = true

[state]
alpha_re = 1.0
alpha_im = -0.5
eps = 0.1
dim = 48
method = "both"
out = "state.json"

[overlap]
a_re = 1.0
a_im = 0.0
b_re = -1.0
b_im = 0.0
eps = 0.1
kind = "dd"

[concurrence]
psi2 = true
alpha = 1.0
theta = 3.14159
eps = 0.4

[sweep]
dim = 32
out = "rows.csv"

[sweep.alpha]
min = 0.0
max = 2.5
steps = 51
theta = 0.0
eps_list = [-0.4, 0.0, 0.4]

[sweep.theta]
alpha = 1.0
min = 0.0
max = 6.283185307179586
steps = 201

[sweep.region]
alpha_min = 0.0
alpha_max = 2.0
alpha_steps = 201
eps_min = -1.0
eps_max = 1.0
eps_steps = 201

[verify]
dim = 64
eps_grid = [0.2, 0.1, 0.05]
report = "report.json"
"#;
        let config = parse_config(text).unwrap();
        assert_eq!(config.threshold, Some(0.2));
        assert_eq!(config.state.dim, Some(48));
        assert_eq!(config.state.method.as_deref(), Some("both"));
        assert_eq!(config.sweep.alpha.eps_list, Some(vec![-0.4, 0.0, 0.4]));
        assert_eq!(config.sweep.region.eps_steps, Some(201));
        assert_eq!(config.verify.eps_grid, Some(vec![0.2, 0.1, 0.05]));
    }

    #[test]
    fn empty_config_is_all_defaults() {
        let config = parse_config("").unwrap();
        assert!(config.threshold.is_none());
        assert!(config.state.alpha_re.is_none());
        assert!(config.verify.eps_grid.is_none());
    }

    #[test]
    fn defective_configs_are_rejected() {
        assert!(parse_config("not = { valid").is_err());
        assert!(parse_config("unknown_key = 1").is_err());
        assert!(parse_config("[state]\nmystery = 2").is_err());
        assert!(parse_config("[state]\neps = inf").is_err());
        assert!(parse_config("[state]\nmethod = \"euler\"").is_err());
        assert!(parse_config("[overlap]\nkind = \"xx\"").is_err());
        assert!(parse_config("[verify]\neps_grid = [0.1, nan]").is_err());
    }

    #[test]
    fn method_choice_tokens_round_trip() {
        for token in ["perturbative", "numeric", "both"] {
            let parsed = MethodChoice::from_str(token).unwrap();
            assert_eq!(parsed.to_string(), token);
        }
        assert!(MethodChoice::from_str("exact").is_err());
    }
}
