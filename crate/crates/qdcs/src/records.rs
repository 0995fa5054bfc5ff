//! JSON records for built states and bipartite pair specifications.
//!
//! Complex numbers are stored as `[re, im]` pairs so the files stay easy
//! to produce and inspect with ordinary JSON tooling. Parsers reject
//! unknown fields, non-finite numbers, and shape mismatches.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::algebra::Deformation;
use crate::entangle::BipartitePairSpec;
use crate::error::Error;
use crate::fock::FockVector;
use crate::states::{BuildMethod, BuiltState, DeformedStateSpec};

fn complex(pair: [f64; 2]) -> Complex64 {
    Complex64::new(pair[0], pair[1])
}

fn pair(z: Complex64) -> [f64; 2] {
    [z.re, z.im]
}

/// A built deformed state together with the parameters that produced it.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateRecord {
    pub alpha_re: f64,
    pub alpha_im: f64,
    pub eps: f64,
    pub dim: usize,
    pub method: BuildMethod,
    /// Fock amplitudes as `[re, im]` pairs, index `n` = occupation `n`.
    pub amp: Vec<[f64; 2]>,
}

impl StateRecord {
    pub fn from_built(spec: &DeformedStateSpec, built: &BuiltState) -> Self {
        Self {
            alpha_re: spec.alpha.re,
            alpha_im: spec.alpha.im,
            eps: spec.deformation.eps(),
            dim: spec.dim,
            method: spec.method,
            amp: built.vector.amplitudes().iter().map(|&z| pair(z)).collect(),
        }
    }

    pub fn alpha(&self) -> Complex64 {
        Complex64::new(self.alpha_re, self.alpha_im)
    }

    /// Rebuilds the stored amplitude vector.
    pub fn to_vector(&self) -> Result<FockVector, Error> {
        FockVector::from_amplitudes(self.amp.iter().map(|&p| complex(p)).collect())
    }

    /// Reconstructs the build parameters.
    pub fn to_spec(&self) -> Result<DeformedStateSpec, Error> {
        Ok(DeformedStateSpec {
            alpha: self.alpha(),
            deformation: Deformation::new(self.eps)?,
            dim: self.dim,
            method: self.method,
        })
    }

    fn validate(&self) -> Result<(), Error> {
        if !self.alpha_re.is_finite() || !self.alpha_im.is_finite() {
            return Err(Error::Parse("state record: label must be finite".into()));
        }
        if !self.eps.is_finite() {
            return Err(Error::Parse("state record: eps must be finite".into()));
        }
        if self.dim < 2 {
            return Err(Error::Parse(format!(
                "state record: dim must be at least 2, got {}",
                self.dim
            )));
        }
        if self.amp.len() != self.dim {
            return Err(Error::Parse(format!(
                "state record: expected {} amplitudes, got {}",
                self.dim,
                self.amp.len()
            )));
        }
        if self.amp.iter().flatten().any(|x| !x.is_finite()) {
            return Err(Error::Parse(
                "state record: amplitudes must be finite".into(),
            ));
        }
        Ok(())
    }
}

/// Parses and validates a state record from JSON text.
pub fn parse_state_record(text: &str) -> Result<StateRecord, Error> {
    let record: StateRecord = serde_json::from_str(text)?;
    record.validate()?;
    Ok(record)
}

/// A two-mode superposition specification: `μ|first⟩ + ν|second⟩` with
/// per-mode labels, as accepted by the `concurrence` subcommand.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairSpecRecord {
    pub mu: [f64; 2],
    pub nu: [f64; 2],
    /// Labels `(mode 1, mode 2)` of the first branch.
    pub first: [[f64; 2]; 2],
    /// Labels `(mode 1, mode 2)` of the second branch.
    pub second: [[f64; 2]; 2],
}

impl PairSpecRecord {
    pub fn from_spec(spec: &BipartitePairSpec) -> Self {
        Self {
            mu: pair(spec.mu),
            nu: pair(spec.nu),
            first: [pair(spec.first.0), pair(spec.first.1)],
            second: [pair(spec.second.0), pair(spec.second.1)],
        }
    }

    pub fn to_spec(&self) -> BipartitePairSpec {
        BipartitePairSpec {
            mu: complex(self.mu),
            nu: complex(self.nu),
            first: (complex(self.first[0]), complex(self.first[1])),
            second: (complex(self.second[0]), complex(self.second[1])),
        }
    }

    fn validate(&self) -> Result<(), Error> {
        let values = self
            .mu
            .iter()
            .chain(self.nu.iter())
            .chain(self.first.iter().flatten())
            .chain(self.second.iter().flatten());
        for x in values {
            if !x.is_finite() {
                return Err(Error::Parse("pair spec: all entries must be finite".into()));
            }
        }
        if complex(self.mu).norm() == 0.0 && complex(self.nu).norm() == 0.0 {
            return Err(Error::Parse(
                "pair spec: mu and nu must not both vanish".into(),
            ));
        }
        Ok(())
    }
}

/// Parses and validates a pair specification from JSON text.
pub fn parse_pair_spec(text: &str) -> Result<BipartitePairSpec, Error> {
    let record: PairSpecRecord = serde_json::from_str(text)?;
    record.validate()?;
    Ok(record.to_spec())
}
