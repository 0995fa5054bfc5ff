//! Deterministic parameter sweeps producing figure data as CSV.
//!
//! Three sweep kinds cover the standard figures: concurrence against the
//! label modulus `|α|` at fixed mixing angle, concurrence against the
//! mixing angle `θ` at fixed `|α|`, and the validity-region scan over the
//! `(|α|, ε)` plane. Rows are evaluated from the symmetric closed form
//! (see [`crate::entangle::concurrence_symmetric`]) in a fixed order, grid
//! points may be computed in parallel, and floats are rendered with 17
//! significant digits, so repeated runs emit byte-identical CSV.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::Deformation;
use crate::entangle::{concurrence_symmetric, validity_margin};
use crate::error::Error;

/// Default Fock-space dimension recorded in sweep specs.
pub const DEFAULT_DIM: usize = 64;

/// Default validity-margin cutoff for the `allowed` flag.
pub const DEFAULT_THRESHOLD: f64 = 0.1;

/// Default deformation strengths for the alpha and theta sweeps.
pub const DEFAULT_EPS_LIST: [f64; 3] = [-0.4, 0.0, 0.4];

/// Which grid a sweep walks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepKind {
    /// Concurrence vs `|α|` at fixed `θ`, one row group per ε.
    AlphaSweep,
    /// Concurrence vs `θ` at fixed `|α|`, one row group per ε.
    ThetaSweep,
    /// Margin and allowed flag over the `(|α|, ε)` plane at fixed `θ`.
    RegionScan,
}

/// Full description of one sweep run.
///
/// `alpha_range` and `theta_range` are `(min, max, steps)` triples; an
/// axis a sweep kind holds fixed uses the degenerate form `(x, x, 1)`. The
/// theta sweep reads its fixed `|α|` from `alpha_range.0`, and the region
/// scan uses `eps_list` as its ε axis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub kind: SweepKind,
    pub alpha_range: (f64, f64, usize),
    pub theta_range: (f64, f64, usize),
    pub eps_list: Vec<f64>,
    pub theta_fixed: f64,
    pub dim: usize,
    pub threshold: f64,
}

/// Evenly spaced grid `min + k·(max−min)/(steps−1)`.
pub fn linspace(min: f64, max: f64, steps: usize) -> Vec<f64> {
    if steps == 1 {
        return vec![min];
    }
    let step = (max - min) / (steps as f64 - 1.0);
    (0..steps).map(|k| min + k as f64 * step).collect()
}

impl SweepSpec {
    /// Concurrence vs `|α| ∈ [0, 2.5]` (51 points) at `θ = 0` for
    /// `ε ∈ {−0.4, 0, 0.4}`.
    pub fn alpha_default() -> Self {
        Self {
            kind: SweepKind::AlphaSweep,
            alpha_range: (0.0, 2.5, 51),
            theta_range: (0.0, 0.0, 1),
            eps_list: DEFAULT_EPS_LIST.to_vec(),
            theta_fixed: 0.0,
            dim: DEFAULT_DIM,
            threshold: DEFAULT_THRESHOLD,
        }
    }

    /// Concurrence vs `θ ∈ [0, 2π]` (201 points) at `|α| = 1` for
    /// `ε ∈ {−0.4, 0, 0.4}`.
    pub fn theta_default() -> Self {
        Self {
            kind: SweepKind::ThetaSweep,
            alpha_range: (1.0, 1.0, 1),
            theta_range: (0.0, 2.0 * std::f64::consts::PI, 201),
            eps_list: DEFAULT_EPS_LIST.to_vec(),
            theta_fixed: 0.0,
            dim: DEFAULT_DIM,
            threshold: DEFAULT_THRESHOLD,
        }
    }

    /// Validity region over `|α| ∈ [0, 2]` × `ε ∈ [−1, 1]`, 201×201, at
    /// `θ = 0`.
    pub fn region_default() -> Self {
        Self {
            kind: SweepKind::RegionScan,
            alpha_range: (0.0, 2.0, 201),
            theta_range: (0.0, 0.0, 1),
            eps_list: linspace(-1.0, 1.0, 201),
            theta_fixed: 0.0,
            dim: DEFAULT_DIM,
            threshold: DEFAULT_THRESHOLD,
        }
    }

    fn validate_range(name: &str, (min, max, steps): (f64, f64, usize)) -> Result<(), Error> {
        if !(min.is_finite() && max.is_finite()) {
            return Err(Error::InvalidSweep(format!("{name} bounds must be finite")));
        }
        if steps == 0 {
            return Err(Error::InvalidSweep(format!(
                "{name} needs at least one step"
            )));
        }
        if steps == 1 {
            if min != max {
                return Err(Error::InvalidSweep(format!(
                    "{name} with a single step must have min = max"
                )));
            }
            return Ok(());
        }
        if min >= max {
            return Err(Error::InvalidSweep(format!(
                "{name} must be ordered (min < max)"
            )));
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<(), Error> {
        Self::validate_range("alpha range", self.alpha_range)?;
        Self::validate_range("theta range", self.theta_range)?;
        if self.eps_list.is_empty() {
            return Err(Error::InvalidSweep("eps list must be non-empty".into()));
        }
        if self.eps_list.iter().any(|e| !e.is_finite()) {
            return Err(Error::InvalidSweep(
                "eps list entries must be finite".into(),
            ));
        }
        if !self.theta_fixed.is_finite() {
            return Err(Error::InvalidSweep("fixed theta must be finite".into()));
        }
        if !(self.threshold.is_finite() && self.threshold > 0.0) {
            return Err(Error::InvalidSweep("threshold must be positive".into()));
        }
        if self.dim < 2 {
            return Err(Error::InvalidSweep("dim must be at least 2".into()));
        }
        let active_axis_steps = match self.kind {
            SweepKind::AlphaSweep | SweepKind::RegionScan => self.alpha_range.2,
            SweepKind::ThetaSweep => self.theta_range.2,
        };
        if active_axis_steps < 2 {
            return Err(Error::InvalidSweep(
                "the swept axis needs at least two steps".into(),
            ));
        }
        if self.kind == SweepKind::RegionScan && self.eps_list.len() < 2 {
            return Err(Error::InvalidSweep(
                "a region scan needs at least two eps values".into(),
            ));
        }
        Ok(())
    }
}

/// One evaluated grid point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub alpha_abs: f64,
    pub theta: f64,
    pub eps: f64,
    pub concurrence: f64,
    pub margin: f64,
    pub allowed: bool,
}

/// The rows of one sweep run together with the spec that produced them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepTable {
    pub spec: SweepSpec,
    pub rows: Vec<SweepRow>,
}

fn evaluate_row(alpha_abs: f64, theta: f64, eps: f64, threshold: f64) -> SweepRow {
    let d = Deformation::new(eps).expect("sweep eps validated as finite");
    let value = concurrence_symmetric(alpha_abs, theta, d);
    let margin = validity_margin(alpha_abs, eps);
    SweepRow {
        alpha_abs,
        theta,
        eps,
        concurrence: value.c,
        margin,
        allowed: margin < threshold,
    }
}

fn evaluate_grid(
    outer: &[f64],
    inner: &[f64],
    threshold: f64,
    point: impl Fn(f64, f64) -> (f64, f64, f64) + Sync,
) -> Vec<SweepRow> {
    let n_inner = inner.len();
    (0..outer.len() * n_inner)
        .into_par_iter()
        .map(|idx| {
            let (a, t, e) = point(outer[idx / n_inner], inner[idx % n_inner]);
            evaluate_row(a, t, e, threshold)
        })
        .collect()
}

/// Concurrence vs `|α|` rows, `|α|` outer and ε inner.
pub fn run_alpha_sweep(spec: &SweepSpec) -> Result<SweepTable, Error> {
    spec.validate()?;
    if spec.kind != SweepKind::AlphaSweep {
        return Err(Error::InvalidSweep("spec kind is not alpha_sweep".into()));
    }
    let alphas = linspace(spec.alpha_range.0, spec.alpha_range.1, spec.alpha_range.2);
    let theta = spec.theta_fixed;
    let rows = evaluate_grid(&alphas, &spec.eps_list, spec.threshold, |a, e| {
        (a, theta, e)
    });
    Ok(SweepTable {
        spec: spec.clone(),
        rows,
    })
}

/// Concurrence vs `θ` rows at fixed `|α| = alpha_range.0`, `θ` outer and ε
/// inner.
pub fn run_theta_sweep(spec: &SweepSpec) -> Result<SweepTable, Error> {
    spec.validate()?;
    if spec.kind != SweepKind::ThetaSweep {
        return Err(Error::InvalidSweep("spec kind is not theta_sweep".into()));
    }
    let thetas = linspace(spec.theta_range.0, spec.theta_range.1, spec.theta_range.2);
    let alpha_abs = spec.alpha_range.0;
    let rows = evaluate_grid(&thetas, &spec.eps_list, spec.threshold, |t, e| {
        (alpha_abs, t, e)
    });
    Ok(SweepTable {
        spec: spec.clone(),
        rows,
    })
}

/// Validity-region rows over `(|α|, ε)` at fixed `θ`, `|α|` outer and ε
/// inner.
pub fn run_region_scan(spec: &SweepSpec) -> Result<SweepTable, Error> {
    spec.validate()?;
    if spec.kind != SweepKind::RegionScan {
        return Err(Error::InvalidSweep("spec kind is not region_scan".into()));
    }
    let alphas = linspace(spec.alpha_range.0, spec.alpha_range.1, spec.alpha_range.2);
    let theta = spec.theta_fixed;
    let rows = evaluate_grid(&alphas, &spec.eps_list, spec.threshold, |a, e| {
        (a, theta, e)
    });
    Ok(SweepTable {
        spec: spec.clone(),
        rows,
    })
}

/// Runs whichever sweep the spec's kind selects.
pub fn run_sweep(spec: &SweepSpec) -> Result<SweepTable, Error> {
    match spec.kind {
        SweepKind::AlphaSweep => run_alpha_sweep(spec),
        SweepKind::ThetaSweep => run_theta_sweep(spec),
        SweepKind::RegionScan => run_region_scan(spec),
    }
}

/// Percent decrease of the symmetric concurrence between two deformation
/// strengths: `100·(𝒞(ε_lo) − 𝒞(ε_hi))/𝒞(ε_lo)`.
pub fn percent_decrease(
    alpha_abs: f64,
    theta: f64,
    eps_lo: f64,
    eps_hi: f64,
) -> Result<f64, Error> {
    if !(eps_lo.is_finite() && eps_hi.is_finite() && eps_lo < eps_hi) {
        return Err(Error::InvalidParameter(format!(
            "need finite eps_lo < eps_hi, got {eps_lo} and {eps_hi}"
        )));
    }
    let c_lo = concurrence_symmetric(alpha_abs, theta, Deformation::new(eps_lo)?).c;
    let c_hi = concurrence_symmetric(alpha_abs, theta, Deformation::new(eps_hi)?).c;
    if c_lo == 0.0 {
        return Err(Error::InvalidParameter(
            "reference concurrence is zero; percent decrease undefined".into(),
        ));
    }
    Ok(100.0 * (c_lo - c_hi) / c_lo)
}

/// Renders a float with 17 significant digits in scientific notation, the
/// fixed format behind byte-identical CSV goldens.
pub fn format_float(x: f64) -> String {
    // Map −0.0 to +0.0 so the sign of a zero never depends on the
    // arithmetic path that produced it.
    format!("{:.16e}", x + 0.0)
}

/// Serializes a sweep table as CSV with the fixed schema
/// `alpha_abs,theta,eps,concurrence,margin,allowed`.
pub fn to_csv(table: &SweepTable) -> String {
    let mut out = String::with_capacity(64 * (table.rows.len() + 1));
    out.push_str("alpha_abs,theta,eps,concurrence,margin,allowed\n");
    for row in &table.rows {
        out.push_str(&format_float(row.alpha_abs));
        out.push(',');
        out.push_str(&format_float(row.theta));
        out.push(',');
        out.push_str(&format_float(row.eps));
        out.push(',');
        out.push_str(&format_float(row.concurrence));
        out.push(',');
        out.push_str(&format_float(row.margin));
        out.push(',');
        out.push_str(if row.allowed { "true" } else { "false" });
        out.push('\n');
    }
    out
}
