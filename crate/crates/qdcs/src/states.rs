//! Deformed coherent states and their overlaps.
//!
//! A deformed coherent state with label `α` is built two independent ways:
//!
//! - **perturbative**: the first-order closed form
//!   `(I + εK_α)|α⟩` with
//!   `K_α = (|α|⁴/24)·I − (|α|²/6)·α·a† + (α²/8)·a†²`
//!   applied to the ordinary coherent state `|α⟩`. The vector is kept
//!   unnormalized; its squared norm deviates from 1 by exactly
//!   `ε²(|α|⁶/144 + |α|⁴/32)` plus truncation noise.
//! - **numeric**: the exponential of the deformed displacement generator,
//!   `exp(αb† − ᾱb)|0⟩`, evaluated with the dense matrix exponential.
//!
//! The two differ by `O(ε²)`, which the verification suite pins down via
//! `ε`-halving ratios.
//!
//! Overlaps come in four variants depending on which side is deformed,
//! each with a first-order closed form `pref · ⟨β|α⟩` over the Gaussian
//! `⟨β|α⟩ = exp(β̄α − |α|²/2 − |β|²/2)`, and a numeric route through the
//! built vectors for cross-checking.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::algebra::{deformed_annihilator, Deformation};
use crate::entangle::validity_margin;
use crate::error::Error;
use crate::fock::{
    coherent_state, creation, inner_product, matrix_exponential, FockOperator, FockVector,
    DEFAULT_TAIL_LEN, TAIL_MASS_LIMIT,
};

/// Validity margin above which the first-order construction is flagged as
/// outside its regime.
pub const REGIME_MARGIN_LIMIT: f64 = 1.0;

/// How a deformed coherent state vector is produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BuildMethod {
    /// First-order closed form `(I + εK_α)|α⟩`.
    Perturbative,
    /// Matrix exponential `exp(αb† − ᾱb)|0⟩`.
    Numeric,
}

impl std::fmt::Display for BuildMethod {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            BuildMethod::Perturbative => write!(f, "perturbative"),
            BuildMethod::Numeric => write!(f, "numeric"),
        }
    }
}

impl std::str::FromStr for BuildMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "perturbative" => Ok(BuildMethod::Perturbative),
            "numeric" => Ok(BuildMethod::Numeric),
            other => Err(Error::InvalidParameter(format!(
                "unknown build method {other:?} (expected \"perturbative\" or \"numeric\")"
            ))),
        }
    }
}

/// Everything needed to build one deformed coherent state.
#[derive(Debug, Clone, Copy)]
pub struct DeformedStateSpec {
    pub alpha: Complex64,
    pub deformation: Deformation,
    pub dim: usize,
    pub method: BuildMethod,
}

/// A constructed state vector together with its health indicators.
#[derive(Debug, Clone)]
pub struct BuiltState {
    pub vector: FockVector,
    /// Weight in the top [`DEFAULT_TAIL_LEN`] amplitudes.
    pub tail_mass: f64,
    /// True when the tail mass exceeds [`TAIL_MASS_LIMIT`], i.e. the
    /// truncated space is too small for this label.
    pub truncation_flagged: bool,
    /// True when the first-order validity margin `(4/3)|α|⁴|ε|` exceeds
    /// [`REGIME_MARGIN_LIMIT`], i.e. the deformation is no longer a small
    /// correction for this label.
    pub regime_flagged: bool,
}

fn finish(vector: FockVector, alpha: Complex64, d: Deformation) -> BuiltState {
    let tail_mass = vector.tail_mass(DEFAULT_TAIL_LEN);
    let margin = validity_margin(alpha.norm(), d.eps());
    BuiltState {
        vector,
        tail_mass,
        truncation_flagged: tail_mass > TAIL_MASS_LIMIT,
        regime_flagged: margin > REGIME_MARGIN_LIMIT,
    }
}

/// First-order correction operator `K_α` applied by the perturbative
/// construction.
fn correction_operator(alpha: Complex64, dim: usize) -> Result<FockOperator, Error> {
    let ad = creation(dim)?;
    let ad2 = ad.dot(&ad);
    let r2 = alpha.norm_sqr();
    let ident_term = FockOperator::identity(dim).scaled(Complex64::new(r2 * r2 / 24.0, 0.0));
    let linear_term = ad.scaled(alpha * Complex64::new(-r2 / 6.0, 0.0));
    let quadratic_term = ad2.scaled(alpha * alpha * Complex64::new(0.125, 0.0));
    Ok(ident_term.add(&linear_term).add(&quadratic_term))
}

/// Builds the deformed coherent state from its first-order closed form,
/// `(I + εK_α)|α⟩`, without renormalizing.
pub fn dcs_perturbative(spec: &DeformedStateSpec) -> Result<BuiltState, Error> {
    let base = coherent_state(spec.alpha, spec.dim)?;
    let correction = correction_operator(spec.alpha, spec.dim)?
        .apply(&base)?
        .scaled(Complex64::new(spec.deformation.eps(), 0.0));
    Ok(finish(base.add(&correction), spec.alpha, spec.deformation))
}

/// Deformed displacement operator `exp(αb† − ᾱb)`.
pub fn deformed_displacement(
    alpha: Complex64,
    d: Deformation,
    dim: usize,
) -> Result<FockOperator, Error> {
    let b = deformed_annihilator(d, dim)?;
    let generator = b.adjoint().scaled(alpha).sub(&b.scaled(alpha.conj()));
    Ok(matrix_exponential(&generator))
}

/// Builds the deformed coherent state by displacing the vacuum with the
/// exponentiated deformed generator.
pub fn dcs_numeric(spec: &DeformedStateSpec) -> Result<BuiltState, Error> {
    let disp = deformed_displacement(spec.alpha, spec.deformation, spec.dim)?;
    let vacuum = FockVector::basis_state(spec.dim, 0)?;
    Ok(finish(disp.apply(&vacuum)?, spec.alpha, spec.deformation))
}

/// Builds the state by whichever method the spec names.
pub fn build_state(spec: &DeformedStateSpec) -> Result<BuiltState, Error> {
    match spec.method {
        BuildMethod::Perturbative => dcs_perturbative(spec),
        BuildMethod::Numeric => dcs_numeric(spec),
    }
}

/// Which sides of an overlap `⟨β|α⟩` carry the deformation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OverlapKind {
    /// Both sides deformed: `⟨β̃|α̃⟩`.
    DeformedBoth,
    /// Deformed ket against an ordinary coherent bra: `⟨β|α̃⟩`.
    DeformedKet,
    /// Ordinary coherent ket against a deformed bra: `⟨β̃|α⟩`.
    DeformedBra,
    /// Ordinary coherent states on both sides.
    Undeformed,
}

impl OverlapKind {
    /// Short token used by the CLI and file formats.
    pub fn token(&self) -> &'static str {
        match self {
            OverlapKind::DeformedBoth => "dd",
            OverlapKind::DeformedKet => "dn",
            OverlapKind::DeformedBra => "nd",
            OverlapKind::Undeformed => "std",
        }
    }
}

impl std::fmt::Display for OverlapKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.token())
    }
}

impl std::str::FromStr for OverlapKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "dd" => Ok(OverlapKind::DeformedBoth),
            "dn" => Ok(OverlapKind::DeformedKet),
            "nd" => Ok(OverlapKind::DeformedBra),
            "std" => Ok(OverlapKind::Undeformed),
            other => Err(Error::InvalidParameter(format!(
                "unknown overlap kind {other:?} (expected dd, dn, nd, or std)"
            ))),
        }
    }
}

/// Closed-form overlap `⟨β|α⟩` for the requested deformation pattern,
/// first order in `ε`.
///
/// `alpha` labels the ket, `beta` the bra. With `w = β̄α` the Gaussian
/// factor is `exp(w − |α|²/2 − |β|²/2)` and the deformation multiplies it
/// by:
///
/// - both deformed: `1 + ε[(|α|⁴+|β|⁴)/24 − ((|α|²+|β|²)/6)w + w²/4]`
/// - deformed ket:  `1 + ε[|α|⁴/24 − (|α|²/6)w + w²/8]`
/// - deformed bra:  `1 + ε[|β|⁴/24 − (|β|²/6)w + w²/8]`
/// - undeformed: no prefactor.
///
/// A both-deformed overlap of bitwise-equal labels returns exactly `1`
/// (the prefactor bracket cancels algebraically but not in floating
/// point).
pub fn overlap_closed_form(
    alpha: Complex64,
    beta: Complex64,
    d: Deformation,
    kind: OverlapKind,
) -> Complex64 {
    let one = Complex64::new(1.0, 0.0);
    if kind == OverlapKind::DeformedBoth && alpha == beta {
        return one;
    }
    let w = alpha * beta.conj();
    let sa = alpha.norm_sqr();
    let sb = beta.norm_sqr();
    let gauss = (w - Complex64::new(0.5 * (sa + sb), 0.0)).exp();
    let eps = d.eps();
    let pref = match kind {
        OverlapKind::Undeformed => one,
        OverlapKind::DeformedBoth => {
            one + Complex64::new(eps, 0.0)
                * (Complex64::new((sa * sa + sb * sb) / 24.0, 0.0)
                    - Complex64::new((sa + sb) / 6.0, 0.0) * w
                    + w * w * Complex64::new(0.25, 0.0))
        }
        OverlapKind::DeformedKet => {
            one + Complex64::new(eps, 0.0)
                * (Complex64::new(sa * sa / 24.0, 0.0) - Complex64::new(sa / 6.0, 0.0) * w
                    + w * w * Complex64::new(0.125, 0.0))
        }
        OverlapKind::DeformedBra => {
            one + Complex64::new(eps, 0.0)
                * (Complex64::new(sb * sb / 24.0, 0.0) - Complex64::new(sb / 6.0, 0.0) * w
                    + w * w * Complex64::new(0.125, 0.0))
        }
    };
    pref * gauss
}

/// A numerically evaluated overlap along with a truncation warning from
/// the underlying vectors.
#[derive(Debug, Clone, Copy)]
pub struct NumericOverlap {
    pub value: Complex64,
    pub truncation_flagged: bool,
}

/// Overlap `⟨β|α⟩` evaluated from explicitly built vectors (perturbative
/// construction on the deformed sides, plain coherent states otherwise).
pub fn overlap_numeric(
    alpha: Complex64,
    beta: Complex64,
    d: Deformation,
    kind: OverlapKind,
    dim: usize,
) -> Result<NumericOverlap, Error> {
    let deformed = |label: Complex64| -> Result<BuiltState, Error> {
        dcs_perturbative(&DeformedStateSpec {
            alpha: label,
            deformation: d,
            dim,
            method: BuildMethod::Perturbative,
        })
    };
    let plain = |label: Complex64| -> Result<BuiltState, Error> {
        Ok(finish(
            coherent_state(label, dim)?,
            label,
            Deformation::new(0.0)?,
        ))
    };
    let (ket, bra) = match kind {
        OverlapKind::DeformedBoth => (deformed(alpha)?, deformed(beta)?),
        OverlapKind::DeformedKet => (deformed(alpha)?, plain(beta)?),
        OverlapKind::DeformedBra => (plain(alpha)?, deformed(beta)?),
        OverlapKind::Undeformed => (plain(alpha)?, plain(beta)?),
    };
    let value = inner_product(&bra.vector, &ket.vector)?;
    Ok(NumericOverlap {
        value,
        truncation_flagged: ket.truncation_flagged || bra.truncation_flagged,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn spec(alpha: Complex64, eps: f64, dim: usize, method: BuildMethod) -> DeformedStateSpec {
        DeformedStateSpec {
            alpha,
            deformation: Deformation::new(eps).unwrap(),
            dim,
            method,
        }
    }

    #[test]
    fn perturbative_state_matches_reference_amplitudes() {
        // Label 1, strength 0.1: the first two amplitudes of
        // (I + εK)|α⟩ to full double precision.
        let built =
            dcs_perturbative(&spec(c(1.0, 0.0), 0.1, 64, BuildMethod::Perturbative)).unwrap();
        let amp = built.vector.amplitudes();
        assert_abs_diff_eq!(amp[0].re, 0.6090578707947694, epsilon = 1e-15);
        assert_abs_diff_eq!(amp[1].re, 0.5989490264662255, epsilon = 1e-15);
        assert_eq!(amp[0].im, 0.0);
        assert!(!built.truncation_flagged);
        assert!(!built.regime_flagged);
    }

    #[test]
    fn perturbative_norm_deviation_matches_closed_form() {
        for &(r, eps) in &[(0.5, 0.1), (1.0, 0.1), (1.5, 0.2), (0.75, 0.05)] {
            let built =
                dcs_perturbative(&spec(c(r, 0.0), eps, 64, BuildMethod::Perturbative)).unwrap();
            let dev = (built.vector.norm_sqr() - 1.0).abs();
            let predicted = eps * eps * (r.powi(6) / 144.0 + r.powi(4) / 32.0);
            assert_abs_diff_eq!(dev, predicted, epsilon = 1e-10 + 1e-3 * predicted);
        }
    }

    #[test]
    fn construction_methods_agree_to_second_order() {
        let eps = 0.1;
        let numeric = dcs_numeric(&spec(c(1.0, 0.0), eps, 64, BuildMethod::Numeric)).unwrap();
        let pert =
            dcs_perturbative(&spec(c(1.0, 0.0), eps, 64, BuildMethod::Perturbative)).unwrap();
        let diff = numeric.vector.sub(&pert.vector).norm();
        // The gap is second order with coefficient ≈ 0.095 at this label.
        assert!(diff < 0.15 * eps * eps, "diff {diff}");
        assert!(diff > 0.05 * eps * eps, "diff {diff}");
    }

    #[test]
    fn methods_coincide_without_deformation() {
        let numeric = dcs_numeric(&spec(c(0.8, 0.3), 0.0, 64, BuildMethod::Numeric)).unwrap();
        let pert =
            dcs_perturbative(&spec(c(0.8, 0.3), 0.0, 64, BuildMethod::Perturbative)).unwrap();
        assert!(numeric.vector.sub(&pert.vector).norm() < 1e-12);
    }

    #[test]
    fn regime_and_truncation_flags_fire() {
        let strained =
            dcs_perturbative(&spec(c(2.0, 0.0), 0.4, 64, BuildMethod::Perturbative)).unwrap();
        assert!(strained.regime_flagged);
        let squeezed = dcs_numeric(&spec(c(3.5, 0.0), 0.1, 16, BuildMethod::Numeric)).unwrap();
        assert!(squeezed.truncation_flagged);
    }

    #[test]
    fn closed_form_overlaps_match_reference_values() {
        let d = Deformation::new(0.1).unwrap();
        let dd = overlap_closed_form(c(1.0, 0.0), c(-1.0, 0.0), d, OverlapKind::DeformedBoth);
        assert_abs_diff_eq!(dd.re, 0.1443576354523869, epsilon = 1e-15);
        assert_eq!(dd.im, 0.0);
        let plain = overlap_closed_form(
            c(1.0, 0.0),
            c(-1.0, 0.0),
            Deformation::new(0.0).unwrap(),
            OverlapKind::Undeformed,
        );
        // e⁻² to full double precision.
        assert_abs_diff_eq!(plain.re, 0.1353352832366127, epsilon = 1e-15);
    }

    #[test]
    fn same_label_overlaps_are_exactly_one() {
        let d = Deformation::new(0.3).unwrap();
        let one = Complex64::new(1.0, 0.0);
        for &alpha in &[c(0.7, -0.4), c(1.5, 0.0), c(0.0, 1.2)] {
            assert_eq!(
                overlap_closed_form(alpha, alpha, d, OverlapKind::DeformedBoth),
                one
            );
            assert_eq!(
                overlap_closed_form(alpha, alpha, d, OverlapKind::Undeformed),
                one
            );
        }
    }

    #[test]
    fn overlaps_are_conjugate_symmetric_bitwise() {
        let d = Deformation::new(0.17).unwrap();
        let pairs = [
            (c(0.9, 0.2), c(-0.3, 0.8)),
            (c(1.1, -0.5), c(0.4, 0.4)),
            (c(0.0, 1.0), c(1.0, 0.0)),
        ];
        for &(alpha, beta) in &pairs {
            let forward = overlap_closed_form(alpha, beta, d, OverlapKind::DeformedBoth);
            let backward = overlap_closed_form(beta, alpha, d, OverlapKind::DeformedBoth);
            assert_eq!(forward, backward.conj());
            // Swapping which side is deformed along with the labels is the
            // same state pairing read in the other direction.
            let ket_side = overlap_closed_form(alpha, beta, d, OverlapKind::DeformedKet);
            let bra_side = overlap_closed_form(beta, alpha, d, OverlapKind::DeformedBra);
            assert_eq!(ket_side, bra_side.conj());
        }
    }

    #[test]
    fn numeric_overlaps_track_closed_forms() {
        let d = Deformation::new(0.05).unwrap();
        let labels = [c(1.0, 0.0), c(-1.0, 0.0), c(0.0, 1.0), c(0.5, 0.0)];
        for &alpha in &labels {
            for &beta in &labels {
                for kind in [
                    OverlapKind::DeformedBoth,
                    OverlapKind::DeformedKet,
                    OverlapKind::DeformedBra,
                    OverlapKind::Undeformed,
                ] {
                    let numeric = overlap_numeric(alpha, beta, d, kind, 64).unwrap();
                    let closed = overlap_closed_form(alpha, beta, d, kind);
                    let gap = (numeric.value - closed).norm();
                    let tol = match kind {
                        // Both-deformed overlaps disagree at second order.
                        OverlapKind::DeformedBoth => 5e-3 * d.eps(),
                        // The single-deformed and plain closed forms are
                        // exact for the perturbative vectors.
                        _ => 1e-12,
                    };
                    assert!(
                        gap <= tol,
                        "kind {kind}, alpha {alpha}, beta {beta}: gap {gap} > {tol}"
                    );
                }
            }
        }
    }

    #[test]
    fn dd_overlap_residual_halves_like_eps_squared() {
        let mut residuals = Vec::new();
        for eps in [0.2, 0.1] {
            let d = Deformation::new(eps).unwrap();
            let numeric =
                overlap_numeric(c(1.0, 0.0), c(-1.0, 0.0), d, OverlapKind::DeformedBoth, 64)
                    .unwrap();
            let closed =
                overlap_closed_form(c(1.0, 0.0), c(-1.0, 0.0), d, OverlapKind::DeformedBoth);
            residuals.push((numeric.value - closed).norm());
        }
        let ratio = residuals[0] / residuals[1];
        assert!((ratio - 4.0).abs() < 0.05, "ratio {ratio}");
    }

    #[test]
    fn method_strings_round_trip() {
        for method in [BuildMethod::Perturbative, BuildMethod::Numeric] {
            assert_eq!(method.to_string().parse::<BuildMethod>().unwrap(), method);
        }
        for kind in [
            OverlapKind::DeformedBoth,
            OverlapKind::DeformedKet,
            OverlapKind::DeformedBra,
            OverlapKind::Undeformed,
        ] {
            assert_eq!(kind.token().parse::<OverlapKind>().unwrap(), kind);
        }
        assert!("xy".parse::<BuildMethod>().is_err());
        assert!("xy".parse::<OverlapKind>().is_err());
    }
}
