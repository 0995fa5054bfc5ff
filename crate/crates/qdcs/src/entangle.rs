//! Bipartite entanglement of deformed coherent-state superpositions.
//!
//! The central object is the two-mode state
//! `|ψ⟩ = μ·|a₁⟩_d⊗|a₂⟩_d + ν·|b₁⟩_d⊗|b₂⟩_d` (unnormalized). With the
//! mode overlaps `p₁ = ⟨a₁|b₁⟩_d`, `p₂ = ⟨a₂|b₂⟩_d` its concurrence is
//!
//! `𝒞 = 2|μ||ν|·√((1−|p₁|²)(1−|p₂|²)) / (|μ|²+|ν|²+μν̄p̄₁p₂+μ̄νp₁p̄₂)`.
//!
//! Three routes compute it: the general formula above from closed-form
//! overlaps, a symmetric closed form for the exchange superposition of
//! `±α` labels, and an independent Fock-space oracle that builds the
//! two-mode vector and measures the reduced purity. The oracle uses
//! `𝒞 = √(2(1−Tr ρ₁²))`, valid because each mode spans at most a
//! two-dimensional subspace for these states.
//!
//! All first-order formulas come with the validity margin
//! `(4/3)|α|⁴|ε|`; results carry that margin so callers can decide whether
//! the perturbative regime still holds.

use num_complex::Complex64;

use crate::algebra::Deformation;
use crate::error::Error;
use crate::fock::tensor_product;
use crate::states::{
    dcs_perturbative, overlap_closed_form, BuildMethod, DeformedStateSpec, OverlapKind,
};

/// Margin threshold used for the `valid` flag when a caller does not
/// supply its own.
pub const DEFAULT_MARGIN_THRESHOLD: f64 = 0.1;

/// Squared-norm floor below which a superposition counts as the null
/// vector.
pub const NULL_STATE_LIMIT: f64 = 1e-14;

/// How close `|p|²` may come to 1 before the orthogonalized basis
/// degenerates.
const DEGENERATE_LIMIT: f64 = 1e-12;

/// First-order validity margin `(4/3)|α|⁴|ε|`; the perturbative
/// construction is trustworthy only while this is small.
pub fn validity_margin(alpha_abs: f64, eps: f64) -> f64 {
    let r2 = alpha_abs * alpha_abs;
    (4.0 / 3.0) * r2 * r2 * eps.abs()
}

/// A concurrence value together with regime diagnostics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConcurrenceValue {
    /// The concurrence, clamped to `[0, 1]`.
    pub c: f64,
    /// Perturbative validity margin of the inputs (0 when no deformation
    /// context applies).
    pub margin: f64,
    /// True when `margin` is below [`DEFAULT_MARGIN_THRESHOLD`]; sweeps
    /// and the CLI re-derive this flag against the run's own threshold.
    pub valid: bool,
    /// Set when a limit or guard path produced the value.
    pub note: Option<&'static str>,
}

impl ConcurrenceValue {
    fn new(c: f64, margin: f64, note: Option<&'static str>) -> Self {
        Self {
            c,
            margin,
            valid: margin < DEFAULT_MARGIN_THRESHOLD,
            note,
        }
    }

    /// Whether the margin stays below a caller-chosen threshold.
    pub fn within(&self, threshold: f64) -> bool {
        self.margin < threshold
    }
}

/// An unnormalized two-branch superposition
/// `μ·|a₁⟩_d⊗|a₂⟩_d + ν·|b₁⟩_d⊗|b₂⟩_d`.
#[derive(Debug, Clone, Copy)]
pub struct BipartitePairSpec {
    pub mu: Complex64,
    pub nu: Complex64,
    /// Labels of the first branch, one per mode.
    pub first: (Complex64, Complex64),
    /// Labels of the second branch, one per mode.
    pub second: (Complex64, Complex64),
}

impl BipartitePairSpec {
    /// The exchange superposition `|α⟩_d|−α⟩_d + e^{iθ}|−α⟩_d|α⟩_d`.
    pub fn exchange_superposition(alpha: Complex64, theta: f64) -> Self {
        Self {
            mu: Complex64::new(1.0, 0.0),
            nu: Complex64::new(theta.cos(), theta.sin()),
            first: (alpha, -alpha),
            second: (-alpha, alpha),
        }
    }

    /// Largest label modulus, which controls the validity margin.
    pub fn max_label_abs(&self) -> f64 {
        [self.first.0, self.first.1, self.second.0, self.second.1]
            .iter()
            .map(|l| l.norm())
            .fold(0.0, f64::max)
    }
}

/// Concurrence of `μ|u₁⟩|v₁⟩ + ν|u₂⟩|v₂⟩` from the branch coefficients and
/// the mode overlaps `p₁ = ⟨u₁|u₂⟩`, `p₂ = ⟨v₁|v₂⟩`.
///
/// Carries no deformation context, so the attached margin is 0; the
/// label-aware callers ([`concurrence_pair`], [`concurrence_fock_oracle`])
/// attach the real margin.
///
/// Returns an error when the superposition is the null vector (its squared
/// norm falls below [`NULL_STATE_LIMIT`]); returns 0 with a
/// `degenerate-superposition` note when either `|pᵢ|` reaches 1 and the
/// orthogonalized second basis vector ceases to exist.
pub fn concurrence_general(
    mu: Complex64,
    nu: Complex64,
    p1: Complex64,
    p2: Complex64,
) -> Result<ConcurrenceValue, Error> {
    concurrence_general_with_margin(mu, nu, p1, p2, 0.0)
}

fn concurrence_general_with_margin(
    mu: Complex64,
    nu: Complex64,
    p1: Complex64,
    p2: Complex64,
    margin: f64,
) -> Result<ConcurrenceValue, Error> {
    let cross = mu * nu.conj() * p1.conj() * p2;
    let den = mu.norm_sqr() + nu.norm_sqr() + 2.0 * cross.re;
    if !den.is_finite() {
        return Err(Error::InvalidParameter(
            "superposition coefficients or overlaps overflow".into(),
        ));
    }
    if den <= NULL_STATE_LIMIT {
        return Err(Error::NullState {
            norm_sqr: den,
            limit: NULL_STATE_LIMIT,
        });
    }
    let rem1 = 1.0 - p1.norm_sqr();
    let rem2 = 1.0 - p2.norm_sqr();
    if rem1 <= DEGENERATE_LIMIT || rem2 <= DEGENERATE_LIMIT {
        return Ok(ConcurrenceValue::new(
            0.0,
            margin,
            Some("degenerate-superposition"),
        ));
    }
    // One square root of the product keeps the antisymmetric case exact:
    // with p₁ = p₂ the radicand is a perfect square and √ recovers the
    // factor bitwise.
    let num = 2.0 * mu.norm() * nu.norm() * (rem1 * rem2).sqrt();
    Ok(ConcurrenceValue::new((num / den).min(1.0), margin, None))
}

/// Concurrence of a two-branch deformed-state superposition, via the
/// closed-form deformed overlaps of its branch labels.
pub fn concurrence_pair(
    spec: &BipartitePairSpec,
    d: Deformation,
) -> Result<ConcurrenceValue, Error> {
    let p1 = overlap_closed_form(spec.second.0, spec.first.0, d, OverlapKind::DeformedBoth);
    let p2 = overlap_closed_form(spec.second.1, spec.first.1, d, OverlapKind::DeformedBoth);
    let margin = validity_margin(spec.max_label_abs(), d.eps());
    concurrence_general_with_margin(spec.mu, spec.nu, p1, p2, margin)
}

/// Closed-form concurrence of the exchange superposition of `±α` labels at
/// mixing angle `θ`:
///
/// `𝒞 = (1 − k)/(1 + k·cosθ)` with `k = (1 + (4/3)|α|⁴ε)·e^{−4|α|²}`.
///
/// At `θ = π` numerator and denominator coincide, so the result is exactly
/// 1 whenever `cosθ` evaluates to −1; the fully degenerate point
/// `|α| = 0, θ = π` returns the same limit with a note.
pub fn concurrence_symmetric(alpha_abs: f64, theta: f64, d: Deformation) -> ConcurrenceValue {
    let margin = validity_margin(alpha_abs, d.eps());
    let r2 = alpha_abs * alpha_abs;
    let k = (1.0 + (4.0 / 3.0) * r2 * r2 * d.eps()) * (-4.0 * r2).exp();
    let num = 1.0 - k;
    let den = 1.0 + theta.cos() * k;
    if den == 0.0 {
        return ConcurrenceValue::new(1.0, margin, Some("antisymmetric-limit"));
    }
    ConcurrenceValue::new((num / den).clamp(0.0, 1.0), margin, None)
}

/// Concurrence of `|α⟩_d|β⟩_d + e^{iθ}|β⟩_d|α⟩_d` from the single deformed
/// overlap `p = ⟨α|β⟩_d`:
///
/// `𝒞 = (1 − |p|²)/(1 + |p|²·cosθ)`.
///
/// For `β = −α` this reduces to [`concurrence_symmetric`] up to `O(ε²)`.
pub fn concurrence_general_symmetric(
    alpha: Complex64,
    beta: Complex64,
    theta: f64,
    d: Deformation,
) -> ConcurrenceValue {
    let p = overlap_closed_form(beta, alpha, d, OverlapKind::DeformedBoth);
    let margin = validity_margin(alpha.norm().max(beta.norm()), d.eps());
    let k = p.norm_sqr();
    let num = 1.0 - k;
    let den = 1.0 + theta.cos() * k;
    if den == 0.0 {
        return ConcurrenceValue::new(1.0, margin, Some("antisymmetric-limit"));
    }
    ConcurrenceValue::new((num / den).clamp(0.0, 1.0), margin, None)
}

/// Independent concurrence oracle: builds the two-mode superposition from
/// perturbative vectors in a `dim`-level Fock space, normalizes, and
/// evaluates `√(2(1−Tr ρ₁²))` from the reduced purity of the first mode.
pub fn concurrence_fock_oracle(
    spec: &BipartitePairSpec,
    d: Deformation,
    dim: usize,
) -> Result<ConcurrenceValue, Error> {
    let build = |label: Complex64| {
        dcs_perturbative(&DeformedStateSpec {
            alpha: label,
            deformation: d,
            dim,
            method: BuildMethod::Perturbative,
        })
    };
    let a1 = build(spec.first.0)?;
    let a2 = build(spec.first.1)?;
    let b1 = build(spec.second.0)?;
    let b2 = build(spec.second.1)?;
    let truncated = a1.truncation_flagged
        || a2.truncation_flagged
        || b1.truncation_flagged
        || b2.truncation_flagged;

    let psi = tensor_product(&a1.vector, &a2.vector)?
        .scaled(spec.mu)
        .add(&tensor_product(&b1.vector, &b2.vector)?.scaled(spec.nu));
    let norm_sqr = psi.norm_sqr();
    if norm_sqr <= NULL_STATE_LIMIT {
        return Err(Error::NullState {
            norm_sqr,
            limit: NULL_STATE_LIMIT,
        });
    }
    let purity = psi.reduced_purity()?;
    let c = (2.0 * (1.0 - purity)).max(0.0).sqrt().min(1.0);
    let margin = validity_margin(spec.max_label_abs(), d.eps());
    Ok(ConcurrenceValue::new(
        c,
        margin,
        truncated.then_some("truncation"),
    ))
}

/// Diagnostics from the maximal-entanglement predicate.
#[derive(Debug, Clone)]
pub struct MaximalityCheck {
    /// True when all three residuals fall below the tolerance.
    pub maximal: bool,
    /// `||μ| − |ν||`: the branch weights must balance.
    pub coefficient_residual: f64,
    /// `||p₁| − |p₂||`: the two mode overlaps must have equal modulus.
    pub modulus_residual: f64,
    /// `|e^{iθ}·p̄₁p₂ + |p₁||p₂||` with `θ = arg(μ/ν)`: the overlap phases
    /// must anti-align with the branch phase.
    pub phase_residual: f64,
    /// Concurrence via [`concurrence_pair`] for reference.
    pub concurrence: ConcurrenceValue,
}

/// Tests the algebraic conditions under which the two-branch superposition
/// reaches concurrence 1: balanced coefficients, equal overlap moduli, and
/// anti-aligned overlap phase.
pub fn is_maximally_entangled(
    spec: &BipartitePairSpec,
    d: Deformation,
    tol: f64,
) -> Result<MaximalityCheck, Error> {
    if !(tol.is_finite() && tol > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "tolerance must be positive and finite, got {tol}"
        )));
    }
    let p1 = overlap_closed_form(spec.second.0, spec.first.0, d, OverlapKind::DeformedBoth);
    let p2 = overlap_closed_form(spec.second.1, spec.first.1, d, OverlapKind::DeformedBoth);
    let coefficient_residual = (spec.mu.norm() - spec.nu.norm()).abs();
    let modulus_residual = (p1.norm() - p2.norm()).abs();
    let theta = (spec.mu / spec.nu).arg();
    let phase = Complex64::new(theta.cos(), theta.sin());
    let phase_residual = (phase * p1.conj() * p2 + p1.norm() * p2.norm()).norm();
    let concurrence = concurrence_pair(spec, d)?;
    Ok(MaximalityCheck {
        maximal: coefficient_residual <= tol && modulus_residual <= tol && phase_residual <= tol,
        coefficient_residual,
        modulus_residual,
        phase_residual,
        concurrence,
    })
}
