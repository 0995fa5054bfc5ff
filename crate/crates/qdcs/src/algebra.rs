//! The deformed mode operators and structural checks on their commutation
//! relations.
//!
//! The deformed annihilator is `b = a + (ε/4)·a†a²` with adjoint
//! `b† = a† + (ε/4)·a†²a`. On number states it acts as
//! `b|n⟩ = √n·f(n)|n−1⟩` with structure factor `f(n) = 1 + ε(n−1)/4`, so
//! to first order in `ε` the pair satisfies the deformed relation
//! `b b† − q b†b = 1` with `q = 1 + ε`.
//!
//! Two families of checks quantify how well the truncated matrices realize
//! that algebra and the nested commutators behind the displacement
//! construction; both report residuals whose leading term is `O(ε²)`, so
//! halving `ε` divides them by four.

use num_complex::Complex64;

use crate::error::Error;
use crate::fock::{annihilator, commutator, number_operator, FockOperator};

/// Smallest dimension for which the commutator checks have an interior
/// region not contaminated by the truncation edge.
const MIN_CHECK_DIM: usize = 12;

/// Real deformation parameter `ε`; the deformation base is `q = 1 + ε`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Deformation {
    eps: f64,
}

impl Deformation {
    /// Wraps a finite deformation strength.
    pub fn new(eps: f64) -> Result<Self, Error> {
        if !eps.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "deformation strength must be finite, got {eps}"
            )));
        }
        Ok(Self { eps })
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    /// Deformation base `q = 1 + ε`.
    pub fn q(&self) -> f64 {
        1.0 + self.eps
    }

    /// Structure factor `f(n) = 1 + ε(n−1)/4` governing the deformed
    /// ladder action `b|n⟩ = √n·f(n)|n−1⟩`.
    pub fn structure_factor(&self, n: usize) -> f64 {
        1.0 + 0.25 * self.eps * (n as f64 - 1.0)
    }
}

/// Deformed annihilator `b = a + (ε/4)·a†a²` on the truncated space.
pub fn deformed_annihilator(d: Deformation, dim: usize) -> Result<FockOperator, Error> {
    let a = annihilator(dim)?;
    let ad = a.adjoint();
    let correction = ad
        .dot(&a)
        .dot(&a)
        .scaled(Complex64::new(0.25 * d.eps(), 0.0));
    Ok(a.add(&correction))
}

/// Deformed creator `b† = a† + (ε/4)·a†²a`, the adjoint of `b`.
pub fn deformed_creation(d: Deformation, dim: usize) -> Result<FockOperator, Error> {
    Ok(deformed_annihilator(d, dim)?.adjoint())
}

/// Deformed number operator `b†b`, diagonal with entries `n·f(n)²`.
pub fn deformed_number(d: Deformation, dim: usize) -> Result<FockOperator, Error> {
    let b = deformed_annihilator(d, dim)?;
    Ok(b.adjoint().dot(&b))
}

/// Closed form of the diagonal commutator residual pinned by
/// [`verify_q_commutator`]: at occupation `n` the measured `[b, b†]`
/// exceeds `1 + εn` by exactly `ε²·n(3n−1)/16`.
pub fn q_commutator_residual_prediction(d: Deformation, n: usize) -> f64 {
    let nf = n as f64;
    d.eps() * d.eps() * nf * (3.0 * nf - 1.0) / 16.0
}

/// Residuals of the deformed commutation relation on the truncated space.
///
/// The reference operator is the first-order form `I + ε·n̂` of the
/// deformed relation's right-hand side; the residual `[b, b†] − (I + εn̂)`
/// is diagonal with entries `ε²·n(3n−1)/16` away from the truncation edge.
#[derive(Debug, Clone)]
pub struct QCommutatorCheck {
    pub eps: f64,
    pub dim: usize,
    /// Largest diagonal residual over low occupations `n ≤ min(8, dim−3)`.
    pub max_low_occupation: f64,
    /// Largest diagonal residual over the full interior `n ≤ dim−3`.
    pub max_interior: f64,
    /// Largest off-diagonal residual entry (zero up to rounding).
    pub max_off_diagonal: f64,
    /// Worst gap between measured diagonal residuals and their `ε²` closed
    /// form over the interior.
    pub prediction_gap: f64,
}

/// Measures how the truncated `b`, `b†` realize the deformed commutation
/// relation. Requires `dim ≥ 12` so an edge-free interior exists.
pub fn verify_q_commutator(d: Deformation, dim: usize) -> Result<QCommutatorCheck, Error> {
    if dim < MIN_CHECK_DIM {
        return Err(Error::DimensionTooSmall {
            min: MIN_CHECK_DIM,
            got: dim,
        });
    }
    let b = deformed_annihilator(d, dim)?;
    let bd = b.adjoint();
    let reference =
        FockOperator::identity(dim).add(&number_operator(dim).scaled(Complex64::new(d.eps(), 0.0)));
    let residual = commutator(&b, &bd).sub(&reference);

    let interior_top = dim - 3;
    let low_top = interior_top.min(8);
    let mut max_low = 0.0_f64;
    let mut max_interior = 0.0_f64;
    let mut prediction_gap = 0.0_f64;
    for n in 0..=interior_top {
        let measured = residual.diagonal_entry(n).norm();
        if n <= low_top {
            max_low = max_low.max(measured);
        }
        max_interior = max_interior.max(measured);
        let gap = (residual.diagonal_entry(n).re - q_commutator_residual_prediction(d, n)).abs();
        prediction_gap = prediction_gap.max(gap);
    }

    let mut max_off = 0.0_f64;
    for i in 0..dim {
        for j in 0..dim {
            if i != j {
                max_off = max_off.max(residual.matrix()[(i, j)].norm());
            }
        }
    }

    Ok(QCommutatorCheck {
        eps: d.eps(),
        dim,
        max_low_occupation: max_low,
        max_interior,
        max_off_diagonal: max_off,
        prediction_gap,
    })
}

/// Residuals of one nested-commutator identity.
#[derive(Debug, Clone)]
pub struct CommutatorIdentityCheck {
    /// Which identity, by its commutator word (`"xy"`, `"xxy"`, `"yxy"`,
    /// `"yxxy"`).
    pub name: &'static str,
    /// `‖(LHS − RHS)|0⟩‖`, the residual seen by the vacuum. This is the
    /// quantity the displacement construction actually relies on.
    pub vacuum_residual: f64,
    /// Largest column norm of the residual over columns `n ≤ 2`.
    pub low_state_residual: f64,
    /// Largest entry magnitude over the interior block
    /// `n ≤ min(8, dim−6)`; grows polynomially with the block size.
    pub block_max: f64,
}

/// Residuals of the four nested-commutator identities behind the deformed
/// displacement operator, at one `(α, ε)` point.
#[derive(Debug, Clone)]
pub struct DisplacementCommutatorChecks {
    pub alpha: Complex64,
    pub eps: f64,
    pub dim: usize,
    pub identities: Vec<CommutatorIdentityCheck>,
}

impl DisplacementCommutatorChecks {
    /// Largest vacuum residual across the four identities.
    pub fn max_vacuum_residual(&self) -> f64 {
        self.identities
            .iter()
            .map(|c| c.vacuum_residual)
            .fold(0.0, f64::max)
    }
}

/// Checks the nested commutators of `X = αb† − ᾱb` and `Y = ᾱb` against
/// their first-order closed forms:
///
/// - `[X, Y] = −|α|²(I + εn̂)`
/// - `[X, [X, Y]] = ε|α|²(αb† + ᾱb)`
/// - `[Y, [X, Y]] = −ε|α|²·ᾱb`
/// - `[Y, [X, [X, Y]]] = ε|α|⁴·I`
///
/// Every residual is `O(ε²)`; the vacuum residuals have the exact values
/// `{0, |α|³ε²/8, 0, |α|⁴ε²/8}`. Requires `dim ≥ 12`.
pub fn verify_bch_commutators(
    alpha: Complex64,
    d: Deformation,
    dim: usize,
) -> Result<DisplacementCommutatorChecks, Error> {
    if dim < MIN_CHECK_DIM {
        return Err(Error::DimensionTooSmall {
            min: MIN_CHECK_DIM,
            got: dim,
        });
    }
    let eps = Complex64::new(d.eps(), 0.0);
    let b = deformed_annihilator(d, dim)?;
    let bd = b.adjoint();
    let ident = FockOperator::identity(dim);
    let nhat = number_operator(dim);

    let x = bd.scaled(alpha).sub(&b.scaled(alpha.conj()));
    let y = b.scaled(alpha.conj());

    let xy = commutator(&x, &y);
    let xxy = commutator(&x, &xy);
    let yxy = commutator(&y, &xy);
    let yxxy = commutator(&y, &xxy);

    let r2 = Complex64::new(alpha.norm_sqr(), 0.0);
    let r4 = r2 * r2;

    let rhs_xy = ident.add(&nhat.scaled(eps)).scaled(-r2);
    let rhs_xxy = bd
        .scaled(alpha)
        .add(&b.scaled(alpha.conj()))
        .scaled(r2 * eps);
    let rhs_yxy = b.scaled(-r2 * alpha.conj() * eps);
    let rhs_yxxy = ident.scaled(r4 * eps);

    let pairs: [(&'static str, &FockOperator, FockOperator); 4] = [
        ("xy", &xy, rhs_xy),
        ("xxy", &xxy, rhs_xxy),
        ("yxy", &yxy, rhs_yxy),
        ("yxxy", &yxxy, rhs_yxxy),
    ];

    let block_top = dim.saturating_sub(6).min(8);
    let identities = pairs
        .into_iter()
        .map(|(name, lhs, rhs)| {
            let diff = lhs.sub(&rhs);
            let column_norm = |j: usize| -> f64 {
                diff.matrix()
                    .column(j)
                    .iter()
                    .map(|c| c.norm_sqr())
                    .sum::<f64>()
                    .sqrt()
            };
            let vacuum_residual = column_norm(0);
            let low_state_residual = (0..=2).map(column_norm).fold(0.0, f64::max);
            let mut block_max = 0.0_f64;
            for i in 0..=block_top {
                for j in 0..=block_top {
                    block_max = block_max.max(diff.matrix()[(i, j)].norm());
                }
            }
            CommutatorIdentityCheck {
                name,
                vacuum_residual,
                low_state_residual,
                block_max,
            }
        })
        .collect();

    Ok(DisplacementCommutatorChecks {
        alpha,
        eps: d.eps(),
        dim,
        identities,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::FockVector;
    use approx::assert_abs_diff_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn deformed_ladder_action_matches_structure_factor() {
        let dim = 16;
        let d = Deformation::new(0.1).unwrap();
        let b = deformed_annihilator(d, dim).unwrap();
        for n in 1..dim {
            let ket = FockVector::basis_state(dim, n).unwrap();
            let lowered = b.apply(&ket).unwrap();
            let expected = (n as f64).sqrt() * d.structure_factor(n);
            assert_abs_diff_eq!(
                lowered.amplitudes()[n - 1].re,
                expected,
                epsilon = 1e-14 * expected.abs().max(1.0)
            );
            assert_eq!(lowered.amplitudes()[n - 1].im, 0.0);
        }
    }

    #[test]
    fn deformed_number_diagonal_is_n_times_f_squared() {
        let dim = 32;
        let d = Deformation::new(0.1).unwrap();
        let nd = deformed_number(d, dim).unwrap();
        // Spot value at n = 2: 2·f(2)² = 2·1.025² = 2.10125.
        assert_abs_diff_eq!(nd.diagonal_entry(2).re, 2.10125, epsilon = 1e-14);
        for n in 0..dim - 1 {
            let f = d.structure_factor(n);
            let expected = n as f64 * f * f;
            assert_abs_diff_eq!(nd.diagonal_entry(n).re, expected, epsilon = 1e-12);
        }
    }

    #[test]
    fn q_commutator_residual_matches_prediction() {
        // Worked point: n = 2, ε = 0.1 gives [b,b†]₂₂ = 1.20625, reference
        // 1 + εn = 1.2, residual ε²·n(3n−1)/16 = 0.00625.
        let d = Deformation::new(0.1).unwrap();
        assert_abs_diff_eq!(
            q_commutator_residual_prediction(d, 2),
            0.00625,
            epsilon = 1e-15
        );
        let check = verify_q_commutator(d, 64).unwrap();
        assert!(check.prediction_gap < 1e-12);
        assert!(check.max_off_diagonal < 1e-12);
        assert_abs_diff_eq!(check.max_low_occupation, 0.01 * 11.5, epsilon = 1e-12);
    }

    #[test]
    fn q_commutator_residual_vanishes_without_deformation() {
        let check = verify_q_commutator(Deformation::new(0.0).unwrap(), 64).unwrap();
        assert!(check.max_interior < 1e-10);
        assert!(check.max_off_diagonal < 1e-12);
    }

    #[test]
    fn q_commutator_residual_scales_quadratically() {
        let hi = verify_q_commutator(Deformation::new(0.2).unwrap(), 64).unwrap();
        let lo = verify_q_commutator(Deformation::new(0.1).unwrap(), 64).unwrap();
        let ratio = hi.max_low_occupation / lo.max_low_occupation;
        assert!((ratio - 4.0).abs() < 1e-9);
    }

    #[test]
    fn bch_vacuum_residuals_match_exact_values() {
        let dim = 64;
        for &(alpha, eps) in &[(c(1.0, 0.0), 0.1), (c(0.5, 0.0), 0.2), (c(1.0, 0.5), 0.05)] {
            let d = Deformation::new(eps).unwrap();
            let checks = verify_bch_commutators(alpha, d, dim).unwrap();
            let r = alpha.norm();
            let expected = [
                0.0,
                r.powi(3) * eps * eps / 8.0,
                0.0,
                r.powi(4) * eps * eps / 8.0,
            ];
            for (check, want) in checks.identities.iter().zip(expected) {
                assert_abs_diff_eq!(check.vacuum_residual, want, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn bch_low_state_residuals_halve_like_eps_squared() {
        let dim = 64;
        let alpha = c(1.0, 0.0);
        let hi = verify_bch_commutators(alpha, Deformation::new(0.2).unwrap(), dim).unwrap();
        let lo = verify_bch_commutators(alpha, Deformation::new(0.1).unwrap(), dim).unwrap();
        for (h, l) in hi.identities.iter().zip(lo.identities.iter()) {
            let ratio = h.low_state_residual / l.low_state_residual;
            assert!(
                (3.5..=4.5).contains(&ratio),
                "identity {} ratio {ratio} outside [3.5, 4.5]",
                h.name
            );
        }
    }

    #[test]
    fn small_dimensions_are_rejected() {
        let d = Deformation::new(0.1).unwrap();
        assert!(verify_q_commutator(d, 8).is_err());
        assert!(verify_bch_commutators(c(1.0, 0.0), d, 8).is_err());
    }

    #[test]
    fn non_finite_deformation_is_rejected() {
        assert!(Deformation::new(f64::NAN).is_err());
        assert!(Deformation::new(f64::INFINITY).is_err());
    }
}
