//! Truncated Fock space: number-basis vectors, dense operators, ladder
//! operators, coherent states, and a dense matrix exponential.
//!
//! Everything lives in the span of `{|0⟩, …, |dim−1⟩}`. Truncation is
//! explicit: the creation operator annihilates the top state `|dim−1⟩`, so
//! the canonical commutator `[a, a†]` is the identity except for its last
//! diagonal entry, which equals `1 − dim`. Callers are expected to pick
//! `dim` large enough that their states carry negligible weight near the
//! edge; [`FockVector::tail_mass`] measures exactly that weight.

use ndarray::{Array1, Array2};
use num_complex::Complex64;

use crate::error::Error;

/// Number of top-end amplitudes inspected by default when deciding whether
/// a state is feeling the truncation edge.
pub const DEFAULT_TAIL_LEN: usize = 8;

/// Tail mass above which a constructed state is flagged as truncated.
pub const TAIL_MASS_LIMIT: f64 = 1e-10;

/// A ket expanded in the number basis of a truncated Fock space.
#[derive(Debug, Clone, PartialEq)]
pub struct FockVector {
    amp: Array1<Complex64>,
}

impl FockVector {
    /// The zero vector (not a physical state) of the given dimension.
    pub fn zeros(dim: usize) -> Self {
        Self {
            amp: Array1::zeros(dim),
        }
    }

    /// Builds a vector from raw amplitudes, lowest occupation first.
    pub fn from_amplitudes(amp: Vec<Complex64>) -> Result<Self, Error> {
        if amp.is_empty() {
            return Err(Error::EmptyAmplitudes);
        }
        Ok(Self {
            amp: Array1::from_vec(amp),
        })
    }

    /// The basis ket `|n⟩`.
    pub fn basis_state(dim: usize, n: usize) -> Result<Self, Error> {
        if n >= dim {
            return Err(Error::BasisIndexOutOfRange { index: n, dim });
        }
        let mut v = Self::zeros(dim);
        v.amp[n] = Complex64::new(1.0, 0.0);
        Ok(v)
    }

    pub fn dim(&self) -> usize {
        self.amp.len()
    }

    /// Amplitudes in occupation order.
    pub fn amplitudes(&self) -> &Array1<Complex64> {
        &self.amp
    }

    /// Squared Euclidean norm `Σ_n |c_n|²`.
    pub fn norm_sqr(&self) -> f64 {
        self.amp.iter().map(|c| c.norm_sqr()).sum()
    }

    /// Euclidean norm.
    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// Probability-like weight `Σ_{n ≥ dim−k} |c_n|²` carried by the top
    /// `k` occupation numbers. Large tail mass means the truncation edge is
    /// distorting the state.
    pub fn tail_mass(&self, k: usize) -> f64 {
        let dim = self.dim();
        let start = dim.saturating_sub(k);
        self.amp.iter().skip(start).map(|c| c.norm_sqr()).sum()
    }

    /// Returns `self` scaled by a complex factor.
    pub fn scaled(&self, factor: Complex64) -> Self {
        Self {
            amp: self.amp.mapv(|c| c * factor),
        }
    }

    /// Componentwise sum. Panics if the dimensions differ.
    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(
            self.dim(),
            other.dim(),
            "FockVector::add dimension mismatch"
        );
        Self {
            amp: &self.amp + &other.amp,
        }
    }

    /// Componentwise difference. Panics if the dimensions differ.
    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(
            self.dim(),
            other.dim(),
            "FockVector::sub dimension mismatch"
        );
        Self {
            amp: &self.amp - &other.amp,
        }
    }
}

/// Inner product `⟨bra|ket⟩`, conjugate-linear in the first argument.
pub fn inner_product(bra: &FockVector, ket: &FockVector) -> Result<Complex64, Error> {
    if bra.dim() != ket.dim() {
        return Err(Error::DimensionMismatch {
            left: bra.dim(),
            right: ket.dim(),
        });
    }
    Ok(bra
        .amp
        .iter()
        .zip(ket.amp.iter())
        .map(|(b, k)| b.conj() * k)
        .sum())
}

/// A dense linear operator on the truncated Fock space.
#[derive(Debug, Clone, PartialEq)]
pub struct FockOperator {
    mat: Array2<Complex64>,
}

impl FockOperator {
    pub fn zeros(dim: usize) -> Self {
        Self {
            mat: Array2::zeros((dim, dim)),
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut op = Self::zeros(dim);
        for i in 0..dim {
            op.mat[(i, i)] = Complex64::new(1.0, 0.0);
        }
        op
    }

    /// Wraps a square matrix.
    pub fn from_matrix(mat: Array2<Complex64>) -> Result<Self, Error> {
        if mat.nrows() != mat.ncols() {
            return Err(Error::DimensionMismatch {
                left: mat.nrows(),
                right: mat.ncols(),
            });
        }
        Ok(Self { mat })
    }

    /// Diagonal operator with entries `f(n)` for `n = 0, …, dim−1`.
    pub fn from_diagonal_fn(dim: usize, f: impl Fn(usize) -> Complex64) -> Self {
        let mut op = Self::zeros(dim);
        for n in 0..dim {
            op.mat[(n, n)] = f(n);
        }
        op
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn matrix(&self) -> &Array2<Complex64> {
        &self.mat
    }

    /// Applies the operator to a ket.
    pub fn apply(&self, v: &FockVector) -> Result<FockVector, Error> {
        if self.dim() != v.dim() {
            return Err(Error::DimensionMismatch {
                left: self.dim(),
                right: v.dim(),
            });
        }
        Ok(FockVector {
            amp: self.mat.dot(&v.amp),
        })
    }

    /// Operator product `self · rhs`. Panics if the dimensions differ.
    pub fn dot(&self, rhs: &Self) -> Self {
        assert_eq!(
            self.dim(),
            rhs.dim(),
            "FockOperator::dot dimension mismatch"
        );
        Self {
            mat: self.mat.dot(&rhs.mat),
        }
    }

    /// Hermitian adjoint (conjugate transpose).
    pub fn adjoint(&self) -> Self {
        Self {
            mat: self.mat.t().mapv(|c| c.conj()),
        }
    }

    pub fn scaled(&self, factor: Complex64) -> Self {
        Self {
            mat: self.mat.mapv(|c| c * factor),
        }
    }

    /// Operator sum. Panics if the dimensions differ.
    pub fn add(&self, rhs: &Self) -> Self {
        assert_eq!(
            self.dim(),
            rhs.dim(),
            "FockOperator::add dimension mismatch"
        );
        Self {
            mat: &self.mat + &rhs.mat,
        }
    }

    /// Operator difference. Panics if the dimensions differ.
    pub fn sub(&self, rhs: &Self) -> Self {
        assert_eq!(
            self.dim(),
            rhs.dim(),
            "FockOperator::sub dimension mismatch"
        );
        Self {
            mat: &self.mat - &rhs.mat,
        }
    }

    /// Largest entry magnitude, used as a cheap residual norm.
    pub fn max_abs(&self) -> f64 {
        self.mat.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Induced 1-norm (maximum absolute column sum).
    pub fn one_norm(&self) -> f64 {
        let mut best = 0.0_f64;
        for j in 0..self.dim() {
            let s: f64 = self.mat.column(j).iter().map(|c| c.norm()).sum();
            best = best.max(s);
        }
        best
    }

    /// The diagonal entry at occupation `n`.
    pub fn diagonal_entry(&self, n: usize) -> Complex64 {
        self.mat[(n, n)]
    }
}

/// Commutator `[a, b] = ab − ba`. Panics if the dimensions differ.
pub fn commutator(a: &FockOperator, b: &FockOperator) -> FockOperator {
    a.dot(b).sub(&b.dot(a))
}

/// Truncated annihilation operator: `a|n⟩ = √n |n−1⟩`.
pub fn annihilator(dim: usize) -> Result<FockOperator, Error> {
    if dim < 2 {
        return Err(Error::DimensionTooSmall { min: 2, got: dim });
    }
    let mut op = FockOperator::zeros(dim);
    for n in 1..dim {
        op.mat[(n - 1, n)] = Complex64::new((n as f64).sqrt(), 0.0);
    }
    Ok(op)
}

/// Truncated creation operator: `a†|n⟩ = √(n+1) |n+1⟩` with `a†|dim−1⟩ = 0`.
pub fn creation(dim: usize) -> Result<FockOperator, Error> {
    Ok(annihilator(dim)?.adjoint())
}

/// Number operator `n̂ = a†a`, exactly `diag(0, 1, …, dim−1)`.
pub fn number_operator(dim: usize) -> FockOperator {
    FockOperator::from_diagonal_fn(dim, |n| Complex64::new(n as f64, 0.0))
}

/// Canonical coherent state truncated to `dim` levels:
/// `c_n = e^{−|α|²/2} αⁿ / √(n!)`, evaluated by the stable recurrence
/// `c_n = c_{n−1} · α / √n`.
///
/// The vector is *not* renormalized after truncation, so its norm falls
/// short of 1 by exactly the discarded tail weight.
pub fn coherent_state(alpha: Complex64, dim: usize) -> Result<FockVector, Error> {
    if dim < 2 {
        return Err(Error::DimensionTooSmall { min: 2, got: dim });
    }
    let mut v = FockVector::zeros(dim);
    let mut c = Complex64::new((-0.5 * alpha.norm_sqr()).exp(), 0.0);
    v.amp[0] = c;
    for n in 1..dim {
        c = c * alpha / (n as f64).sqrt();
        v.amp[n] = c;
    }
    Ok(v)
}

/// A pure state of two modes with equal local dimension, stored as a flat
/// amplitude list indexed by `n₁·dim + n₂`.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoModeVector {
    dim: usize,
    amp: Array1<Complex64>,
}

impl TwoModeVector {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            amp: Array1::zeros(dim * dim),
        }
    }

    /// Local dimension of each mode.
    pub fn local_dim(&self) -> usize {
        self.dim
    }

    pub fn amplitudes(&self) -> &Array1<Complex64> {
        &self.amp
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amp.iter().map(|c| c.norm_sqr()).sum()
    }

    pub fn scaled(&self, factor: Complex64) -> Self {
        Self {
            dim: self.dim,
            amp: self.amp.mapv(|c| c * factor),
        }
    }

    /// Componentwise sum. Panics if the local dimensions differ.
    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim, "TwoModeVector::add dimension mismatch");
        Self {
            dim: self.dim,
            amp: &self.amp + &other.amp,
        }
    }

    /// Purity `Tr ρ₁²` of the normalized reduced state of the first mode.
    ///
    /// Viewing the amplitudes as a `dim × dim` matrix `M`, the unnormalized
    /// reduced density matrix is `M M†`; the returned value is
    /// `Tr[(MM†)²] / (Tr MM†)²`, which is 1 for product states and `1/dim`
    /// for maximally mixed reductions.
    pub fn reduced_purity(&self) -> Result<f64, Error> {
        let norm_sqr = self.norm_sqr();
        if norm_sqr <= 1e-300 {
            return Err(Error::NullState {
                norm_sqr,
                limit: 1e-300,
            });
        }
        let m = self
            .amp
            .view()
            .into_shape_with_order((self.dim, self.dim))
            .expect("amplitude length is dim²");
        let rho = m.dot(&m.t().mapv(|c| c.conj()));
        // Tr ρ² = ‖ρ‖_F² for Hermitian ρ.
        let frob_sqr: f64 = rho.iter().map(|c| c.norm_sqr()).sum();
        Ok(frob_sqr / (norm_sqr * norm_sqr))
    }
}

/// Tensor product `|u⟩ ⊗ |v⟩` of two equal-dimension single-mode kets.
pub fn tensor_product(u: &FockVector, v: &FockVector) -> Result<TwoModeVector, Error> {
    if u.dim() != v.dim() {
        return Err(Error::DimensionMismatch {
            left: u.dim(),
            right: v.dim(),
        });
    }
    let dim = u.dim();
    let mut out = TwoModeVector::zeros(dim);
    for i in 0..dim {
        let ui = u.amp[i];
        if ui == Complex64::new(0.0, 0.0) {
            continue;
        }
        for j in 0..dim {
            out.amp[i * dim + j] = ui * v.amp[j];
        }
    }
    Ok(out)
}

// Padé order-13 coefficients for the scaling-and-squaring matrix
// exponential (numerator and denominator share them with alternating
// signs).
const PADE13: [f64; 14] = [
    64_764_752_532_480_000.0,
    32_382_376_266_240_000.0,
    7_771_770_303_897_600.0,
    1_187_353_796_428_800.0,
    129_060_195_264_000.0,
    10_559_470_521_600.0,
    670_442_572_800.0,
    33_522_128_640.0,
    1_323_241_920.0,
    40_840_800.0,
    960_960.0,
    16_380.0,
    182.0,
    1.0,
];

// 1-norm threshold below which the order-13 approximant is accurate to
// double precision without further scaling.
const PADE13_THETA: f64 = 5.371_920_351_148_152;

/// Dense matrix exponential by scaling and squaring with a Padé
/// approximant of order 13.
///
/// Accuracy is at machine-precision level for well-conditioned inputs;
/// `matrix_exponential` of the zero operator returns the identity exactly.
pub fn matrix_exponential(op: &FockOperator) -> FockOperator {
    let dim = op.dim();
    let norm = op.one_norm();
    let squarings = if norm > PADE13_THETA {
        (norm / PADE13_THETA).log2().ceil() as u32
    } else {
        0
    };
    let scale = Complex64::new((0.5_f64).powi(squarings as i32), 0.0);
    let a = op.scaled(scale);

    let ident = FockOperator::identity(dim);
    let a2 = a.dot(&a);
    let a4 = a2.dot(&a2);
    let a6 = a2.dot(&a4);

    let real = |x: f64| Complex64::new(x, 0.0);
    // U = A·(A6·(b13·A6 + b11·A4 + b9·A2) + b7·A6 + b5·A4 + b3·A2 + b1·I)
    let u_inner = a6
        .scaled(real(PADE13[13]))
        .add(&a4.scaled(real(PADE13[11])))
        .add(&a2.scaled(real(PADE13[9])));
    let u = a.dot(
        &a6.dot(&u_inner)
            .add(&a6.scaled(real(PADE13[7])))
            .add(&a4.scaled(real(PADE13[5])))
            .add(&a2.scaled(real(PADE13[3])))
            .add(&ident.scaled(real(PADE13[1]))),
    );
    // V = A6·(b12·A6 + b10·A4 + b8·A2) + b6·A6 + b4·A4 + b2·A2 + b0·I
    let v_inner = a6
        .scaled(real(PADE13[12]))
        .add(&a4.scaled(real(PADE13[10])))
        .add(&a2.scaled(real(PADE13[8])));
    let v = a6
        .dot(&v_inner)
        .add(&a6.scaled(real(PADE13[6])))
        .add(&a4.scaled(real(PADE13[4])))
        .add(&a2.scaled(real(PADE13[2])))
        .add(&ident.scaled(real(PADE13[0])));

    // exp(A) ≈ (V − U)⁻¹ (V + U), then undo the scaling by squaring.
    let mut result = FockOperator {
        mat: solve_linear(v.sub(&u).mat, v.add(&u).mat),
    };
    for _ in 0..squarings {
        result = result.dot(&result);
    }
    result
}

/// Solves `A X = B` for `X` by Gaussian elimination with partial pivoting.
///
/// Panics if `A` is exactly singular, which for the Padé denominator can
/// only happen on non-finite input.
fn solve_linear(mut a: Array2<Complex64>, mut b: Array2<Complex64>) -> Array2<Complex64> {
    let n = a.nrows();
    assert_eq!(a.ncols(), n, "solve_linear requires a square system");
    assert_eq!(b.nrows(), n, "solve_linear shape mismatch");
    let ncols = b.ncols();

    for k in 0..n {
        // Partial pivot on the largest remaining entry in column k.
        let mut pivot_row = k;
        let mut pivot_mag = a[(k, k)].norm();
        for r in (k + 1)..n {
            let mag = a[(r, k)].norm();
            if mag > pivot_mag {
                pivot_mag = mag;
                pivot_row = r;
            }
        }
        assert!(pivot_mag > 0.0, "singular matrix in solve_linear");
        if pivot_row != k {
            for c in 0..n {
                a.swap((k, c), (pivot_row, c));
            }
            for c in 0..ncols {
                b.swap((k, c), (pivot_row, c));
            }
        }

        let pivot = a[(k, k)];
        for r in (k + 1)..n {
            let factor = a[(r, k)] / pivot;
            if factor == Complex64::new(0.0, 0.0) {
                continue;
            }
            for c in k..n {
                let akc = a[(k, c)];
                a[(r, c)] -= factor * akc;
            }
            for c in 0..ncols {
                let bkc = b[(k, c)];
                b[(r, c)] -= factor * bkc;
            }
        }
    }

    // Back substitution, reusing b as the solution.
    for k in (0..n).rev() {
        let pivot = a[(k, k)];
        for c in 0..ncols {
            let mut s = b[(k, c)];
            for j in (k + 1)..n {
                s -= a[(k, j)] * b[(j, c)];
            }
            b[(k, c)] = s / pivot;
        }
    }
    b
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn ladder_action_is_exact() {
        let dim = 12;
        let a = annihilator(dim).unwrap();
        let ad = creation(dim).unwrap();
        for n in 0..dim {
            let ket = FockVector::basis_state(dim, n).unwrap();
            let lowered = a.apply(&ket).unwrap();
            if n == 0 {
                assert_eq!(lowered.norm_sqr(), 0.0);
            } else {
                let expected = FockVector::basis_state(dim, n - 1)
                    .unwrap()
                    .scaled(c((n as f64).sqrt(), 0.0));
                assert_eq!(lowered, expected);
            }
            let raised = ad.apply(&ket).unwrap();
            if n == dim - 1 {
                assert_eq!(raised.norm_sqr(), 0.0);
            } else {
                let expected = FockVector::basis_state(dim, n + 1)
                    .unwrap()
                    .scaled(c(((n + 1) as f64).sqrt(), 0.0));
                assert_eq!(raised, expected);
            }
        }
    }

    #[test]
    fn commutator_shows_truncation_artifact() {
        let dim = 4;
        let a = annihilator(dim).unwrap();
        let ad = creation(dim).unwrap();
        let comm = commutator(&a, &ad);
        for i in 0..dim {
            for j in 0..dim {
                let expected = if i == j {
                    if i == dim - 1 {
                        c(1.0 - dim as f64, 0.0)
                    } else {
                        c(1.0, 0.0)
                    }
                } else {
                    c(0.0, 0.0)
                };
                // √n·√n reintroduces one rounding per entry, so compare to
                // a couple of ulps rather than bitwise.
                assert_abs_diff_eq!(
                    (comm.matrix()[(i, j)] - expected).norm(),
                    0.0,
                    epsilon = 1e-14
                );
            }
        }
    }

    #[test]
    fn coherent_state_matches_reference_amplitudes() {
        let v = coherent_state(c(1.0, 0.0), 64).unwrap();
        // e^{−1/2} to full double precision.
        assert_abs_diff_eq!(v.amplitudes()[0].re, 0.6065306597126334, epsilon = 1e-15);
        assert_eq!(v.amplitudes()[0].im, 0.0);
        // The recurrence gives c₁ = c₀·α/√1 exactly.
        assert_eq!(v.amplitudes()[1], v.amplitudes()[0]);
        // Far from the truncation edge the norm is 1 up to the tail.
        assert_abs_diff_eq!(v.norm_sqr(), 1.0, epsilon = 1e-13);
    }

    #[test]
    fn coherent_state_recurrence_matches_direct_formula() {
        let alpha = c(0.7, -0.3);
        let v = coherent_state(alpha, 24).unwrap();
        let mut fact = 1.0;
        for n in 0..24 {
            if n > 0 {
                fact *= n as f64;
            }
            let direct = alpha.powu(n as u32) * (-0.5 * alpha.norm_sqr()).exp() / fact.sqrt();
            assert_abs_diff_eq!((v.amplitudes()[n] - direct).norm(), 0.0, epsilon = 1e-15);
        }
    }

    #[test]
    fn tail_mass_detects_edge_pressure() {
        let comfortable = coherent_state(c(1.0, 0.0), 64).unwrap();
        assert!(comfortable.tail_mass(DEFAULT_TAIL_LEN) < TAIL_MASS_LIMIT);
        let squeezed = coherent_state(c(3.5, 0.0), 16).unwrap();
        assert!(squeezed.tail_mass(DEFAULT_TAIL_LEN) > 1e-3);
    }

    #[test]
    fn inner_product_is_conjugate_symmetric() {
        let u = coherent_state(c(0.4, 0.9), 32).unwrap();
        let v = coherent_state(c(-1.1, 0.2), 32).unwrap();
        let uv = inner_product(&u, &v).unwrap();
        let vu = inner_product(&v, &u).unwrap();
        assert_eq!(uv, vu.conj());
    }

    #[test]
    fn matrix_exponential_of_zero_is_identity_exactly() {
        let dim = 16;
        let exp = matrix_exponential(&FockOperator::zeros(dim));
        assert_eq!(exp, FockOperator::identity(dim));
    }

    #[test]
    fn matrix_exponential_matches_diagonal_closed_form() {
        let dim = 8;
        let op = FockOperator::from_diagonal_fn(dim, |n| c(0.3 * n as f64, -0.1 * n as f64));
        let exp = matrix_exponential(&op);
        for n in 0..dim {
            let expected = c(0.3 * n as f64, -0.1 * n as f64).exp();
            assert_abs_diff_eq!(
                (exp.diagonal_entry(n) - expected).norm(),
                0.0,
                epsilon = 1e-12
            );
        }
    }

    #[test]
    fn displacement_exponential_reproduces_coherent_state() {
        let dim = 64;
        let alpha = c(2.0, 0.0);
        let a = annihilator(dim).unwrap();
        let ad = creation(dim).unwrap();
        let generator = ad.scaled(alpha).sub(&a.scaled(alpha.conj()));
        let disp = matrix_exponential(&generator);
        let from_exp = disp
            .apply(&FockVector::basis_state(dim, 0).unwrap())
            .unwrap();
        let direct = coherent_state(alpha, dim).unwrap();
        assert!(from_exp.sub(&direct).norm() < 1e-11);
    }

    #[test]
    fn displacement_exponential_is_unitary() {
        let dim = 64;
        let alpha = c(1.3, 0.8);
        let a = annihilator(dim).unwrap();
        let ad = creation(dim).unwrap();
        let generator = ad.scaled(alpha).sub(&a.scaled(alpha.conj()));
        let disp = matrix_exponential(&generator);
        let defect = disp.dot(&disp.adjoint()).sub(&FockOperator::identity(dim));
        assert!(defect.max_abs() < 1e-11);
    }

    #[test]
    fn tensor_product_and_purity_classify_product_and_bell_states() {
        let dim = 4;
        let zero = FockVector::basis_state(dim, 0).unwrap();
        let one = FockVector::basis_state(dim, 1).unwrap();

        let product = tensor_product(&zero, &one).unwrap();
        assert_abs_diff_eq!(product.reduced_purity().unwrap(), 1.0, epsilon = 1e-15);

        let bell = tensor_product(&zero, &zero)
            .unwrap()
            .add(&tensor_product(&one, &one).unwrap());
        assert_abs_diff_eq!(bell.reduced_purity().unwrap(), 0.5, epsilon = 1e-15);
    }

    #[test]
    fn dimension_errors_are_reported() {
        assert!(matches!(
            annihilator(1),
            Err(Error::DimensionTooSmall { min: 2, got: 1 })
        ));
        assert!(matches!(
            FockVector::basis_state(3, 3),
            Err(Error::BasisIndexOutOfRange { index: 3, dim: 3 })
        ));
        let u = FockVector::zeros(3);
        let v = FockVector::zeros(4);
        assert!(matches!(
            inner_product(&u, &v),
            Err(Error::DimensionMismatch { left: 3, right: 4 })
        ));
    }
}
