//! Complex dense linear algebra and entropy kernels underlying all other
//! modules.
//!
//! Everything here is a pure function of immutable inputs; all entropies are
//! in bits (log base 2), with the convention 0·log₂0 = 0.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Complex scalar used throughout.
pub type C64 = Complex64;
/// Dense complex matrix (the representation of every operator).
pub type CMatrix = DMatrix<C64>;
/// Dense complex vector (kets).
pub type CVector = DVector<C64>;

/// Default cap on the total Hilbert-space dimension d_A·d_B.
///
/// Dense eigendecompositions run inside the optimizer inner loop, so the
/// library refuses to build operators past this size unless told otherwise.
pub const DEFAULT_MAX_DIM: usize = 64;

/// Eigenvalues in [−PSD_TOL, 0) are clamped to zero; anything lower is an
/// error. Double-precision eigensolver noise on 64×64 Hermitian matrices
/// stays well below this.
pub const PSD_TOL: f64 = 1e-10;

/// Measurement outcomes with probability at or below this floor are treated
/// as never occurring (their conditional states are excluded from entropy
/// sums by the 0·log 0 convention).
pub const PROB_FLOOR: f64 = 1e-12;

/// Small negative entropic results above this bound are clamped to zero;
/// anything below signals broken inputs.
pub const ENTROPY_NEG_TOL: f64 = 1e-9;

/// Reject matrices containing NaN or infinite entries.
pub fn ensure_finite(m: &CMatrix) -> Result<()> {
    for col in 0..m.ncols() {
        for row in 0..m.nrows() {
            let z = m[(row, col)];
            if !z.re.is_finite() || !z.im.is_finite() {
                return Err(Error::NonFinite { row, col });
            }
        }
    }
    Ok(())
}

/// d×d identity.
pub fn identity(d: usize) -> CMatrix {
    CMatrix::identity(d, d)
}

/// The three Pauli matrices (σ_x, σ_y, σ_z).
pub fn pauli_matrices() -> [CMatrix; 3] {
    let i = C64::new(0.0, 1.0);
    let o = C64::new(0.0, 0.0);
    let one = C64::new(1.0, 0.0);
    [
        CMatrix::from_row_slice(2, 2, &[o, one, one, o]),
        CMatrix::from_row_slice(2, 2, &[o, -i, i, o]),
        CMatrix::from_row_slice(2, 2, &[one, o, o, -one]),
    ]
}

/// Swap operator P = Σ_{ij} |i⟩⟨j| ⊗ |j⟩⟨i| on a d×d bipartite space.
pub fn swap_operator(d: usize) -> CMatrix {
    let mut p = CMatrix::zeros(d * d, d * d);
    for i in 0..d {
        for j in 0..d {
            p[(i * d + j, j * d + i)] = C64::new(1.0, 0.0);
        }
    }
    p
}

/// Computational basis ket |i⟩ in dimension d.
pub fn basis_ket(d: usize, i: usize) -> CVector {
    assert!(i < d, "basis index out of range");
    let mut v = CVector::zeros(d);
    v[i] = C64::new(1.0, 0.0);
    v
}

/// Rank-1 projector |v⟩⟨v|.
pub fn projector(v: &CVector) -> CMatrix {
    v * v.adjoint()
}

/// Real part of the trace.
pub fn trace_re(m: &CMatrix) -> f64 {
    (0..m.nrows().min(m.ncols())).map(|i| m[(i, i)].re).sum()
}

/// Largest entrywise absolute difference between two matrices.
pub fn max_entry_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    assert_eq!(a.shape(), b.shape(), "shape mismatch");
    let mut worst = 0.0f64;
    for c in 0..a.ncols() {
        for r in 0..a.nrows() {
            worst = worst.max((a[(r, c)] - b[(r, c)]).norm());
        }
    }
    worst
}

/// Largest deviation of a matrix from Hermitian symmetry.
pub fn hermitian_deviation(m: &CMatrix) -> f64 {
    let mut worst = 0.0f64;
    for c in 0..m.ncols() {
        for r in 0..=c {
            worst = worst.max((m[(r, c)] - m[(c, r)].conj()).norm());
        }
    }
    worst
}

/// Kronecker product with the default dimension cap.
pub fn tensor_product(a: &CMatrix, b: &CMatrix) -> Result<CMatrix> {
    tensor_product_with_max(a, b, DEFAULT_MAX_DIM)
}

/// Kronecker product, rejecting results whose row dimension exceeds
/// `max_dim`. Block (i,j) of the result equals a[i,j]·b.
pub fn tensor_product_with_max(a: &CMatrix, b: &CMatrix, max_dim: usize) -> Result<CMatrix> {
    let rows = a.nrows().checked_mul(b.nrows());
    let cols = a.ncols().checked_mul(b.ncols());
    match (rows, cols) {
        (Some(r), Some(c)) if r <= max_dim && c <= max_dim => Ok(a.kronecker(b)),
        (Some(r), Some(_)) => Err(Error::DimensionOverflow {
            got: r,
            max: max_dim,
        }),
        _ => Err(Error::DimensionOverflow {
            got: usize::MAX,
            max: max_dim,
        }),
    }
}

/// Which subsystem of a bipartite operator to keep.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subsystem {
    A,
    B,
}

/// Partial trace of a (d_A·d_B)×(d_A·d_B) operator. Keeps the tagged
/// subsystem; the trace is preserved.
pub fn partial_trace(m: &CMatrix, dims: (usize, usize), keep: Subsystem) -> Result<CMatrix> {
    let (da, db) = dims;
    let n = da * db;
    if m.nrows() != n || m.ncols() != n {
        return Err(Error::DimensionMismatch(format!(
            "partial trace expects a {n}×{n} matrix for dims ({da}, {db}), got {}×{}",
            m.nrows(),
            m.ncols()
        )));
    }
    match keep {
        Subsystem::A => {
            let mut out = CMatrix::zeros(da, da);
            for k in 0..da {
                for l in 0..da {
                    let mut acc = C64::new(0.0, 0.0);
                    for j in 0..db {
                        acc += m[(k * db + j, l * db + j)];
                    }
                    out[(k, l)] = acc;
                }
            }
            Ok(out)
        }
        Subsystem::B => {
            let mut out = CMatrix::zeros(db, db);
            for k in 0..db {
                for l in 0..db {
                    let mut acc = C64::new(0.0, 0.0);
                    for i in 0..da {
                        acc += m[(i * db + k, i * db + l)];
                    }
                    out[(k, l)] = acc;
                }
            }
            Ok(out)
        }
    }
}

/// Eigendecomposition of a Hermitian matrix, eigenvalues ascending and
/// eigenvectors as the columns of a unitary.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: CMatrix,
}

/// Full Hermitian eigendecomposition (values ascending).
pub fn eigh(m: &CMatrix) -> Result<HermitianEigen> {
    if m.nrows() != m.ncols() {
        return Err(Error::DimensionMismatch(format!(
            "eigendecomposition expects a square matrix, got {}×{}",
            m.nrows(),
            m.ncols()
        )));
    }
    ensure_finite(m)?;
    let se = m.clone().symmetric_eigen();
    let d = m.nrows();
    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&i, &j| se.eigenvalues[i].total_cmp(&se.eigenvalues[j]));
    let eigenvalues: Vec<f64> = order.iter().map(|&i| se.eigenvalues[i]).collect();
    let mut eigenvectors = CMatrix::zeros(d, d);
    for (dst, &src) in order.iter().enumerate() {
        eigenvectors.set_column(dst, &se.eigenvectors.column(src));
    }
    Ok(HermitianEigen {
        eigenvalues,
        eigenvectors,
    })
}

/// Eigenvalues only, ascending. Dispatches to a closed form for 1×1 and 2×2
/// matrices (the hot sizes inside the optimizer loop).
pub fn hermitian_eigenvalues(m: &CMatrix) -> Result<Vec<f64>> {
    match m.nrows() {
        1 if m.ncols() == 1 => Ok(vec![m[(0, 0)].re]),
        2 if m.ncols() == 2 => {
            let a = m[(0, 0)].re;
            let d = m[(1, 1)].re;
            let half_tr = 0.5 * (a + d);
            let disc = (0.25 * (a - d) * (a - d) + m[(0, 1)].norm_sqr()).sqrt();
            Ok(vec![half_tr - disc, half_tr + disc])
        }
        n if n == m.ncols() => {
            ensure_finite(m)?;
            let mut ev: Vec<f64> = m.symmetric_eigenvalues().iter().copied().collect();
            ev.sort_by(f64::total_cmp);
            Ok(ev)
        }
        _ => Err(Error::DimensionMismatch(format!(
            "expected square matrix, got {}×{}",
            m.nrows(),
            m.ncols()
        ))),
    }
}

/// A discrete probability distribution.
///
/// Entries may arrive with negative noise down to −1e-12 (clamped to zero);
/// the total must be 1 within 1e-9.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbabilityVector {
    probs: Vec<f64>,
}

impl ProbabilityVector {
    pub fn new(raw: Vec<f64>) -> Result<Self> {
        let mut probs = raw;
        let mut sum = 0.0;
        for (i, p) in probs.iter_mut().enumerate() {
            if !p.is_finite() {
                return Err(Error::InvalidProbability(format!(
                    "entry {i} is not finite"
                )));
            }
            if *p < -PROB_FLOOR || *p > 1.0 + PROB_FLOOR {
                return Err(Error::InvalidProbability(format!(
                    "entry {i} = {p} outside [0, 1]"
                )));
            }
            *p = p.clamp(0.0, 1.0);
            sum += *p;
        }
        if (sum - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidProbability(format!(
                "sum = {sum}, expected 1"
            )));
        }
        Ok(Self { probs })
    }

    /// Uniform distribution on n outcomes.
    pub fn uniform(n: usize) -> Self {
        assert!(n > 0, "empty distribution");
        Self {
            probs: vec![1.0 / n as f64; n],
        }
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.probs
    }
}

impl std::ops::Index<usize> for ProbabilityVector {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.probs[i]
    }
}

/// Shannon entropy H = −Σ p log₂ p in bits.
pub fn shannon_entropy(p: &ProbabilityVector) -> f64 {
    shannon_entropy_raw(p.as_slice())
}

/// Shannon entropy of a raw nonnegative slice (0·log₂0 = 0).
pub fn shannon_entropy_raw(probs: &[f64]) -> f64 {
    let mut acc = 0.0;
    for &p in probs {
        if p > 0.0 {
            acc -= p * p.log2();
        }
    }
    acc
}

/// Binary entropy h(x) = −x log₂ x − (1−x) log₂ (1−x).
pub fn binary_entropy(x: f64) -> Result<f64> {
    if !(-PROB_FLOOR..=1.0 + PROB_FLOOR).contains(&x) {
        return Err(Error::InvalidProbability(format!("h({x}) outside [0, 1]")));
    }
    let x = x.clamp(0.0, 1.0);
    Ok(shannon_entropy_raw(&[x, 1.0 - x]))
}

/// Entropy in bits of a spectrum summing to ~1; clamps eigenvalues in
/// [−PSD_TOL, 0) to zero and rejects anything lower.
pub fn entropy_from_spectrum(eigenvalues: &[f64]) -> Result<f64> {
    let mut acc = 0.0;
    for &ev in eigenvalues {
        if ev < -PSD_TOL {
            return Err(Error::NotPsd(ev));
        }
        if ev > 0.0 {
            acc -= ev * ev.log2();
        }
    }
    Ok(acc.max(0.0))
}

/// Von Neumann entropy S(ρ) = −Σ λ log₂ λ of a Hermitian matrix in bits.
pub fn von_neumann_entropy(rho: &CMatrix) -> Result<f64> {
    let evs = hermitian_eigenvalues(rho)?;
    entropy_from_spectrum(&evs)
}

/// Entropy of `block / trace` where `block` is an unnormalized PSD block
/// with the given positive trace. Clamping happens in the unnormalized
/// spectrum, where eigensolver noise is absolute rather than amplified by
/// small outcome probabilities.
pub(crate) fn entropy_of_normalized_block(block: &CMatrix, trace: f64) -> Result<f64> {
    debug_assert!(trace > 0.0);
    let evs = hermitian_eigenvalues(block)?;
    let mut acc = 0.0;
    for ev in evs {
        if ev < -PSD_TOL {
            return Err(Error::NotPsd(ev));
        }
        let p = ev / trace;
        if p > 0.0 {
            acc -= p * p.log2();
        }
    }
    Ok(acc.max(0.0))
}
