//! Local projective measurements, post-measurement ensembles, the Holevo
//! quantity, and joint-measurement classical statistics.
//!
//! Only rank-1 projective measurements are implemented; every construction
//! in scope uses them.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::qmath::{
    self, hermitian_deviation, identity, max_entry_diff, projector, shannon_entropy_raw, CMatrix,
    CVector, ProbabilityVector, C64, ENTROPY_NEG_TOL, PROB_FLOOR,
};
use crate::states::{BipartiteState, DensityMatrix};

/// An ordered orthonormal basis {|a_i⟩}; the columns of a unitary. Defines a
/// rank-1 projective measurement.
#[derive(Debug, Clone)]
pub struct ProjectiveBasis {
    dim: usize,
    matrix: CMatrix,
}

impl ProjectiveBasis {
    /// Validate that the columns are pairwise orthonormal (within 1e-10) and
    /// complete.
    pub fn new(matrix: CMatrix) -> Result<Self> {
        let dim = matrix.nrows();
        if matrix.ncols() != dim || dim == 0 {
            return Err(Error::DimensionMismatch(format!(
                "basis matrix must be square and nonempty, got {}×{}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        qmath::ensure_finite(&matrix)?;
        let gram = matrix.adjoint() * &matrix;
        let dev = max_entry_diff(&gram, &identity(dim));
        if dev > 1e-10 {
            return Err(Error::NotOrthonormal(dev));
        }
        Ok(Self { dim, matrix })
    }

    /// Wrap a matrix already known to be unitary (parameterized
    /// constructions); skips validation.
    pub fn from_unitary_unchecked(matrix: CMatrix) -> Self {
        let dim = matrix.nrows();
        debug_assert_eq!(matrix.ncols(), dim);
        Self { dim, matrix }
    }

    /// The computational basis {|0⟩, …, |d−1⟩}.
    pub fn computational(dim: usize) -> Self {
        Self::from_unitary_unchecked(identity(dim))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    /// The i-th basis vector (owned copy of column i).
    pub fn vector(&self, i: usize) -> CVector {
        self.matrix.column(i).into_owned()
    }

    /// Canonical representative of the projector set: each vector's first
    /// component of magnitude above 1e-9 is made real positive, then vectors
    /// are ordered by lexicographic comparison of their components rounded
    /// to 1e-9.
    pub fn canonicalized(&self) -> Self {
        let mut m = self.matrix.clone();
        for j in 0..self.dim {
            let mut col = m.column_mut(j);
            if let Some(lead) = col.iter().find(|z| z.norm() > 1e-9) {
                let phase = lead.conj() / lead.norm();
                for z in col.iter_mut() {
                    *z *= phase;
                }
            }
        }
        let key = |col: usize| -> Vec<(i64, i64)> {
            (0..self.dim)
                .map(|r| {
                    let z = m[(r, col)];
                    ((z.re * 1e9).round() as i64, (z.im * 1e9).round() as i64)
                })
                .collect()
        };
        let mut order: Vec<usize> = (0..self.dim).collect();
        order.sort_by_key(|&a| key(a));
        let mut out = CMatrix::zeros(self.dim, self.dim);
        for (dst, &src) in order.iter().enumerate() {
            out.set_column(dst, &m.column(src));
        }
        Self::from_unitary_unchecked(out)
    }

    /// True when both bases define the same set of rank-1 projectors: a
    /// bijection of vectors with |⟨a_i|b_j⟩| ≥ 1 − tol.
    pub fn is_equivalent(&self, other: &Self, tol: f64) -> bool {
        if self.dim != other.dim {
            return false;
        }
        let overlap = self.matrix.adjoint() * &other.matrix;
        let mut used = vec![false; self.dim];
        for i in 0..self.dim {
            let mut found = false;
            for j in 0..self.dim {
                if !used[j] && overlap[(i, j)].norm() >= 1.0 - tol {
                    used[j] = true;
                    found = true;
                    break;
                }
            }
            if !found {
                return false;
            }
        }
        true
    }
}

/// Outcome probabilities {p_i} with conditional states {ρ_i^B} from a local
/// measurement on side A.
///
/// Outcomes with p_i ≤ 1e-12 are flagged as suppressed; they carry a valid
/// placeholder state (I/d_B) that is excluded from all entropy sums.
#[derive(Debug, Clone)]
pub struct MeasurementEnsemble {
    probs: ProbabilityVector,
    conditional_states: Vec<DensityMatrix>,
    suppressed: Vec<bool>,
}

impl MeasurementEnsemble {
    pub fn probs(&self) -> &ProbabilityVector {
        &self.probs
    }

    pub fn conditional_states(&self) -> &[DensityMatrix] {
        &self.conditional_states
    }

    /// Flag per outcome: true when the outcome has probability ≤ 1e-12 and
    /// its conditional state is a placeholder.
    pub fn suppressed(&self) -> &[bool] {
        &self.suppressed
    }

    pub fn len(&self) -> usize {
        self.conditional_states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.conditional_states.is_empty()
    }

    /// Ensemble average Σ_i p_i ρ_i^B.
    pub fn average_state(&self) -> CMatrix {
        let d = self.conditional_states[0].dim();
        let mut avg = CMatrix::zeros(d, d);
        for (i, s) in self.conditional_states.iter().enumerate() {
            if !self.suppressed[i] {
                avg += s.matrix() * C64::new(self.probs[i], 0.0);
            }
        }
        avg
    }
}

/// Unnormalized conditional block ⟨a|ρ|a⟩ on side B for a ket |a⟩ of side A.
pub(crate) fn conditional_block(state: &BipartiteState, ket: &CVector) -> CMatrix {
    let (da, db) = (state.d_a(), state.d_b());
    let rho = state.matrix();
    let mut out = CMatrix::zeros(db, db);
    for k in 0..da {
        for l in 0..da {
            let w = ket[k].conj() * ket[l];
            if w.norm_sqr() == 0.0 {
                continue;
            }
            let block = rho.view((k * db, l * db), (db, db));
            for n in 0..db {
                for m in 0..db {
                    out[(m, n)] += w * block[(m, n)];
                }
            }
        }
    }
    out
}

/// Measure side A in the given basis: p_i = tr((|a_i⟩⟨a_i| ⊗ I)ρ) and
/// ρ_i^B = ⟨a_i|ρ|a_i⟩ / p_i.
pub fn measure_side_a(
    state: &BipartiteState,
    basis: &ProjectiveBasis,
) -> Result<MeasurementEnsemble> {
    if basis.dim() != state.d_a() {
        return Err(Error::DimensionMismatch(format!(
            "basis dimension {} does not match d_A = {}",
            basis.dim(),
            state.d_a()
        )));
    }
    let d_a = state.d_a();
    let mut probs = Vec::with_capacity(d_a);
    let mut conds = Vec::with_capacity(d_a);
    let mut suppressed = Vec::with_capacity(d_a);
    for i in 0..d_a {
        let block = conditional_block(state, &basis.vector(i));
        let p = qmath::trace_re(&block).max(0.0);
        probs.push(p);
        if p > PROB_FLOOR {
            // Hermitize away accumulation noise before validation.
            let sym = (&block + block.adjoint()) * C64::new(0.5 / p, 0.0);
            conds.push(DensityMatrix::new(sym)?);
            suppressed.push(false);
        } else {
            conds.push(DensityMatrix::maximally_mixed(state.d_b()));
            suppressed.push(true);
        }
    }
    Ok(MeasurementEnsemble {
        probs: ProbabilityVector::new(probs)?,
        conditional_states: conds,
        suppressed,
    })
}

/// Holevo quantity χ = S(Σ_i p_i ρ_i^B) − Σ_i p_i S(ρ_i^B) in bits, clamped
/// to ≥ 0.
pub fn holevo(ensemble: &MeasurementEnsemble) -> f64 {
    let avg = ensemble.average_state();
    let s_avg = qmath::von_neumann_entropy(&avg).expect("ensemble average is PSD");
    let mut acc = 0.0;
    for (i, s) in ensemble.conditional_states().iter().enumerate() {
        if !ensemble.suppressed()[i] {
            acc += ensemble.probs()[i] * s.entropy();
        }
    }
    (s_avg - acc).max(0.0)
}

/// Fast path for the optimizer: χ for a basis given as a unitary matrix,
/// with S(ρ_B) passed in (the ensemble average is always the B marginal).
pub(crate) fn holevo_for_basis(state: &BipartiteState, basis: &CMatrix, s_b: f64) -> f64 {
    let d_a = state.d_a();
    let mut acc = 0.0;
    for i in 0..d_a {
        let ket = basis.column(i).into_owned();
        let block = conditional_block(state, &ket);
        let p = qmath::trace_re(&block);
        if p > PROB_FLOOR {
            let s = qmath::entropy_of_normalized_block(&block, p)
                .expect("conditional blocks of valid states are PSD");
            acc += p * s;
        }
    }
    (s_b - acc).max(0.0)
}

/// Outcome probabilities of measuring side A in a basis.
pub(crate) fn outcome_probs(state: &BipartiteState, basis: &ProjectiveBasis) -> Vec<f64> {
    (0..state.d_a())
        .map(|i| qmath::trace_re(&conditional_block(state, &basis.vector(i))).max(0.0))
        .collect()
}

/// Joint outcome distribution p_ij of local measurements on both sides, with
/// cached marginals.
#[derive(Debug, Clone)]
pub struct JointDistribution {
    p: DMatrix<f64>,
    marginal_a: Vec<f64>,
    marginal_b: Vec<f64>,
}

impl JointDistribution {
    pub fn new(p: DMatrix<f64>) -> Result<Self> {
        let mut total = 0.0;
        for &x in p.iter() {
            if !x.is_finite() || x < -PROB_FLOOR {
                return Err(Error::InvalidProbability(format!(
                    "joint entry {x} negative or non-finite"
                )));
            }
            total += x.max(0.0);
        }
        if (total - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidProbability(format!(
                "joint distribution sums to {total}"
            )));
        }
        let p = p.map(|x| x.max(0.0));
        let marginal_a = (0..p.nrows()).map(|i| p.row(i).sum()).collect();
        let marginal_b = (0..p.ncols()).map(|j| p.column(j).sum()).collect();
        Ok(Self {
            p,
            marginal_a,
            marginal_b,
        })
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.p
    }

    pub fn marginal_a(&self) -> &[f64] {
        &self.marginal_a
    }

    pub fn marginal_b(&self) -> &[f64] {
        &self.marginal_b
    }
}

/// Joint distribution p_ij = tr((|a_i⟩⟨a_i| ⊗ |b_j⟩⟨b_j|) ρ).
pub fn measure_joint(
    state: &BipartiteState,
    basis_a: &ProjectiveBasis,
    basis_b: &ProjectiveBasis,
) -> Result<JointDistribution> {
    if basis_a.dim() != state.d_a() || basis_b.dim() != state.d_b() {
        return Err(Error::DimensionMismatch(format!(
            "bases ({}, {}) do not match dims ({}, {})",
            basis_a.dim(),
            basis_b.dim(),
            state.d_a(),
            state.d_b()
        )));
    }
    let p = joint_probs(state, basis_a.matrix(), basis_b.matrix());
    JointDistribution::new(p)
}

pub(crate) fn joint_probs(
    state: &BipartiteState,
    basis_a: &CMatrix,
    basis_b: &CMatrix,
) -> DMatrix<f64> {
    let (da, db) = (state.d_a(), state.d_b());
    let mut p = DMatrix::<f64>::zeros(da, db);
    for i in 0..da {
        let ket = basis_a.column(i).into_owned();
        let block = conditional_block(state, &ket);
        for j in 0..db {
            let b = basis_b.column(j);
            let mut acc = C64::new(0.0, 0.0);
            for n in 0..db {
                for m in 0..db {
                    acc += b[m].conj() * block[(m, n)] * b[n];
                }
            }
            p[(i, j)] = acc.re.max(0.0);
        }
    }
    p
}

/// Classical mutual information I = H{p_i^a} + H{p_j^b} − H{p_ij} in bits,
/// clamped to ≥ 0.
pub fn classical_mutual_information(j: &JointDistribution) -> f64 {
    let h_a = shannon_entropy_raw(j.marginal_a());
    let h_b = shannon_entropy_raw(j.marginal_b());
    let joint: Vec<f64> = j.matrix().iter().copied().collect();
    let h_ab = shannon_entropy_raw(&joint);
    (h_a + h_b - h_ab).max(0.0)
}

/// Fast path for the optimizer: classical mutual information of a joint
/// measurement given as two unitary matrices.
pub(crate) fn mutual_info_for_bases(state: &BipartiteState, ba: &CMatrix, bb: &CMatrix) -> f64 {
    let p = joint_probs(state, ba, bb);
    let ha = shannon_entropy_raw(&(0..p.nrows()).map(|i| p.row(i).sum()).collect::<Vec<_>>());
    let hb = shannon_entropy_raw(
        &(0..p.ncols())
            .map(|j| p.column(j).sum())
            .collect::<Vec<_>>(),
    );
    let joint: Vec<f64> = p.iter().copied().collect();
    (ha + hb - shannon_entropy_raw(&joint)).max(0.0)
}

/// Dephase a bipartite state in a side-A basis:
/// ρ ↦ Σ_i |a_i⟩⟨a_i| ⊗ ⟨a_i|ρ|a_i⟩. The result is a CQ state.
pub fn dephase_side_a(state: &BipartiteState, basis: &ProjectiveBasis) -> Result<BipartiteState> {
    if basis.dim() != state.d_a() {
        return Err(Error::DimensionMismatch(format!(
            "basis dimension {} does not match d_A = {}",
            basis.dim(),
            state.d_a()
        )));
    }
    let total = state.dim();
    let mut m = CMatrix::zeros(total, total);
    for i in 0..state.d_a() {
        let ket = basis.vector(i);
        let block = conditional_block(state, &ket);
        let sym = (&block + block.adjoint()) * C64::new(0.5, 0.0);
        m += qmath::tensor_product_with_max(&projector(&ket), &sym, total)?;
    }
    // Trace and Hermiticity are preserved exactly up to rounding.
    debug_assert!(hermitian_deviation(&m) < 1e-10);
    BipartiteState::from_matrix(m, state.d_a(), state.d_b())
}

/// Clamp a small negative entropic result to zero; values below −1e-9
/// signal broken inputs.
pub fn clamp_entropic(x: f64) -> Result<f64> {
    if x < -ENTROPY_NEG_TOL {
        return Err(Error::RejectedInput(format!(
            "entropic quantity {x} below −1e-9"
        )));
    }
    Ok(x.max(0.0))
}
