//! Construction and validation of bipartite state families, plus
//! random-state sampling.

use nalgebra::DMatrix;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::measure::ProjectiveBasis;
use crate::qmath::{
    self, basis_ket, ensure_finite, hermitian_deviation, identity, pauli_matrices, projector,
    swap_operator, tensor_product_with_max, trace_re, CMatrix, CVector, ProbabilityVector, C64,
    DEFAULT_MAX_DIM, PSD_TOL,
};

/// A validated density matrix: Hermitian within 1e-10 per entry, unit trace
/// within 1e-9, smallest eigenvalue ≥ −1e-10.
#[derive(Debug, Clone)]
pub struct DensityMatrix {
    matrix: CMatrix,
    dim: usize,
    /// Spectrum cached from validation, ascending, clamped to [0, 1].
    eigenvalues: Vec<f64>,
}

impl DensityMatrix {
    pub fn new(matrix: CMatrix) -> Result<Self> {
        let dim = matrix.nrows();
        if matrix.ncols() != dim || dim == 0 {
            return Err(Error::DimensionMismatch(format!(
                "density matrix must be square and nonempty, got {}×{}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        ensure_finite(&matrix)?;
        let herm = hermitian_deviation(&matrix);
        if herm > 1e-10 {
            return Err(Error::NotHermitian(herm));
        }
        let tr = trace_re(&matrix);
        if (tr - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidTrace(tr));
        }
        let mut eigenvalues = qmath::hermitian_eigenvalues(&matrix)?;
        if let Some(&min) = eigenvalues.first() {
            if min < -PSD_TOL {
                return Err(Error::NotPsd(min));
            }
        }
        for ev in &mut eigenvalues {
            *ev = ev.clamp(0.0, 1.0);
        }
        Ok(Self {
            matrix,
            dim,
            eigenvalues,
        })
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Spectrum, ascending, clamped to [0, 1].
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    /// Von Neumann entropy in bits.
    pub fn entropy(&self) -> f64 {
        qmath::shannon_entropy_raw(&self.eigenvalues)
    }

    /// Maximally mixed state I/d.
    pub fn maximally_mixed(dim: usize) -> Self {
        let matrix = identity(dim) * C64::new(1.0 / dim as f64, 0.0);
        Self::new(matrix).expect("I/d is a valid state")
    }

    /// Pure state |v⟩⟨v| from a unit vector.
    pub fn pure(v: &CVector) -> Result<Self> {
        Self::new(projector(v))
    }
}

/// A density matrix with a declared bipartition d_A·d_B = dim.
///
/// Marginals and their entropies are computed once at construction; they are
/// reused heavily by the optimizer and the inequality checks.
#[derive(Debug, Clone)]
pub struct BipartiteState {
    rho: DensityMatrix,
    d_a: usize,
    d_b: usize,
    marginal_a: DensityMatrix,
    marginal_b: DensityMatrix,
}

impl BipartiteState {
    pub fn new(rho: DensityMatrix, d_a: usize, d_b: usize) -> Result<Self> {
        if d_a < 2 || d_b < 2 {
            return Err(Error::UnsupportedDimension {
                dim: d_a.min(d_b),
                reason: "both subsystems must have dimension at least 2",
            });
        }
        if d_a * d_b != rho.dim() {
            return Err(Error::DimensionMismatch(format!(
                "declared bipartition {d_a}×{d_b} does not match dimension {}",
                rho.dim()
            )));
        }
        let marginal_a = DensityMatrix::new(qmath::partial_trace(
            rho.matrix(),
            (d_a, d_b),
            qmath::Subsystem::A,
        )?)?;
        let marginal_b = DensityMatrix::new(qmath::partial_trace(
            rho.matrix(),
            (d_a, d_b),
            qmath::Subsystem::B,
        )?)?;
        Ok(Self {
            rho,
            d_a,
            d_b,
            marginal_a,
            marginal_b,
        })
    }

    pub fn from_matrix(matrix: CMatrix, d_a: usize, d_b: usize) -> Result<Self> {
        Self::new(DensityMatrix::new(matrix)?, d_a, d_b)
    }

    pub fn rho(&self) -> &DensityMatrix {
        &self.rho
    }

    pub fn matrix(&self) -> &CMatrix {
        self.rho.matrix()
    }

    pub fn d_a(&self) -> usize {
        self.d_a
    }

    pub fn d_b(&self) -> usize {
        self.d_b
    }

    pub fn dim(&self) -> usize {
        self.rho.dim()
    }

    pub fn marginal_a(&self) -> &DensityMatrix {
        &self.marginal_a
    }

    pub fn marginal_b(&self) -> &DensityMatrix {
        &self.marginal_b
    }

    /// Quantum mutual information S(ρ_A) + S(ρ_B) − S(ρ_AB) in bits.
    pub fn mutual_information(&self) -> f64 {
        self.marginal_a.entropy() + self.marginal_b.entropy() - self.rho.entropy()
    }
}

/// The four Bell states.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BellState {
    /// (|01⟩ − |10⟩)/√2, the singlet / EPR state.
    PsiMinus,
    /// (|01⟩ + |10⟩)/√2.
    PsiPlus,
    /// (|00⟩ + |11⟩)/√2.
    PhiPlus,
    /// (|00⟩ − |11⟩)/√2.
    PhiMinus,
}

impl BellState {
    pub fn ket(self) -> CVector {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let mut v = CVector::zeros(4);
        match self {
            BellState::PsiMinus => {
                v[1] = C64::new(s, 0.0);
                v[2] = C64::new(-s, 0.0);
            }
            BellState::PsiPlus => {
                v[1] = C64::new(s, 0.0);
                v[2] = C64::new(s, 0.0);
            }
            BellState::PhiPlus => {
                v[0] = C64::new(s, 0.0);
                v[3] = C64::new(s, 0.0);
            }
            BellState::PhiMinus => {
                v[0] = C64::new(s, 0.0);
                v[3] = C64::new(-s, 0.0);
            }
        }
        v
    }

    pub fn state(self) -> BipartiteState {
        BipartiteState::from_matrix(projector(&self.ket()), 2, 2).expect("Bell states are valid")
    }
}

/// Two-qubit Bloch correlation data: either the diagonal r = (r₁, r₂, r₃) or
/// a full 3×3 correlation matrix w, which is reduced to diagonal form by
/// singular value decomposition (local rotations leave the correlation
/// measures unchanged; signs are recovered from det w so the reduced vector
/// stays in the Bell tetrahedron).
#[derive(Debug, Clone)]
pub enum BlochCorrelationSpec {
    Diagonal([f64; 3]),
    General([[f64; 3]; 3]),
}

impl BlochCorrelationSpec {
    /// Reduce to the diagonal form r.
    pub fn to_diagonal(&self) -> [f64; 3] {
        match self {
            BlochCorrelationSpec::Diagonal(r) => *r,
            BlochCorrelationSpec::General(w) => {
                let m = DMatrix::<f64>::from_fn(3, 3, |i, j| w[i][j]);
                let det = m.clone().determinant();
                let svd = m.svd(false, false);
                let mut s = [
                    svd.singular_values[0],
                    svd.singular_values[1],
                    svd.singular_values[2],
                ];
                // Singular values of w are |r_j|; the product of signs must
                // reproduce sign(det w).
                if det < 0.0 {
                    s[2] = -s[2];
                }
                s
            }
        }
    }

    pub fn to_state(&self) -> Result<BipartiteState> {
        make_bell_diagonal(self.to_diagonal())
    }
}

/// Werner state ρ_w = (I − αP)/(d(d−α)) on a d×d system, with P the swap
/// operator. Invariant under U⊗U; both marginals are I/d.
pub fn make_werner(d: usize, alpha: f64) -> Result<BipartiteState> {
    if d < 2 {
        return Err(Error::UnsupportedDimension {
            dim: d,
            reason: "Werner states need d ≥ 2",
        });
    }
    if !(-1.0..=1.0).contains(&alpha) {
        return Err(Error::RejectedInput(format!(
            "Werner parameter alpha = {alpha} outside [−1, 1]"
        )));
    }
    if d * d > DEFAULT_MAX_DIM {
        return Err(Error::DimensionOverflow {
            got: d * d,
            max: DEFAULT_MAX_DIM,
        });
    }
    let norm = 1.0 / (d as f64 * (d as f64 - alpha));
    let m = (identity(d * d) - swap_operator(d) * C64::new(alpha, 0.0)) * C64::new(norm, 0.0);
    BipartiteState::from_matrix(m, d, d)
}

/// Classical-quantum state ρ = Σ_i q_i |a_i⟩⟨a_i| ⊗ σ_i, where {|a_i⟩} is a
/// basis of side A.
pub fn make_cq(
    q: &ProbabilityVector,
    basis: &ProjectiveBasis,
    sigmas: &[DensityMatrix],
) -> Result<BipartiteState> {
    let d_a = basis.dim();
    if q.len() != d_a || sigmas.len() != d_a {
        return Err(Error::DimensionMismatch(format!(
            "CQ state needs |q| = |sigmas| = basis dimension ({d_a}), got {} and {}",
            q.len(),
            sigmas.len()
        )));
    }
    let d_b = sigmas[0].dim();
    if sigmas.iter().any(|s| s.dim() != d_b) {
        return Err(Error::DimensionMismatch(
            "all conditional states must share one dimension".into(),
        ));
    }
    let total = d_a * d_b;
    let mut m = CMatrix::zeros(total, total);
    for i in 0..d_a {
        let ai = basis.vector(i);
        let block = tensor_product_with_max(&projector(&ai), sigmas[i].matrix(), total)?;
        m += block * C64::new(q[i], 0.0);
    }
    BipartiteState::from_matrix(m, d_a, d_b)
}

/// Bell-diagonal state ¼(I₂⊗I₂ + Σ_j r_j σ_j⊗σ_j). Validity (r inside the
/// Bell tetrahedron) is checked via the eigenvalues of the resulting matrix.
pub fn make_bell_diagonal(r: [f64; 3]) -> Result<BipartiteState> {
    let paulis = pauli_matrices();
    let mut m = identity(4);
    for (rj, sigma) in r.iter().zip(paulis.iter()) {
        m += tensor_product_with_max(sigma, sigma, 4)? * C64::new(*rj, 0.0);
    }
    m *= C64::new(0.25, 0.0);
    BipartiteState::from_matrix(m, 2, 2)
}

/// ρ₁ = p|ψ⁻⟩⟨ψ⁻| + (1−p)|ψ⁺⟩⟨ψ⁺|, built directly from the Bell
/// projectors. Equals the Bell-diagonal state with r = (1−2p, 1−2p, −1).
pub fn make_rho1(p: f64) -> Result<BipartiteState> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::RejectedInput(format!("p = {p} outside [0, 1]")));
    }
    let m = projector(&BellState::PsiMinus.ket()) * C64::new(p, 0.0)
        + projector(&BellState::PsiPlus.ket()) * C64::new(1.0 - p, 0.0);
    BipartiteState::from_matrix(m, 2, 2)
}

/// ρ₂ = p|ψ⁻⟩⟨ψ⁻| + (1−p)/2 (|ψ⁺⟩⟨ψ⁺| + |φ⁺⟩⟨φ⁺|). Equals the
/// Bell-diagonal state with r = (1−2p, −p, −p).
pub fn make_rho2(p: f64) -> Result<BipartiteState> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::RejectedInput(format!("p = {p} outside [0, 1]")));
    }
    let half = (1.0 - p) / 2.0;
    let m = projector(&BellState::PsiMinus.ket()) * C64::new(p, 0.0)
        + projector(&BellState::PsiPlus.ket()) * C64::new(half, 0.0)
        + projector(&BellState::PhiPlus.ket()) * C64::new(half, 0.0);
    BipartiteState::from_matrix(m, 2, 2)
}

/// Specification of the mixed state
/// ρ = λ Σ_k p_k |k⟩⟨k|⊗σ_k + (1−λ) σ_a ⊗ Σ_k p_k σ_k,
/// which has vanishing quantum correlation in every basis unbiased to {|k⟩}
/// while its quantum discord stays strictly positive.
#[derive(Debug, Clone)]
pub struct CounterexampleSpec {
    pub lambda: f64,
    pub basis: ProjectiveBasis,
    pub sigma_a: DensityMatrix,
    pub p: ProbabilityVector,
    pub sigmas: Vec<DensityMatrix>,
}

impl CounterexampleSpec {
    /// The canonical two-qubit instance: λ = ½, computational basis,
    /// σ_a = |+⟩⟨+|, p = (½, ½), σ_k = (|0⟩⟨0|, |1⟩⟨1|).
    pub fn canonical() -> Self {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let plus = CVector::from_vec(vec![C64::new(s, 0.0), C64::new(s, 0.0)]);
        Self {
            lambda: 0.5,
            basis: ProjectiveBasis::computational(2),
            sigma_a: DensityMatrix::pure(&plus).unwrap(),
            p: ProbabilityVector::uniform(2),
            sigmas: vec![
                DensityMatrix::pure(&basis_ket(2, 0)).unwrap(),
                DensityMatrix::pure(&basis_ket(2, 1)).unwrap(),
            ],
        }
    }

    pub fn build(&self) -> Result<BipartiteState> {
        make_counterexample(
            self.lambda,
            &self.basis,
            &self.sigma_a,
            &self.p,
            &self.sigmas,
        )
    }
}

/// Build the state of [`CounterexampleSpec`]. Rejects σ_a diagonal in the
/// given basis (that degenerate case collapses to a CQ state and is outside
/// the construction's premise).
pub fn make_counterexample(
    lambda: f64,
    basis: &ProjectiveBasis,
    sigma_a: &DensityMatrix,
    p: &ProbabilityVector,
    sigmas: &[DensityMatrix],
) -> Result<BipartiteState> {
    if !(0.0 < lambda && lambda < 1.0) {
        return Err(Error::RejectedInput(format!(
            "lambda = {lambda} outside (0, 1)"
        )));
    }
    let d_a = basis.dim();
    if sigma_a.dim() != d_a || p.len() != d_a || sigmas.len() != d_a {
        return Err(Error::DimensionMismatch(
            "basis, sigma_a, p and sigmas must share side-A dimension".into(),
        ));
    }
    let d_b = sigmas[0].dim();
    if sigmas.iter().any(|s| s.dim() != d_b) {
        return Err(Error::DimensionMismatch(
            "all sigmas must share one dimension".into(),
        ));
    }
    // σ_a must have an off-diagonal element in the given basis.
    let in_basis = basis.matrix().adjoint() * sigma_a.matrix() * basis.matrix();
    let mut off = 0.0f64;
    for i in 0..d_a {
        for j in 0..d_a {
            if i != j {
                off = off.max(in_basis[(i, j)].norm());
            }
        }
    }
    if off <= 1e-8 {
        return Err(Error::RejectedInput(
            "sigma_a is diagonal in the given basis".into(),
        ));
    }
    let total = d_a * d_b;
    let mut avg_b = CMatrix::zeros(d_b, d_b);
    for (k, sigma) in sigmas.iter().enumerate() {
        avg_b += sigma.matrix() * C64::new(p[k], 0.0);
    }
    let mut m = CMatrix::zeros(total, total);
    for (k, sigma) in sigmas.iter().enumerate() {
        let ak = basis.vector(k);
        m += tensor_product_with_max(&projector(&ak), sigma.matrix(), total)?
            * C64::new(lambda * p[k], 0.0);
    }
    m += tensor_product_with_max(sigma_a.matrix(), &avg_b, total)? * C64::new(1.0 - lambda, 0.0);
    BipartiteState::from_matrix(m, d_a, d_b)
}

/// Pure state |ψ⟩ = Σ_i √λ_i |i⟩|i⟩ written in the computational Schmidt
/// basis, with d_A = d_B = |λ|.
pub fn make_pure_from_schmidt(lambda: &ProbabilityVector) -> Result<BipartiteState> {
    let d = lambda.len();
    if d < 2 {
        return Err(Error::UnsupportedDimension {
            dim: d,
            reason: "Schmidt spectrum needs at least two terms",
        });
    }
    let mut v = CVector::zeros(d * d);
    for i in 0..d {
        v[i * d + i] = C64::new(lambda[i].sqrt(), 0.0);
    }
    BipartiteState::from_matrix(projector(&v), d, d)
}

/// Random-state ensembles.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RandomStateKind {
    /// Rank-1 projector of a Haar-random unit vector.
    PureHaar,
    /// G G†/tr(G G†) with G a square complex-Gaussian (Ginibre) matrix.
    MixedGinibre,
}

fn complex_gaussian<R: Rng>(rng: &mut R) -> C64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    C64::new(re, im)
}

/// Sample a random bipartite state; deterministic for a fixed seed.
pub fn sample_random_state(
    d_a: usize,
    d_b: usize,
    kind: RandomStateKind,
    seed: u64,
) -> Result<BipartiteState> {
    let total = d_a * d_b;
    if total > DEFAULT_MAX_DIM {
        return Err(Error::DimensionOverflow {
            got: total,
            max: DEFAULT_MAX_DIM,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let m = match kind {
        RandomStateKind::PureHaar => {
            let mut v = CVector::from_fn(total, |_, _| complex_gaussian(&mut rng));
            let norm = v.norm();
            v /= C64::new(norm, 0.0);
            projector(&v)
        }
        RandomStateKind::MixedGinibre => {
            let g = CMatrix::from_fn(total, total, |_, _| complex_gaussian(&mut rng));
            let gg = &g * g.adjoint();
            let tr = trace_re(&gg);
            gg * C64::new(1.0 / tr, 0.0)
        }
    };
    BipartiteState::from_matrix(m, d_a, d_b)
}

/// Haar-random unitary via QR of a Ginibre matrix with the phase convention
/// fixed by the R diagonal.
pub fn sample_haar_unitary(d: usize, seed: u64) -> CMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = CMatrix::from_fn(d, d, |_, _| complex_gaussian(&mut rng));
    let qr = g.qr();
    let r = qr.r();
    let mut q = qr.q();
    for j in 0..d {
        let rjj = r[(j, j)];
        let phase = if rjj.norm() > 0.0 {
            rjj / rjj.norm()
        } else {
            C64::new(1.0, 0.0)
        };
        let mut col = q.column_mut(j);
        for x in col.iter_mut() {
            *x *= phase;
        }
    }
    q
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qmath::max_entry_diff;
    use approx::assert_abs_diff_eq;

    #[test]
    fn werner_alpha_one_is_epr() {
        let w = make_werner(2, 1.0).unwrap();
        let epr = BellState::PsiMinus.state();
        assert!(max_entry_diff(w.matrix(), epr.matrix()) < 1e-12);
    }

    #[test]
    fn werner_alpha_zero_is_maximally_mixed() {
        let w = make_werner(2, 0.0).unwrap();
        assert!(max_entry_diff(w.matrix(), DensityMatrix::maximally_mixed(4).matrix()) < 1e-15);
    }

    #[test]
    fn werner_d3_spectrum() {
        // Eigenvalues (1∓α)/(d(d−α)) on the symmetric/antisymmetric sectors,
        // read off from the swap operator's ±1 eigenspaces (dims 6 and 3).
        let (d, alpha) = (3usize, 0.5f64);
        let w = make_werner(d, alpha).unwrap();
        let denom = d as f64 * (d as f64 - alpha);
        let sym = (1.0 - alpha) / denom; // symmetric sector, dim d(d+1)/2 = 6
        let asym = (1.0 + alpha) / denom; // antisymmetric sector, dim d(d−1)/2 = 3
        let evs = w.rho().eigenvalues();
        for &ev in &evs[..6] {
            assert_abs_diff_eq!(ev, sym, epsilon = 1e-12);
        }
        for &ev in &evs[6..] {
            assert_abs_diff_eq!(ev, asym, epsilon = 1e-12);
        }
        assert_abs_diff_eq!(trace_re(w.matrix()), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn werner_marginals_are_maximally_mixed() {
        for d in [2usize, 3] {
            for alpha in [-1.0, -0.3, 0.5, 1.0] {
                let w = make_werner(d, alpha).unwrap();
                let expect = DensityMatrix::maximally_mixed(d);
                assert!(max_entry_diff(w.marginal_a().matrix(), expect.matrix()) < 1e-10);
                assert!(max_entry_diff(w.marginal_b().matrix(), expect.matrix()) < 1e-10);
            }
        }
    }

    #[test]
    fn cq_state_recovers_classical_mixture() {
        // q=(½,½), σ = (|0⟩⟨0|, |1⟩⟨1|) is ½(|00⟩⟨00| + |11⟩⟨11|).
        let q = ProbabilityVector::uniform(2);
        let basis = ProjectiveBasis::computational(2);
        let sigmas = vec![
            DensityMatrix::pure(&basis_ket(2, 0)).unwrap(),
            DensityMatrix::pure(&basis_ket(2, 1)).unwrap(),
        ];
        let cq = make_cq(&q, &basis, &sigmas).unwrap();
        let mut expect = CMatrix::zeros(4, 4);
        expect[(0, 0)] = C64::new(0.5, 0.0);
        expect[(3, 3)] = C64::new(0.5, 0.0);
        assert!(max_entry_diff(cq.matrix(), &expect) < 1e-15);
    }

    #[test]
    fn cq_point_mass_is_product_state() {
        let q = ProbabilityVector::new(vec![1.0, 0.0]).unwrap();
        let basis = ProjectiveBasis::computational(2);
        let sigmas = vec![
            DensityMatrix::maximally_mixed(2),
            DensityMatrix::pure(&basis_ket(2, 1)).unwrap(),
        ];
        let cq = make_cq(&q, &basis, &sigmas).unwrap();
        let expect = qmath::tensor_product(
            &projector(&basis_ket(2, 0)),
            DensityMatrix::maximally_mixed(2).matrix(),
        )
        .unwrap();
        assert!(max_entry_diff(cq.matrix(), &expect) < 1e-15);
    }

    #[test]
    fn cq_dephasing_invariance() {
        // Applying the basis projectors on side A leaves a CQ state fixed.
        let q = ProbabilityVector::new(vec![0.3, 0.7]).unwrap();
        let u = sample_haar_unitary(2, 99);
        let basis = ProjectiveBasis::new(u).unwrap();
        let sigmas = vec![
            sample_random_state(2, 2, RandomStateKind::MixedGinibre, 5)
                .unwrap()
                .marginal_b()
                .clone(),
            DensityMatrix::maximally_mixed(2),
        ];
        let cq = make_cq(&q, &basis, &sigmas).unwrap();
        let mut dephased = CMatrix::zeros(4, 4);
        for i in 0..2 {
            let p = qmath::tensor_product(&projector(&basis.vector(i)), &identity(2)).unwrap();
            dephased += &p * cq.matrix() * &p;
        }
        assert!(max_entry_diff(&dephased, cq.matrix()) < 1e-10);
    }

    #[test]
    fn bell_diagonal_vertices_are_bell_states() {
        // Verified by direct expansion of ¼(I + Σ r_j σ_j⊗σ_j).
        let cases = [
            ([1.0, 1.0, -1.0], BellState::PsiPlus),
            ([1.0, -1.0, 1.0], BellState::PhiPlus),
            ([-1.0, 1.0, 1.0], BellState::PhiMinus),
            ([-1.0, -1.0, -1.0], BellState::PsiMinus),
        ];
        for (r, bell) in cases {
            let s = make_bell_diagonal(r).unwrap();
            assert!(
                max_entry_diff(s.matrix(), bell.state().matrix()) < 1e-12,
                "vertex {r:?}"
            );
        }
    }

    #[test]
    fn bell_diagonal_center_is_maximally_mixed() {
        let s = make_bell_diagonal([0.0, 0.0, 0.0]).unwrap();
        assert!(max_entry_diff(s.matrix(), DensityMatrix::maximally_mixed(4).matrix()) < 1e-15);
    }

    #[test]
    fn bell_diagonal_spectrum_sign_pattern() {
        // Eigenvalues ¼(1 ± r₁ ± r₂ ± r₃) with an odd number of + signs,
        // cross-checked against the direct eigensolve in DensityMatrix.
        let r = [0.3, -0.2, 0.4];
        let s = make_bell_diagonal(r).unwrap();
        let mut expect = [
            0.25 * (1.0 - r[0] - r[1] - r[2]),
            0.25 * (1.0 - r[0] + r[1] + r[2]),
            0.25 * (1.0 + r[0] - r[1] + r[2]),
            0.25 * (1.0 + r[0] + r[1] - r[2]),
        ];
        expect.sort_by(f64::total_cmp);
        for (got, want) in s.rho().eigenvalues().iter().zip(expect.iter()) {
            assert_abs_diff_eq!(got, want, epsilon = 1e-10);
        }
    }

    #[test]
    fn bell_diagonal_rejects_outside_tetrahedron() {
        assert!(matches!(
            make_bell_diagonal([1.0, 1.0, 1.0]),
            Err(Error::NotPsd(_))
        ));
    }

    #[test]
    fn rho1_rho2_match_bloch_parameters() {
        for p in [0.0, 0.2, 1.0 / 3.0, 0.8, 1.0] {
            let direct = make_rho1(p).unwrap();
            let via_r = make_bell_diagonal([1.0 - 2.0 * p, 1.0 - 2.0 * p, -1.0]).unwrap();
            assert!(max_entry_diff(direct.matrix(), via_r.matrix()) < 1e-12);

            let direct = make_rho2(p).unwrap();
            let via_r = make_bell_diagonal([1.0 - 2.0 * p, -p, -p]).unwrap();
            assert!(max_entry_diff(direct.matrix(), via_r.matrix()) < 1e-12);
        }
    }

    #[test]
    fn general_bloch_spec_reduces_by_svd() {
        // A rotated diagonal spec must reduce back to the same magnitudes
        // with the determinant sign preserved.
        let r = [0.5, -0.3, 0.1];
        let c = 0.6f64.cos();
        let s = 0.6f64.sin();
        // rotate about z by 0.6: w = R diag(r) Rᵀ has the same singular values
        let rot = [[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]];
        let mut w = [[0.0; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    w[i][j] += rot[i][k] * r[k] * rot[j][k];
                }
            }
        }
        let red = BlochCorrelationSpec::General(w).to_diagonal();
        let mut mags: Vec<f64> = red.iter().map(|x| x.abs()).collect();
        mags.sort_by(f64::total_cmp);
        let mut want: Vec<f64> = r.iter().map(|x| x.abs()).collect();
        want.sort_by(f64::total_cmp);
        for (a, b) in mags.iter().zip(want.iter()) {
            assert_abs_diff_eq!(a, b, epsilon = 1e-12);
        }
        let det_prod: f64 = red.iter().product();
        assert!(
            det_prod * (r[0] * r[1] * r[2]) > 0.0,
            "sign of det preserved"
        );
        // and the reduced state is valid
        BlochCorrelationSpec::General(w).to_state().unwrap();
    }

    #[test]
    fn counterexample_rejects_diagonal_sigma_a() {
        let mut spec = CounterexampleSpec::canonical();
        spec.sigma_a = DensityMatrix::maximally_mixed(2);
        assert!(matches!(spec.build(), Err(Error::RejectedInput(_))));
    }

    #[test]
    fn counterexample_approaches_cq_in_lambda_limit() {
        let mut spec = CounterexampleSpec::canonical();
        spec.lambda = 1.0 - 1e-9;
        let near = spec.build().unwrap();
        let q = ProbabilityVector::uniform(2);
        let basis = ProjectiveBasis::computational(2);
        let cq = make_cq(&q, &basis, &spec.sigmas).unwrap();
        assert!(max_entry_diff(near.matrix(), cq.matrix()) < 1e-8);
    }

    #[test]
    fn schmidt_pure_state_marginals() {
        let lam = ProbabilityVector::new(vec![0.75, 0.25]).unwrap();
        let s = make_pure_from_schmidt(&lam).unwrap();
        assert_abs_diff_eq!(s.rho().entropy(), 0.0, epsilon = 1e-9);
        assert_abs_diff_eq!(
            s.marginal_b().entropy(),
            0.8112781244591328,
            epsilon = 1e-10
        );
    }

    #[test]
    fn sampling_is_deterministic_and_valid() {
        let a = sample_random_state(2, 3, RandomStateKind::MixedGinibre, 42).unwrap();
        let b = sample_random_state(2, 3, RandomStateKind::MixedGinibre, 42).unwrap();
        assert_eq!(max_entry_diff(a.matrix(), b.matrix()), 0.0);

        let pure = sample_random_state(2, 2, RandomStateKind::PureHaar, 7).unwrap();
        assert_abs_diff_eq!(pure.rho().entropy(), 0.0, epsilon = 1e-9);

        let mixed = sample_random_state(2, 2, RandomStateKind::MixedGinibre, 7).unwrap();
        assert!(
            mixed.rho().eigenvalues()[0] > 0.0,
            "Ginibre is full rank a.s."
        );
    }

    #[test]
    fn haar_unitary_is_unitary_and_deterministic() {
        let u = sample_haar_unitary(3, 11);
        let gram = u.adjoint() * &u;
        assert!(max_entry_diff(&gram, &identity(3)) < 1e-12);
        assert_eq!(max_entry_diff(&u, &sample_haar_unitary(3, 11)), 0.0);
    }

    #[test]
    fn random_constructor_outputs_validate() {
        for seed in 0..20u64 {
            sample_random_state(2, 2, RandomStateKind::MixedGinibre, seed).unwrap();
            sample_random_state(3, 3, RandomStateKind::PureHaar, seed).unwrap();
        }
    }
}
