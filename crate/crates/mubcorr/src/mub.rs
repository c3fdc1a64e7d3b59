//! Mutually unbiased bases: construction, unbiasedness predicates, and
//! parameterization of the search space of bases unbiased to previously
//! fixed anchors.
//!
//! Two bases are mutually unbiased when every cross overlap satisfies
//! |⟨a_i|b_j⟩| = 1/√d, so measuring any state of one basis in the other
//! yields uniform outcomes.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::measure::ProjectiveBasis;
use crate::qmath::{CMatrix, C64};

/// Default tolerance on |⟨a_i|b_j⟩|² − 1/d for unbiasedness checks.
pub const UNBIASED_TOL: f64 = 1e-9;

/// Largest deviation of |⟨a_i|b_j⟩|² from 1/d over all vector pairs.
pub fn unbiased_deviation(a: &ProjectiveBasis, b: &ProjectiveBasis) -> f64 {
    assert_eq!(a.dim(), b.dim(), "unbiasedness needs equal dimensions");
    let d = a.dim();
    let target = 1.0 / d as f64;
    let overlap = a.matrix().adjoint() * b.matrix();
    overlap
        .iter()
        .map(|z| (z.norm_sqr() - target).abs())
        .fold(0.0, f64::max)
}

/// True iff max_ij | |⟨a_i|b_j⟩|² − 1/d | ≤ tol.
pub fn is_unbiased(a: &ProjectiveBasis, b: &ProjectiveBasis, tol: f64) -> bool {
    unbiased_deviation(a, b) <= tol
}

/// The unitary Fourier basis F_d/√d: columns f_j[k] = ω^{jk}/√d.
pub fn fourier_basis(d: usize) -> ProjectiveBasis {
    let scale = 1.0 / (d as f64).sqrt();
    let m = CMatrix::from_fn(d, d, |k, j| {
        let arg = 2.0 * PI * (j * k % d) as f64 / d as f64;
        C64::new(scale * arg.cos(), scale * arg.sin())
    });
    ProjectiveBasis::from_unitary_unchecked(m)
}

fn is_prime(d: usize) -> bool {
    d >= 2 && (2..=d / 2).all(|k| !d.is_multiple_of(k))
}

/// The m-th Weyl–Heisenberg basis for prime d (m = 0 is the Fourier basis):
/// columns v_j[k] = ω^{m k² + j k}/√d for odd primes, with quartic phases
/// i^{m k} for d = 2 (producing the σ_x and σ_y eigenbases).
fn weyl_heisenberg_basis(d: usize, m: usize) -> ProjectiveBasis {
    debug_assert!(is_prime(d));
    let scale = 1.0 / (d as f64).sqrt();
    let mat = if d == 2 {
        CMatrix::from_fn(2, 2, |k, j| {
            let arg = PI * (m * k) as f64 / 2.0 + PI * (j * k) as f64;
            C64::new(scale * arg.cos(), scale * arg.sin())
        })
    } else {
        CMatrix::from_fn(d, d, |k, j| {
            let arg = 2.0 * PI * ((m * k * k + j * k) % d) as f64 / d as f64;
            C64::new(scale * arg.cos(), scale * arg.sin())
        })
    };
    ProjectiveBasis::from_unitary_unchecked(mat)
}

/// A complete family of pairwise mutually unbiased bases.
#[derive(Debug, Clone)]
pub struct MubFamily {
    dim: usize,
    bases: Vec<ProjectiveBasis>,
}

impl MubFamily {
    /// Validate pairwise unbiasedness of all bases (O(d⁴) overlap checks).
    pub fn new(dim: usize, bases: Vec<ProjectiveBasis>) -> Result<Self> {
        for b in &bases {
            if b.dim() != dim {
                return Err(Error::DimensionMismatch(format!(
                    "family basis has dimension {}, expected {dim}",
                    b.dim()
                )));
            }
        }
        let mut worst = 0.0f64;
        for i in 0..bases.len() {
            for j in (i + 1)..bases.len() {
                worst = worst.max(unbiased_deviation(&bases[i], &bases[j]));
            }
        }
        if worst > UNBIASED_TOL {
            return Err(Error::NotUnbiased(worst));
        }
        Ok(Self { dim, bases })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn bases(&self) -> &[ProjectiveBasis] {
        &self.bases
    }

    pub fn len(&self) -> usize {
        self.bases.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bases.is_empty()
    }
}

/// The standard complete family of d+1 MUBs for prime d ≤ 13: the
/// computational basis plus the d Weyl–Heisenberg bases, each in canonical
/// phase/order form.
pub fn standard_mub_family(d: usize) -> Result<MubFamily> {
    if !is_prime(d) || d > 13 {
        return Err(Error::UnsupportedDimension {
            dim: d,
            reason: "the Weyl–Heisenberg construction covers prime d ≤ 13 only",
        });
    }
    let mut bases = vec![ProjectiveBasis::computational(d)];
    for m in 0..d {
        bases.push(weyl_heisenberg_basis(d, m).canonicalized());
    }
    MubFamily::new(d, bases)
}

/// How many correlation-vector levels have a search chart for side
/// dimension d: the full MUB chain (d+1) for supported primes, a single
/// mutually unbiased level past C₁ otherwise.
pub fn max_chart_levels(d: usize) -> usize {
    if d == 2 {
        3
    } else if is_prime(d) && d <= 13 {
        d + 1
    } else {
        2
    }
}

/// Parameterized search space of bases mutually unbiased to a set of
/// anchors.
///
/// With one anchor A the chart is continuous: B(φ) = A · D(φ) · H/√d with
/// D a diagonal of free row phases and H a complex Hadamard core. The
/// Fourier core is complete for d = 2 (one angle, the Bloch equator around
/// the anchor axis) and d = 3 (all order-3 Hadamards are Fourier
/// equivalent); for d ≥ 4 the affine Fourier family is an
/// under-approximation and the chart is flagged inexact.
///
/// With two or more anchors the chart is the finite set obtained by
/// conjugating the anchors onto the standard (computational, Fourier) pair
/// and enumerating the remaining Weyl–Heisenberg bases; complete for d = 2
/// (the single remaining Bloch axis), declared an under-approximation for
/// prime d ≥ 3.
#[derive(Debug, Clone)]
pub struct MuConstrainedChart {
    anchors: Vec<ProjectiveBasis>,
    kind: ChartKind,
    exact: bool,
}

#[derive(Debug, Clone)]
enum ChartKind {
    /// anchor · diag(phases) · core, plus one extra affine parameter for
    /// d = 4.
    Continuous {
        dim: usize,
        affine: bool,
    },
    Finite(Vec<ProjectiveBasis>),
}

impl MuConstrainedChart {
    pub fn anchors(&self) -> &[ProjectiveBasis] {
        &self.anchors
    }

    /// Number of continuous parameters (0 for a finite chart).
    pub fn param_count(&self) -> usize {
        match &self.kind {
            ChartKind::Continuous { dim, affine } => dim - 1 + usize::from(*affine),
            ChartKind::Finite(_) => 0,
        }
    }

    /// Documented parameter ranges (phases in [0, 2π)).
    pub fn param_ranges(&self) -> Vec<(f64, f64)> {
        vec![(0.0, 2.0 * PI); self.param_count()]
    }

    /// True when the chart provably covers the whole feasible set.
    pub fn is_exact(&self) -> bool {
        self.exact
    }

    /// Candidates of a finite chart; None for continuous charts.
    pub fn candidates(&self) -> Option<&[ProjectiveBasis]> {
        match &self.kind {
            ChartKind::Finite(c) => Some(c),
            ChartKind::Continuous { .. } => None,
        }
    }

    /// Map chart parameters to a basis (continuous charts only). Every
    /// emitted basis is mutually unbiased to all anchors by construction.
    pub fn basis_at(&self, params: &[f64]) -> ProjectiveBasis {
        match &self.kind {
            ChartKind::Continuous { dim, affine } => {
                let d = *dim;
                assert_eq!(params.len(), self.param_count(), "parameter count mismatch");
                let scale = 1.0 / (d as f64).sqrt();
                let phase = |arg: f64| C64::new(arg.cos(), arg.sin());
                // core = D(row phases) · F_d/√d, with the optional affine
                // parameter of the d = 4 Fourier family.
                let mut core = CMatrix::from_fn(d, d, |k, j| {
                    let mut arg = 2.0 * PI * (j * k % d) as f64 / d as f64;
                    if k > 0 {
                        arg += params[k - 1];
                    }
                    phase(arg) * C64::new(scale, 0.0)
                });
                if *affine {
                    let a = params[d - 1];
                    for k in (1..d).step_by(2) {
                        for j in (1..d).step_by(2) {
                            core[(k, j)] *= phase(a);
                        }
                    }
                }
                ProjectiveBasis::from_unitary_unchecked(self.anchors[0].matrix() * core)
            }
            ChartKind::Finite(_) => panic!("basis_at called on a finite chart"),
        }
    }
}

/// Chart of all bases mutually unbiased to one anchor. See
/// [`MuConstrainedChart`] for coverage guarantees.
pub fn chart_mu_to_one(anchor: &ProjectiveBasis) -> MuConstrainedChart {
    let d = anchor.dim();
    MuConstrainedChart {
        anchors: vec![anchor.clone()],
        kind: ChartKind::Continuous {
            dim: d,
            affine: d == 4,
        },
        exact: d <= 3,
    }
}

/// Finite chart of bases mutually unbiased to two or more pairwise
/// unbiased anchors.
pub fn chart_mu_to_many(anchors: &[ProjectiveBasis]) -> Result<MuConstrainedChart> {
    if anchors.len() < 2 {
        return Err(Error::RejectedInput(
            "chart_mu_to_many needs at least two anchors".into(),
        ));
    }
    let d = anchors[0].dim();
    for i in 0..anchors.len() {
        if anchors[i].dim() != d {
            return Err(Error::DimensionMismatch(
                "anchors must share one dimension".into(),
            ));
        }
        for j in (i + 1)..anchors.len() {
            let dev = unbiased_deviation(&anchors[i], &anchors[j]);
            if dev > UNBIASED_TOL {
                return Err(Error::NotUnbiased(dev));
            }
        }
    }
    if !is_prime(d) || d > 13 {
        return Err(Error::UnsupportedLevel {
            dim: d,
            level: anchors.len() + 1,
        });
    }
    // Work in the frame of the first anchor: M = A₁† A₂ has all entries of
    // modulus 1/√d; D = diag(√d · M_{j,0}) carries the row phases aligning
    // the standard Weyl–Heisenberg family with the second anchor. Every
    // A₁ · D · B_m (m = 1..d−1) is then unbiased to both anchors.
    let m = anchors[0].matrix().adjoint() * anchors[1].matrix();
    let scale = (d as f64).sqrt();
    let diag = CMatrix::from_fn(d, d, |r, c| {
        if r == c {
            let z = m[(r, 0)] * C64::new(scale, 0.0);
            z / z.norm()
        } else {
            C64::new(0.0, 0.0)
        }
    });
    let frame = anchors[0].matrix() * diag;
    let mut candidates = Vec::new();
    for wh in 1..d {
        let b =
            ProjectiveBasis::from_unitary_unchecked(&frame * weyl_heisenberg_basis(d, wh).matrix())
                .canonicalized();
        if anchors.iter().all(|a| is_unbiased(a, &b, UNBIASED_TOL)) {
            candidates.push(b);
        }
    }
    if candidates.is_empty() {
        return Err(Error::UnsupportedLevel {
            dim: d,
            level: anchors.len() + 1,
        });
    }
    Ok(MuConstrainedChart {
        anchors: anchors.to_vec(),
        kind: ChartKind::Finite(candidates),
        exact: d == 2,
    })
}
