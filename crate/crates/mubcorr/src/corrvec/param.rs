//! Parameterization of the unconstrained projective-basis search space.
//!
//! d = 2 uses Bloch angles (θ, φ); d ≥ 3 uses a unitary built from
//! d(d−1)/2 Givens rotations with phases acting on the canonical basis.
//! Either map covers every rank-1 projective measurement basis (global and
//! per-vector phases are irrelevant to the projector set), with the minimal
//! number of redundant parameters.

use std::f64::consts::PI;

use crate::qmath::{identity, CMatrix, C64};

/// Number of free parameters of the unconstrained basis chart.
pub fn param_count(d: usize) -> usize {
    if d == 2 {
        2
    } else {
        d * (d - 1)
    }
}

/// Parameter ranges: rotation angles in [0, π], phases in [0, 2π).
pub fn param_ranges(d: usize) -> Vec<(f64, f64)> {
    if d == 2 {
        vec![(0.0, PI), (0.0, 2.0 * PI)]
    } else {
        let mut ranges = Vec::with_capacity(param_count(d));
        for _ in 0..d * (d - 1) / 2 {
            ranges.push((0.0, PI));
            ranges.push((0.0, 2.0 * PI));
        }
        ranges
    }
}

/// Eigenbasis of n⃗·σ⃗ for the Bloch direction (θ, φ), as matrix columns.
pub fn bloch_basis_matrix(theta: f64, phi: f64) -> CMatrix {
    let (ct, st) = ((theta / 2.0).cos(), (theta / 2.0).sin());
    let phase = C64::new(phi.cos(), phi.sin());
    CMatrix::from_column_slice(
        2,
        2,
        &[
            // |n+⟩
            C64::new(ct, 0.0),
            phase * C64::new(st, 0.0),
            // |n−⟩
            C64::new(-st, 0.0),
            phase * C64::new(ct, 0.0),
        ],
    )
}

/// Map chart parameters to a basis matrix (columns orthonormal by
/// construction).
pub fn basis_from_params(d: usize, params: &[f64]) -> CMatrix {
    assert_eq!(params.len(), param_count(d), "parameter count mismatch");
    if d == 2 {
        return bloch_basis_matrix(params[0], params[1]);
    }
    let mut u = identity(d);
    let mut idx = 0;
    for q in 1..d {
        for p in 0..q {
            let theta = params[idx];
            let phi = params[idx + 1];
            idx += 2;
            apply_givens_right(&mut u, p, q, theta, phi);
        }
    }
    u
}

/// Right-multiply U by the plane rotation G(p, q, θ, φ):
/// G_pp = cosθ, G_pq = −sinθ·e^{−iφ}, G_qp = sinθ·e^{iφ}, G_qq = cosθ.
fn apply_givens_right(u: &mut CMatrix, p: usize, q: usize, theta: f64, phi: f64) {
    let c = C64::new(theta.cos(), 0.0);
    let s_pos = C64::new(0.0, phi).exp() * C64::new(theta.sin(), 0.0);
    let s_neg = C64::new(0.0, -phi).exp() * C64::new(-theta.sin(), 0.0);
    let d = u.nrows();
    for r in 0..d {
        let up = u[(r, p)];
        let uq = u[(r, q)];
        u[(r, p)] = up * c + uq * s_pos;
        u[(r, q)] = up * s_neg + uq * c;
    }
}
