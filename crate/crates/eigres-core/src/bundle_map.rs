//! Local product structure over the Grassmannian at a spectral gap.
//!
//! With a gap at c, a matrix is determined by the invariant subspace of its
//! lower eigenvalues (a Grassmannian point), the restricted operator on that
//! subspace, and the restricted operator on the orthogonal complement. The
//! map phi materializes this chart. The Grassmannian point is represented by
//! a canonical frame fixed against a caller-supplied reference: the unique
//! orthonormal basis of Im(P) whose projection onto the reference span makes
//! the cross matrix upper triangular with positive diagonal, i.e. the first
//! j basis vectors project onto the span of the first j reference vectors
//! for every j.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::hermitian::{make_hermitian, HermitianMatrix};
use crate::linalg;
use crate::riesz;

/// Threshold on the cross-Gram smallest singular value below which the
/// Riesz image no longer projects bijectively onto the reference span.
pub const TRANSVERSALITY_THRESHOLD: f64 = 1e-6;

/// One fiber of the product chart: frames plus restricted blocks.
#[derive(Debug, Clone)]
pub struct BundleChart {
    /// Canonical orthonormal basis of the invariant subspace (n x k).
    pub frame_k: DMatrix<Complex64>,
    /// Orthonormal basis of the orthogonal complement (n x (n-k)).
    pub frame_comp: DMatrix<Complex64>,
    /// L restricted to the subspace, k x k.
    pub l_mat: HermitianMatrix,
    /// R restricted to the complement, (n-k) x (n-k).
    pub r_mat: HermitianMatrix,
}

/// Chart map at a spectral gap, frame-fixed against `reference`.
///
/// `reference` must hold k orthonormal columns, k the number of eigenvalues
/// below c. Fails with [`Error::TransversalityLost`] when the cross-Gram
/// matrix between the Riesz image and the reference drops below the
/// threshold (including the degenerate case of a rank mismatch).
pub fn phi(
    x: &HermitianMatrix,
    c: f64,
    reference: &DMatrix<Complex64>,
) -> Result<BundleChart> {
    if reference.nrows() != x.n() {
        return Err(Error::DimensionMismatch {
            left: reference.nrows(),
            right: x.n(),
        });
    }
    let split = riesz::split_at_gap(x, c, riesz::DEFAULT_NODES)?;
    if reference.ncols() != split.k {
        return Err(Error::TransversalityLost { sigma_min: 0.0 });
    }
    let w = &split.frame;
    let cross = reference.adjoint() * w;
    let sigma_min = linalg::smallest_singular_value(&cross);
    if sigma_min < TRANSVERSALITY_THRESHOLD {
        return Err(Error::TransversalityLost { sigma_min });
    }

    // Find unitary T with (cross T) upper triangular, positive diagonal.
    // Flip trick: QR of J cross* J gives Q, and T = J Q J does it.
    let k = split.k;
    let flipped = flip(&cross.adjoint());
    let q = mgs_q(&flipped);
    let t = flip(&q);
    let frame_k = w * &t;

    let frame_comp = linalg::orthonormal_complement(&frame_k);
    let l_mat = make_hermitian(&(frame_k.adjoint() * x.as_matrix() * &frame_k), 1e-9)?;
    let r_mat = make_hermitian(&(frame_comp.adjoint() * x.as_matrix() * &frame_comp), 1e-9)?;
    debug_assert_eq!(l_mat.n(), k);
    Ok(BundleChart {
        frame_k,
        frame_comp,
        l_mat,
        r_mat,
    })
}

/// Reassemble the matrix from a chart:
/// frame_k L frame_k* + frame_comp R frame_comp*.
pub fn reconstruct(chart: &BundleChart) -> Result<HermitianMatrix> {
    let lower = &chart.frame_k * chart.l_mat.as_matrix() * chart.frame_k.adjoint();
    let upper = &chart.frame_comp * chart.r_mat.as_matrix() * chart.frame_comp.adjoint();
    make_hermitian(&(lower + upper), 1e-10)
}

/// Reverse both row and column order.
fn flip(m: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    let (rows, cols) = m.shape();
    DMatrix::from_fn(rows, cols, |i, j| m[(rows - 1 - i, cols - 1 - j)])
}

/// Q factor of a square QR with positive real diagonal of R, by modified
/// Gram-Schmidt with re-orthogonalization.
fn mgs_q(m: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    let mut q = m.clone();
    linalg::orthonormalize_columns(&mut q);
    q
}
