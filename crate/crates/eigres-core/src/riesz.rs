//! Riesz spectral projectors and gap-based block decompositions.
//!
//! For a matrix family with a spectral gap at a real cut c, the contour
//! integral
//!
//! ```text
//!     P_X = -(1 / 2 pi i) \oint_gamma (X - s I)^{-1} ds
//! ```
//!
//! over a curve crossing the real axis only at -R and c projects onto the
//! invariant subspace of the eigenvalues below c. The contour here is fixed
//! to the circle with diameter [-R, c]; the quadrature is the trapezoidal
//! rule on the periodic parametrization, which converges exponentially in
//! the node count because the resolvent is analytic in a neighborhood of the
//! circle. From P the commuting blocks L = P X P and R = (I-P) X (I-P)
//! reassemble X, and recursion over several cuts yields the k-cluster
//! refinement.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::hermitian::{eigendecompose, make_hermitian, HermitianMatrix};
use crate::linalg;

/// Default quadrature node count.
pub const DEFAULT_NODES: usize = 64;

/// Partition of an ascending spectrum into gap-separated clusters.
#[derive(Debug, Clone, PartialEq)]
pub struct ClusterPartition {
    /// Gap midpoints c_1 < ... < c_{m-1}.
    pub cuts: Vec<f64>,
    /// Cluster sizes, summing to n.
    pub sizes: Vec<usize>,
    /// Width of the gap around each cut.
    pub gap_widths: Vec<f64>,
}

impl ClusterPartition {
    pub fn cluster_count(&self) -> usize {
        self.sizes.len()
    }
}

/// A circle contour with diameter [left_real, right_real] on the real axis.
#[derive(Debug, Clone, PartialEq)]
pub struct ContourSpec {
    /// Leftmost real crossing (-R), strictly below the spectrum.
    pub left_real: f64,
    /// Rightmost real crossing: the cut c.
    pub right_real: f64,
    /// Trapezoidal node count.
    pub nodes: usize,
    /// Distance from the nearest eigenvalue to the circle.
    pub margin: f64,
}

impl ContourSpec {
    pub fn center(&self) -> f64 {
        0.5 * (self.left_real + self.right_real)
    }

    pub fn radius(&self) -> f64 {
        0.5 * (self.right_real - self.left_real)
    }
}

/// Projector plus the two commuting blocks it induces.
#[derive(Debug, Clone)]
pub struct SpectralSplit {
    /// The Riesz projector P.
    pub projector: DMatrix<Complex64>,
    /// rank(P) = number of eigenvalues below the cut.
    pub k: usize,
    /// L = P X P.
    pub l: HermitianMatrix,
    /// R = (I - P) X (I - P).
    pub r: HermitianMatrix,
    /// k orthonormal columns spanning the image of P.
    pub frame: DMatrix<Complex64>,
}

/// Cluster the values of an ascending spectrum.
///
/// Consecutive eigenvalues land in the same cluster iff their difference is
/// at most rel_tol * (1 + spread); cuts are placed at gap midpoints.
pub fn detect_gaps(values: &[f64], rel_tol: f64) -> Result<ClusterPartition> {
    if values.is_empty() {
        return Err(Error::EmptyInput);
    }
    let spread = values[values.len() - 1] - values[0];
    let threshold = rel_tol * (1.0 + spread);
    let mut cuts = Vec::new();
    let mut sizes = Vec::new();
    let mut gap_widths = Vec::new();
    let mut current = 1usize;
    for w in values.windows(2) {
        let diff = w[1] - w[0];
        if diff <= threshold {
            current += 1;
        } else {
            cuts.push(0.5 * (w[0] + w[1]));
            gap_widths.push(diff);
            sizes.push(current);
            current = 1;
        }
    }
    sizes.push(current);
    Ok(ClusterPartition {
        cuts,
        sizes,
        gap_widths,
    })
}

/// Build the circle contour for a cut c in a spectral gap of X.
///
/// The left crossing is lambda_min - max(1, spread) so the margin stays
/// bounded away from zero without caller input.
pub fn contour_for_gap(x: &HermitianMatrix, c: f64, nodes: usize) -> Result<ContourSpec> {
    if nodes < 8 {
        return Err(Error::TooFewNodes { nodes });
    }
    let eig = eigendecompose(x)?;
    contour_for_values(&eig.values, c, nodes)
}

/// Same as [`contour_for_gap`] but reusing already-computed eigenvalues.
pub fn contour_for_values(values: &[f64], c: f64, nodes: usize) -> Result<ContourSpec> {
    if nodes < 8 {
        return Err(Error::TooFewNodes { nodes });
    }
    if values.is_empty() {
        return Err(Error::EmptyInput);
    }
    for &v in values {
        if (v - c).abs() <= 1e-12 {
            return Err(Error::EigenvalueOnCut {
                cut: c,
                eigenvalue: v,
            });
        }
    }
    let lo = values[0];
    let hi = values[values.len() - 1];
    let spread = hi - lo;
    let left_real = lo.min(c) - spread.max(1.0);
    let center = 0.5 * (left_real + c);
    let radius = 0.5 * (c - left_real);
    let margin = values
        .iter()
        .map(|&v| (radius - (v - center).abs()).abs())
        .fold(f64::INFINITY, f64::min);
    Ok(ContourSpec {
        left_real,
        right_real: c,
        nodes,
        margin,
    })
}

/// Evaluate the Riesz projector by the trapezoidal rule on the circle.
///
/// With s_j = m + rho e^{i t_j} and equal weights the sum reduces to
/// -(rho / N) sum_j e^{i t_j} (X - s_j I)^{-1}. Node terms come in conjugate
/// pairs, so the result is Hermitian to roundoff without post-processing.
pub fn spectral_projector(x: &HermitianMatrix, contour: &ContourSpec) -> Result<DMatrix<Complex64>> {
    let n = x.n();
    let m = contour.center();
    let rho = contour.radius();
    let nodes = contour.nodes;
    let identity = DMatrix::<Complex64>::identity(n, n);
    let mut acc = DMatrix::<Complex64>::zeros(n, n);
    for j in 0..nodes {
        let t = 2.0 * std::f64::consts::PI * j as f64 / nodes as f64;
        let phase = Complex64::new(t.cos(), t.sin());
        let s = Complex64::new(m, 0.0) + phase * rho;
        let shifted = x.as_matrix() - &identity * s;
        let lu = shifted.lu();
        let resolvent = lu
            .try_inverse()
            .ok_or(Error::SingularResolvent { node: j })?;
        acc += resolvent * phase;
    }
    Ok(acc * Complex64::new(-rho / nodes as f64, 0.0))
}

/// Integer rank of a computed projector: round(trace P), rejecting traces
/// farther than 1e-6 from an integer.
pub fn projector_rank(p: &DMatrix<Complex64>) -> Result<usize> {
    let trace: f64 = (0..p.nrows()).map(|i| p[(i, i)].re).sum();
    let rounded = trace.round();
    if (trace - rounded).abs() > 1e-6 || rounded < 0.0 {
        return Err(Error::NonIntegralRank { trace });
    }
    Ok(rounded as usize)
}

/// Riesz projector below a cut, recomputed with a doubled node count until
/// idempotency reaches 1e-9; the default contour can otherwise leave an
/// eigenvalue too close to the circle for the requested node count.
pub fn projector_for_cut(
    x: &HermitianMatrix,
    values: &[f64],
    cut: f64,
    nodes: usize,
) -> Result<DMatrix<Complex64>> {
    let mut current = nodes.max(8);
    loop {
        let contour = contour_for_values(values, cut, current)?;
        let p = spectral_projector(x, &contour)?;
        let idem = (&p * &p - &p).norm();
        if idem <= 1e-9 {
            return Ok(p);
        }
        if current >= 2048 {
            return Err(Error::ConvergenceFailure {
                sweeps: current,
                off_diagonal: idem,
            });
        }
        current *= 2;
    }
}

/// Split X at a cut inside a spectral gap: L = P X P, R = (I-P) X (I-P).
pub fn split_at_gap(x: &HermitianMatrix, c: f64, nodes: usize) -> Result<SpectralSplit> {
    if nodes < 8 {
        return Err(Error::TooFewNodes { nodes });
    }
    let eig = eigendecompose(x)?;
    let p = projector_for_cut(x, &eig.values, c, nodes)?;
    split_from_projector(x, p)
}

fn split_from_projector(x: &HermitianMatrix, p: DMatrix<Complex64>) -> Result<SpectralSplit> {
    let n = x.n();
    let k = projector_rank(&p)?;
    let identity = DMatrix::<Complex64>::identity(n, n);
    let q = &identity - &p;
    let l = make_hermitian(&(&p * x.as_matrix() * &p), 1e-9)?;
    let r = make_hermitian(&(&q * x.as_matrix() * &q), 1e-9)?;
    let frame = linalg::orthonormal_image(&p, k);
    Ok(SpectralSplit {
        projector: p,
        k,
        l,
        r,
        frame,
    })
}

/// One block of a multi-way split: an n x n rank-deficient piece of X plus a
/// frame for its invariant subspace.
#[derive(Debug, Clone)]
pub struct ClusterBlock {
    pub block: HermitianMatrix,
    pub frame: DMatrix<Complex64>,
}

/// Decompose X into m pairwise-commuting blocks, one per cluster.
///
/// Follows the induction of the finer-decomposition corollary: split off the
/// top cluster at the last cut, restrict to the invariant subspace of the
/// rest, and recurse on the restricted matrix with the remaining cuts.
pub fn multi_split(
    x: &HermitianMatrix,
    partition: &ClusterPartition,
    nodes: usize,
) -> Result<Vec<ClusterBlock>> {
    let n = x.n();
    let expected: usize = partition.sizes.iter().sum();
    if expected != n {
        return Err(Error::DimensionMismatch {
            left: expected,
            right: n,
        });
    }
    let blocks = multi_split_cuts(x, &partition.cuts, nodes)?;
    for (block, &size) in blocks.iter().zip(&partition.sizes) {
        if block.frame.ncols() != size {
            return Err(Error::DimensionMismatch {
                left: block.frame.ncols(),
                right: size,
            });
        }
    }
    Ok(blocks)
}

fn multi_split_cuts(x: &HermitianMatrix, cuts: &[f64], nodes: usize) -> Result<Vec<ClusterBlock>> {
    let n = x.n();
    if cuts.is_empty() {
        let frame = DMatrix::<Complex64>::identity(n, n);
        return Ok(vec![ClusterBlock {
            block: x.clone(),
            frame,
        }]);
    }
    let last = cuts[cuts.len() - 1];
    let split = split_at_gap(x, last, nodes)?;
    let comp_frame = linalg::orthonormal_complement(&split.frame);
    let top = ClusterBlock {
        block: split.r.clone(),
        frame: comp_frame,
    };
    // restrict to the invariant subspace below the cut and recurse there
    let restricted_raw = split.frame.adjoint() * x.as_matrix() * &split.frame;
    let restricted = make_hermitian(&restricted_raw, 1e-9)?;
    let lower = multi_split_cuts(&restricted, &cuts[..cuts.len() - 1], nodes)?;
    let mut blocks = Vec::with_capacity(lower.len() + 1);
    for sub in lower {
        let lifted_frame = &split.frame * &sub.frame;
        let lifted_block_raw = &split.frame * sub.block.as_matrix() * split.frame.adjoint();
        blocks.push(ClusterBlock {
            block: make_hermitian(&lifted_block_raw, 1e-9)?,
            frame: lifted_frame,
        });
    }
    blocks.push(top);
    Ok(blocks)
}
