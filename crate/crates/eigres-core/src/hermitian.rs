//! Dense complex self-adjoint matrices and their basic operations.
//!
//! The space under study is S(n) = { X in M_n(C) : X* = X }. Everything in
//! this module is desk scale: dense storage, double precision, n up to a few
//! dozen. Construction goes through [`make_hermitian`], which symmetrizes and
//! validates, so a [`HermitianMatrix`] value is self-adjoint by construction
//! with an exactly real diagonal.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::eigen;
use crate::error::{Error, Result};
use crate::linalg;

/// Construction tolerance for self-adjointness (absolute, per entry).
pub const HERMITIAN_TOL: f64 = 1e-12;

/// Residual contract of the eigensolver: ||Xv - lv|| <= RESIDUAL_TOL * (1 + ||X||_F).
pub const RESIDUAL_TOL: f64 = 1e-10;

/// A validated dense n x n complex self-adjoint matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianMatrix {
    data: DMatrix<Complex64>,
}

impl HermitianMatrix {
    /// Dimension n.
    pub fn n(&self) -> usize {
        self.data.nrows()
    }

    /// Read-only view of the underlying matrix.
    pub fn as_matrix(&self) -> &DMatrix<Complex64> {
        &self.data
    }

    /// Consume into the underlying matrix.
    pub fn into_matrix(self) -> DMatrix<Complex64> {
        self.data
    }

    pub fn entry(&self, i: usize, j: usize) -> Complex64 {
        self.data[(i, j)]
    }

    /// Real trace.
    pub fn trace(&self) -> f64 {
        (0..self.n()).map(|i| self.data[(i, i)].re).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.norm()
    }

    /// Identity times a real scalar.
    pub fn scaled_identity(n: usize, lambda: f64) -> Self {
        Self {
            data: DMatrix::from_diagonal_element(n, n, Complex64::new(lambda, 0.0)),
        }
    }

    /// Diagonal matrix from real entries.
    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        let n = diag.len();
        let mut data = DMatrix::zeros(n, n);
        for (i, &d) in diag.iter().enumerate() {
            data[(i, i)] = Complex64::new(d, 0.0);
        }
        Self { data }
    }

    /// Conjugate by a unitary: g X g*.
    pub fn conjugate_by(&self, g: &DMatrix<Complex64>) -> Result<Self> {
        if g.nrows() != self.n() || g.ncols() != self.n() {
            return Err(Error::DimensionMismatch {
                left: self.n(),
                right: g.nrows(),
            });
        }
        make_hermitian(&(g * &self.data * g.adjoint()), 1e-9)
    }
}

/// Decomposition X = traceless + mean * I with trace(traceless) = 0.
#[derive(Debug, Clone)]
pub struct TraceSplit {
    pub traceless: HermitianMatrix,
    pub mean: f64,
}

impl TraceSplit {
    /// Reassemble traceless + mean * I.
    pub fn reconstruct(&self) -> HermitianMatrix {
        let n = self.traceless.n();
        let mut data = self.traceless.data.clone();
        for i in 0..n {
            data[(i, i)] += Complex64::new(self.mean, 0.0);
        }
        HermitianMatrix { data }
    }
}

/// Eigenvalues in ascending order with matching orthonormal eigenvectors.
///
/// Column i of `vectors` is the eigenvector paired with `values[i]`. The
/// phase of each eigenvector is fixed: its first component of magnitude
/// greater than 1/(2 sqrt(n)) is real positive.
#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    pub values: Vec<f64>,
    pub vectors: DMatrix<Complex64>,
}

impl EigenDecomposition {
    /// Reassemble V diag(values) V*.
    pub fn reconstruct(&self) -> DMatrix<Complex64> {
        let n = self.values.len();
        let mut d = DMatrix::zeros(n, n);
        for (i, &v) in self.values.iter().enumerate() {
            d[(i, i)] = Complex64::new(v, 0.0);
        }
        &self.vectors * d * self.vectors.adjoint()
    }

    /// Largest minus smallest eigenvalue.
    pub fn spread(&self) -> f64 {
        match (self.values.first(), self.values.last()) {
            (Some(lo), Some(hi)) => hi - lo,
            _ => 0.0,
        }
    }
}

/// Validate and symmetrize a raw complex matrix into S(n).
///
/// Returns (raw + raw*)/2 when the max-norm deviation ||raw - raw*||_max is
/// at most `tol`; the diagonal is stored with exactly zero imaginary part.
pub fn make_hermitian(raw: &DMatrix<Complex64>, tol: f64) -> Result<HermitianMatrix> {
    if raw.nrows() != raw.ncols() {
        return Err(Error::NotSquare {
            rows: raw.nrows(),
            cols: raw.ncols(),
        });
    }
    if raw.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::NonFinite);
    }
    let n = raw.nrows();
    let mut max_deviation: f64 = 0.0;
    for i in 0..n {
        for j in i..n {
            let dev = (raw[(i, j)] - raw[(j, i)].conj()).norm();
            max_deviation = max_deviation.max(dev);
        }
    }
    if max_deviation > tol {
        return Err(Error::NotHermitian { max_deviation, tol });
    }
    let mut data = DMatrix::zeros(n, n);
    for i in 0..n {
        data[(i, i)] = Complex64::new(raw[(i, i)].re, 0.0);
        for j in (i + 1)..n {
            let avg = 0.5 * (raw[(i, j)] + raw[(j, i)].conj());
            data[(i, j)] = avg;
            data[(j, i)] = avg.conj();
        }
    }
    Ok(HermitianMatrix { data })
}

/// Split off the trace: X = traceless + (tr X / n) * I.
///
/// The eigenvalues of X are those of the traceless part shifted by the mean,
/// so resolution questions can be studied on the trace-free slice.
pub fn trace_split(x: &HermitianMatrix) -> TraceSplit {
    let n = x.n();
    let mean = x.trace() / n as f64;
    let mut data = x.data.clone();
    for i in 0..n {
        data[(i, i)] = Complex64::new(data[(i, i)].re - mean, 0.0);
    }
    TraceSplit {
        traceless: HermitianMatrix { data },
        mean,
    }
}

/// Full eigendecomposition by cyclic complex Jacobi rotations.
///
/// Deterministic for identical input bits: fixed sweep order, ascending
/// eigenvalue sort with stable tie-break, and the crate-wide phase
/// convention applied to every eigenvector.
pub fn eigendecompose(x: &HermitianMatrix) -> Result<EigenDecomposition> {
    let (raw_values, raw_vectors) = eigen::jacobi_hermitian(&x.data)?;
    let n = raw_values.len();
    let mut order: Vec<usize> = (0..n).collect();
    // stable sort keeps the solver order on ties
    order.sort_by(|&a, &b| raw_values[a].partial_cmp(&raw_values[b]).unwrap());
    let values: Vec<f64> = order.iter().map(|&i| raw_values[i]).collect();
    let mut vectors = DMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        vectors.set_column(dst, &raw_vectors.column(src));
    }
    linalg::fix_column_phases(&mut vectors);
    Ok(EigenDecomposition { values, vectors })
}

/// GUE-style random draw: a matrix of independent standard complex Gaussian
/// entries G (each entry x + iy with x, y ~ N(0,1)) symmetrized to
/// (G + G*)/2. Entries are produced row-major from a ChaCha8 stream seeded
/// by `seed`, so draws are bit-reproducible per seed.
pub fn random_hermitian(n: usize, seed: u64) -> HermitianMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = gaussian_complex_matrix(n, &mut rng);
    let herm = (&g + g.adjoint()) * Complex64::new(0.5, 0.0);
    make_hermitian(&herm, 1e-9).expect("symmetrized Gaussian draw is Hermitian")
}

/// Haar-like random unitary: QR of a complex Gaussian matrix with the phase
/// of each column fixed so that its first nonzero entry is real positive.
pub fn random_unitary(n: usize, seed: u64) -> DMatrix<Complex64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(0x9e37_79b9_7f4a_7c15));
    let g = gaussian_complex_matrix(n, &mut rng);
    let qr = g.qr();
    let mut q = qr.q();
    // absorb the phases of R's diagonal, then apply the column convention
    let r = qr.r();
    for j in 0..n {
        let d = r[(j, j)];
        if d.norm() > 0.0 {
            let phase = d / d.norm();
            for i in 0..n {
                q[(i, j)] *= phase.conj();
            }
        }
    }
    for j in 0..n {
        let lead = (0..n).find(|&i| q[(i, j)].norm() > 0.0);
        if let Some(i) = lead {
            let z = q[(i, j)];
            let phase = z / z.norm();
            for k in 0..n {
                q[(k, j)] *= phase.conj();
            }
            q[(i, j)] = Complex64::new(q[(i, j)].re.abs(), 0.0);
        }
    }
    q
}

fn gaussian_complex_matrix(n: usize, rng: &mut ChaCha8Rng) -> DMatrix<Complex64> {
    let normal = StandardNormal;
    let mut data = Vec::with_capacity(n * n);
    for _ in 0..n * n {
        let re: f64 = normal.sample(rng);
        let im: f64 = normal.sample(rng);
        data.push(Complex64::new(re, im));
    }
    // from_vec fills column-major; the stream layout is fixed either way
    DMatrix::from_vec(n, n, data)
}
