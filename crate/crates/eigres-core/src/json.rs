//! Matrix JSON wire format.
//!
//! An n x n complex matrix is the object
//! `{"n": 2, "re": [[...], [...]], "im": [[...], [...]]}` with `im`
//! optional (defaults to all zero). Parsing validates shape and then goes
//! through [`make_hermitian`] with a caller-chosen tolerance.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hermitian::{make_hermitian, HermitianMatrix};

/// Serde image of the matrix JSON object.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MatrixJson {
    pub n: usize,
    pub re: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub im: Option<Vec<Vec<f64>>>,
}

impl MatrixJson {
    /// Validate shape and build the Hermitian matrix.
    pub fn into_hermitian(self, tol: f64) -> Result<HermitianMatrix> {
        let n = self.n;
        check_shape(&self.re, n)?;
        if let Some(im) = &self.im {
            check_shape(im, n)?;
        }
        let raw = DMatrix::from_fn(n, n, |i, j| {
            let re = self.re[i][j];
            let im = self.im.as_ref().map(|m| m[i][j]).unwrap_or(0.0);
            Complex64::new(re, im)
        });
        make_hermitian(&raw, tol)
    }

    /// Wire image of a validated matrix; `im` is omitted when every entry
    /// is real.
    pub fn from_hermitian(x: &HermitianMatrix) -> Self {
        let n = x.n();
        let re = (0..n)
            .map(|i| (0..n).map(|j| x.entry(i, j).re).collect())
            .collect();
        let any_imaginary = (0..n).any(|i| (0..n).any(|j| x.entry(i, j).im != 0.0));
        let im = any_imaginary.then(|| {
            (0..n)
                .map(|i| (0..n).map(|j| x.entry(i, j).im).collect())
                .collect()
        });
        Self { n, re, im }
    }
}

fn check_shape(rows: &[Vec<f64>], n: usize) -> Result<()> {
    if rows.len() != n || rows.iter().any(|r| r.len() != n) {
        return Err(Error::NotSquare {
            rows: rows.len(),
            cols: rows.first().map(Vec::len).unwrap_or(0),
        });
    }
    Ok(())
}
