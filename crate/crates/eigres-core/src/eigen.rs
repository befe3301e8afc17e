//! Cyclic Jacobi eigensolver for complex Hermitian matrices.
//!
//! Each rotation zeroes one off-diagonal entry a_pq: the entry's phase is
//! absorbed into a diagonal phase factor, which reduces the 2 x 2 pivot block
//! to the real symmetric case, and the classic symmetric Schur rotation is
//! applied. Sweeps run in fixed row order, so the solver is deterministic
//! for identical input bits. Quadratic convergence makes 10 or so sweeps
//! plenty at desk scale.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

const MAX_SWEEPS: usize = 60;

/// Eigenvalues (unsorted, real) and eigenvectors (columns of a unitary) of a
/// Hermitian matrix. Callers are responsible for sorting and phase fixing.
pub(crate) fn jacobi_hermitian(a: &DMatrix<Complex64>) -> Result<(Vec<f64>, DMatrix<Complex64>)> {
    let n = a.nrows();
    debug_assert_eq!(n, a.ncols());
    if n == 0 {
        return Err(Error::EmptyInput);
    }
    let mut m = a.clone();
    let mut v = DMatrix::identity(n, n);
    if n == 1 {
        return Ok((vec![m[(0, 0)].re], v));
    }

    let frob = m.norm();
    let target = 1e-14 * (1.0 + frob);

    for sweep in 0..MAX_SWEEPS {
        let off = off_diagonal_norm(&m);
        if off <= target {
            let values = (0..n).map(|i| m[(i, i)].re).collect();
            return Ok((values, v));
        }
        for p in 0..n - 1 {
            for q in p + 1..n {
                rotate(&mut m, &mut v, p, q);
            }
        }
        // guard against a stall on the final allowed sweep
        if sweep == MAX_SWEEPS - 1 {
            let off = off_diagonal_norm(&m);
            if off <= target {
                let values = (0..n).map(|i| m[(i, i)].re).collect();
                return Ok((values, v));
            }
            return Err(Error::ConvergenceFailure {
                sweeps: MAX_SWEEPS,
                off_diagonal: off,
            });
        }
    }
    unreachable!()
}

fn off_diagonal_norm(m: &DMatrix<Complex64>) -> f64 {
    let n = m.nrows();
    let mut sum = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                sum += m[(i, j)].norm_sqr();
            }
        }
    }
    sum.sqrt()
}

/// One Jacobi rotation zeroing m[(p, q)], accumulated into v.
fn rotate(m: &mut DMatrix<Complex64>, v: &mut DMatrix<Complex64>, p: usize, q: usize) {
    let apq = m[(p, q)];
    let abs = apq.norm();
    if abs == 0.0 {
        return;
    }
    let app = m[(p, p)].re;
    let aqq = m[(q, q)].re;
    let phase = apq / abs;

    // real symmetric Schur rotation for [[app, |apq|], [|apq|, aqq]]
    let tau = (aqq - app) / (2.0 * abs);
    let t = if tau >= 0.0 {
        1.0 / (tau + (1.0 + tau * tau).sqrt())
    } else {
        1.0 / (tau - (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;

    // unitary U: U_pp = c, U_pq = s, U_qp = -s conj(phase), U_qq = c conj(phase)
    let upq = Complex64::new(s, 0.0);
    let upp = Complex64::new(c, 0.0);
    let uqp = -phase.conj() * s;
    let uqq = phase.conj() * c;

    let n = m.nrows();
    // right multiply: columns p, q
    for i in 0..n {
        let mip = m[(i, p)];
        let miq = m[(i, q)];
        m[(i, p)] = mip * upp + miq * uqp;
        m[(i, q)] = mip * upq + miq * uqq;
    }
    // left multiply by U*: rows p, q
    for j in 0..n {
        let mpj = m[(p, j)];
        let mqj = m[(q, j)];
        m[(p, j)] = upp.conj() * mpj + uqp.conj() * mqj;
        m[(q, j)] = upq.conj() * mpj + uqq.conj() * mqj;
    }
    // the pivot pair is exactly decoupled; keep the matrix exactly Hermitian
    m[(p, q)] = Complex64::new(0.0, 0.0);
    m[(q, p)] = Complex64::new(0.0, 0.0);
    m[(p, p)] = Complex64::new(m[(p, p)].re, 0.0);
    m[(q, q)] = Complex64::new(m[(q, q)].re, 0.0);

    for i in 0..n {
        let vip = v[(i, p)];
        let viq = v[(i, q)];
        v[(i, p)] = vip * upp + viq * uqp;
        v[(i, q)] = vip * upq + viq * uqq;
    }
}
