//! Small shared linear-algebra helpers: frames, phase conventions,
//! principal angles.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::eigen;

/// Phase convention: the first component of each column with magnitude above
/// 1/(2 sqrt(n)) is made real positive.
pub fn fix_column_phases(m: &mut DMatrix<Complex64>) {
    let n = m.nrows();
    let threshold = 1.0 / (2.0 * (n as f64).sqrt());
    for j in 0..m.ncols() {
        let lead = (0..n).find(|&i| m[(i, j)].norm() > threshold);
        if let Some(i) = lead {
            let z = m[(i, j)];
            let phase = z / z.norm();
            for k in 0..n {
                m[(k, j)] *= phase.conj();
            }
            m[(i, j)] = Complex64::new(m[(i, j)].re.abs(), 0.0);
        }
    }
}

/// Orthonormalize columns in place by modified Gram-Schmidt with a second
/// re-orthogonalization pass.
pub fn orthonormalize_columns(m: &mut DMatrix<Complex64>) {
    let cols = m.ncols();
    for j in 0..cols {
        for _ in 0..2 {
            for i in 0..j {
                let qi = m.column(i).clone_owned();
                let coeff = qi.adjoint() * m.column(j);
                let correction = &qi * coeff[(0, 0)];
                let mut col = m.column_mut(j);
                col -= correction;
            }
        }
        let norm = m.column(j).norm();
        if norm > 0.0 {
            let mut col = m.column_mut(j);
            col /= Complex64::new(norm, 0.0);
        }
    }
}

/// Deterministic orthonormal basis of the column space of a (numerically)
/// rank-k matrix: greedy column-pivoted Gram-Schmidt, largest residual norm
/// first, lowest index on ties.
pub fn orthonormal_image(p: &DMatrix<Complex64>, k: usize) -> DMatrix<Complex64> {
    let n = p.nrows();
    let mut work = p.clone();
    let mut frame = DMatrix::zeros(n, k);
    for step in 0..k {
        let mut best = 0;
        let mut best_norm = -1.0;
        for j in 0..work.ncols() {
            let norm = work.column(j).norm();
            if norm > best_norm {
                best_norm = norm;
                best = j;
            }
        }
        let mut col = work.column(best).clone_owned();
        // re-orthogonalize against the frame built so far
        for _ in 0..2 {
            for i in 0..step {
                let qi = frame.column(i).clone_owned();
                let coeff = (qi.adjoint() * &col)[(0, 0)];
                col -= &qi * coeff;
            }
        }
        let norm = col.norm();
        if norm > 0.0 {
            col /= Complex64::new(norm, 0.0);
        }
        frame.set_column(step, &col);
        // deflate the pivot direction out of the remaining columns
        for j in 0..work.ncols() {
            let coeff = (col.adjoint() * work.column(j))[(0, 0)];
            let correction = &col * coeff;
            let mut wj = work.column_mut(j);
            wj -= correction;
        }
    }
    frame
}

/// Extend a frame of k orthonormal columns to a full unitary by
/// orthogonalizing the standard basis against it; returns the n-k new
/// columns.
pub fn orthonormal_complement(frame: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    let n = frame.nrows();
    let k = frame.ncols();
    let mut candidates = DMatrix::<Complex64>::identity(n, n);
    for j in 0..n {
        let mut col = candidates.column(j).clone_owned();
        for i in 0..k {
            let qi = frame.column(i).clone_owned();
            let coeff = (qi.adjoint() * &col)[(0, 0)];
            col -= &qi * coeff;
        }
        candidates.set_column(j, &col);
    }
    orthonormal_image(&candidates, n - k)
}

/// Eigenvalues of a small Hermitian matrix, ascending. The input is
/// symmetrized first so Gram-type matrices with roundoff are accepted.
pub fn hermitian_eigenvalues(m: &DMatrix<Complex64>) -> Vec<f64> {
    let sym = (m + m.adjoint()) * Complex64::new(0.5, 0.0);
    let (mut values, _) = eigen::jacobi_hermitian(&sym).expect("small Hermitian eigensolve");
    values.sort_by(|a, b| a.partial_cmp(b).unwrap());
    values
}

/// Smallest singular value of a rectangular complex matrix, via the
/// eigenvalues of the Gram matrix of the narrower side.
pub fn smallest_singular_value(m: &DMatrix<Complex64>) -> f64 {
    let gram = if m.nrows() >= m.ncols() {
        m.adjoint() * m
    } else {
        m * m.adjoint()
    };
    let values = hermitian_eigenvalues(&gram);
    values.first().map(|v| v.max(0.0).sqrt()).unwrap_or(0.0)
}

/// Principal angles between the spans of two orthonormal frames, ascending,
/// in radians.
///
/// Cosines come from the cross-Gram matrix; angles below 45 degrees are
/// recomputed through the sine route (singular values of F - G G* F), which
/// stays accurate where acos of a near-1 cosine loses half the digits.
pub fn principal_angles(f: &DMatrix<Complex64>, g: &DMatrix<Complex64>) -> Vec<f64> {
    assert_eq!(f.nrows(), g.nrows(), "frames live in the same ambient space");
    assert_eq!(f.ncols(), g.ncols(), "frames have the same rank");
    let k = f.ncols();
    if k == 0 {
        return Vec::new();
    }
    let m = g.adjoint() * f;
    // cos^2 of the angles, ascending = angles descending
    let cos2 = hermitian_eigenvalues(&(m.adjoint() * &m));
    // sin^2 of the angles, ascending = angles ascending
    let b = f - g * &m;
    let sin2 = hermitian_eigenvalues(&(b.adjoint() * &b));
    let mut angles = Vec::with_capacity(k);
    for i in 0..k {
        let s2 = sin2[i].clamp(0.0, 1.0);
        let angle = if s2 <= 0.5 {
            s2.sqrt().asin()
        } else {
            let c2 = cos2[k - 1 - i].clamp(0.0, 1.0);
            c2.sqrt().acos()
        };
        angles.push(angle);
    }
    angles
}

/// Angle between two complex lines spanned by unit vectors, in radians.
/// Computed through the sine (residual norm), accurate near zero.
pub fn line_angle(u: &DMatrix<Complex64>, v: &DMatrix<Complex64>) -> f64 {
    let overlap = (v.adjoint() * u)[(0, 0)];
    let residual = u - v * overlap;
    let s = residual.norm().min(1.0);
    if s <= std::f64::consts::FRAC_1_SQRT_2 {
        s.asin()
    } else {
        overlap.norm().min(1.0).acos()
    }
}

/// |<u, v>| for unit column vectors: the overlap of the lines they span.
pub fn line_overlap(u: &DMatrix<Complex64>, v: &DMatrix<Complex64>) -> f64 {
    (v.adjoint() * u)[(0, 0)].norm()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn cx(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn orthonormal_image_of_diagonal_projector() {
        let p = DMatrix::from_row_slice(
            2,
            2,
            &[cx(1.0, 0.0), cx(0.0, 0.0), cx(0.0, 0.0), cx(0.0, 0.0)],
        );
        let frame = orthonormal_image(&p, 1);
        assert_relative_eq!(frame[(0, 0)].re, 1.0, epsilon = 1e-14);
        assert_relative_eq!(frame[(1, 0)].norm(), 0.0, epsilon = 1e-14);
    }

    #[test]
    fn complement_completes_to_unitary() {
        let mut frame = DMatrix::zeros(3, 1);
        frame[(0, 0)] = cx(0.6, 0.0);
        frame[(1, 0)] = cx(0.0, 0.8);
        let comp = orthonormal_complement(&frame);
        let mut full = DMatrix::zeros(3, 3);
        full.set_column(0, &frame.column(0));
        full.set_column(1, &comp.column(0));
        full.set_column(2, &comp.column(1));
        let gram = full.adjoint() * &full;
        assert!((gram - DMatrix::identity(3, 3)).norm() < 1e-12);
    }

    #[test]
    fn principal_angles_known_rotation() {
        // span{e1} vs span{cos t e1 + sin t e2}
        let t = 0.3_f64;
        let f = DMatrix::from_row_slice(2, 1, &[cx(1.0, 0.0), cx(0.0, 0.0)]);
        let g = DMatrix::from_row_slice(2, 1, &[cx(t.cos(), 0.0), cx(t.sin(), 0.0)]);
        let angles = principal_angles(&f, &g);
        assert_relative_eq!(angles[0], t, epsilon = 1e-12);
    }

    #[test]
    fn principal_angles_resolve_tiny_angles() {
        let t = 3e-9_f64;
        let f = DMatrix::from_row_slice(2, 1, &[cx(1.0, 0.0), cx(0.0, 0.0)]);
        let g = DMatrix::from_row_slice(2, 1, &[cx(t.cos(), 0.0), cx(t.sin(), 0.0)]);
        let angles = principal_angles(&f, &g);
        assert_relative_eq!(angles[0], t, max_relative = 1e-6);
    }

    #[test]
    fn line_angle_ignores_phase() {
        let u = DMatrix::from_row_slice(2, 1, &[cx(1.0, 0.0), cx(0.0, 0.0)]);
        let phase = cx(0.0, 1.0);
        let v = DMatrix::from_row_slice(2, 1, &[phase, cx(0.0, 0.0)]);
        assert!(line_angle(&u, &v) < 1e-14);
    }
}
