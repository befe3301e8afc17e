//! Transport of cluster subspaces and eigenlines along matrix paths.
//!
//! A path is a list of samples (t, X_t). Cluster tracking recomputes the
//! Riesz projector at every sample and re-bases the previous frame by
//! projecting it forward, so the transported frame always spans the current
//! invariant subspace; eigenline tracking matches eigenvector lines between
//! consecutive samples by largest overlap. Both report how the endpoint
//! object sits relative to the start: permutation of labels, principal
//! angles, and whether a swap occurred. This is what distinguishes the
//! radial front face (a sphere: tracking the doubled loop returns every
//! line to itself) from the projective one (antipodal points identified:
//! a single traversal between antipodal matrices swaps the two lines).
//!
//! Builtin paths:
//! - `loop2x2`: X(s) = [[cos pi s, sin pi s], [sin pi s, -cos pi s]], the
//!   unit circle of trace-free matrices between antipodal points.
//! - `curve4x4`: a repaired version of the 4 x 4 small-resolution
//!   counterexample; the printed segment formulas disagree at the junctions,
//!   so each diagonal entry is reparametrized with matched endpoints and
//!   smooth ramps while keeping the program: split the top cluster, rotate
//!   the (e1,e3) and (e2,e4) planes by pi/2 while the 0-gap stays open,
//!   re-merge. The base curve does not close (the printed endpoint data
//!   cannot close either); the closure residual is reported, not asserted.
//! - `ray3`: a straight segment in S(3) through an exact double eigenvalue
//!   at its midpoint, for smoothness probes of the lifted eigenvalues.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::hermitian::{eigendecompose, make_hermitian, random_unitary, HermitianMatrix};
use crate::linalg;
use crate::riesz;

/// Overlap below which matching refuses to guess.
pub const MATCH_THRESHOLD: f64 = std::f64::consts::FRAC_1_SQRT_2;

/// A discretized path of Hermitian matrices over t in [0, 1].
#[derive(Debug, Clone)]
pub struct MatrixPath {
    /// Samples (t, X_t), t strictly increasing from 0 to 1.
    pub samples: Vec<(f64, HermitianMatrix)>,
    /// Largest consecutive step ||X_{i+1} - X_i||_F.
    pub step_bound: f64,
    /// ||X(1) - X(0)||_F.
    pub closure_residual: f64,
}

impl MatrixPath {
    /// Build from samples, recording step bound and closure residual.
    pub fn new(samples: Vec<(f64, HermitianMatrix)>) -> Result<Self> {
        if samples.len() < 2 {
            return Err(Error::EmptyInput);
        }
        if !samples.windows(2).all(|w| w[0].0 < w[1].0) {
            return Err(Error::EmptyInput);
        }
        let step_bound = samples
            .windows(2)
            .map(|w| (w[1].1.as_matrix() - w[0].1.as_matrix()).norm())
            .fold(0.0, f64::max);
        let closure_residual = (samples[samples.len() - 1].1.as_matrix()
            - samples[0].1.as_matrix())
        .norm();
        Ok(Self {
            samples,
            step_bound,
            closure_residual,
        })
    }

    pub fn n(&self) -> usize {
        self.samples[0].1.n()
    }
}

/// What kind of object was transported.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TrackKind {
    ClusterSubspace,
    Eigenline,
}

/// Per-sample tracking record, the row data of the trajectory CSV.
#[derive(Debug, Clone)]
pub struct TrajectorySample {
    pub t: f64,
    /// n tracked value columns (label-continued for eigenlines, sorted for
    /// cluster transport).
    pub f: Vec<f64>,
    /// Largest angle of the transported object against its start, radians.
    pub angle_max: f64,
    /// Smallest matching overlap of the step into this sample.
    pub overlap_min: f64,
}

/// Result of transporting an object around a path.
#[derive(Debug, Clone)]
pub struct MonodromyReport {
    pub kind: TrackKind,
    /// Start object: cluster frame (n x k) or line bundle frame (n x n).
    pub start_frame: DMatrix<Complex64>,
    /// Transported object at the final sample.
    pub end_frame: DMatrix<Complex64>,
    /// permutation[i] = start label best matching transported label i.
    pub permutation: Vec<usize>,
    /// Cluster: angles of the end span against the start span. Eigenlines:
    /// angle of each end line against its matched start line.
    pub principal_angles: Vec<f64>,
    pub closure_residual: f64,
    /// True when the endpoint is (close to) orthogonal to where it started:
    /// largest principal angle >= pi/2 - 1e-3 for clusters, a nontrivial
    /// permutation for eigenlines.
    pub swap_detected: bool,
    pub trajectory: Vec<TrajectorySample>,
}

/// Transport the below-cut cluster subspace along the path.
pub fn track_cluster(path: &MatrixPath, cut: f64, nodes: usize) -> Result<MonodromyReport> {
    if nodes < 8 {
        return Err(Error::TooFewNodes { nodes });
    }
    let n = path.n();
    let mut frames: Vec<DMatrix<Complex64>> = Vec::with_capacity(path.samples.len());
    let mut trajectory = Vec::with_capacity(path.samples.len());
    let mut k_expected = 0usize;

    for (idx, (t, x)) in path.samples.iter().enumerate() {
        let eig = eigendecompose(x)?;
        let distance = eig
            .values
            .iter()
            .map(|v| (v - cut).abs())
            .fold(f64::INFINITY, f64::min);
        if distance < 1e-10 {
            return Err(Error::GapLost { t: *t, distance });
        }
        let k = eig.values.iter().filter(|&&v| v < cut).count();
        if idx == 0 {
            k_expected = k;
            if k == 0 || k == n {
                return Err(Error::GapLost {
                    t: *t,
                    distance: f64::INFINITY,
                });
            }
        } else if k != k_expected {
            return Err(Error::GapLost { t: *t, distance });
        }

        let p = riesz::projector_for_cut(x, &eig.values, cut, nodes)?;
        let (frame, overlap) = if let Some(prev) = frames.last() {
            // transport: project the previous frame into the new subspace
            let mut carried = &p * prev;
            linalg::orthonormalize_columns(&mut carried);
            let overlap = linalg::smallest_singular_value(&(prev.adjoint() * &carried));
            if overlap < MATCH_THRESHOLD {
                return Err(Error::StepTooCoarse { t: *t, overlap });
            }
            (carried, overlap)
        } else {
            (linalg::orthonormal_image(&p, k), 1.0)
        };

        let angle_max = if idx == 0 {
            0.0
        } else {
            linalg::principal_angles(&frame, &frames[0])
                .into_iter()
                .fold(0.0, f64::max)
        };
        trajectory.push(TrajectorySample {
            t: *t,
            f: eig.values.clone(),
            angle_max,
            overlap_min: overlap,
        });
        frames.push(frame);
    }

    let start_frame = frames[0].clone();
    let end_frame = frames[frames.len() - 1].clone();
    let principal_angles = linalg::principal_angles(&end_frame, &start_frame);
    let largest = principal_angles.iter().copied().fold(0.0, f64::max);
    let swap_detected = largest >= std::f64::consts::FRAC_PI_2 - 1e-3;

    // labels {0: tracked cluster, 1: complement}
    let overlap_start = linalg::smallest_singular_value(&(start_frame.adjoint() * &end_frame));
    let permutation = if overlap_start >= MATCH_THRESHOLD {
        vec![0, 1]
    } else if n == 2 * k_expected {
        let comp = linalg::orthonormal_complement(&start_frame);
        let overlap_comp = linalg::smallest_singular_value(&(comp.adjoint() * &end_frame));
        if overlap_comp >= MATCH_THRESHOLD {
            vec![1, 0]
        } else {
            return Err(Error::MatchAmbiguous {
                overlap: overlap_start.max(overlap_comp),
            });
        }
    } else {
        return Err(Error::MatchAmbiguous {
            overlap: overlap_start,
        });
    };

    Ok(MonodromyReport {
        kind: TrackKind::ClusterSubspace,
        start_frame,
        end_frame,
        permutation,
        principal_angles,
        closure_residual: path.closure_residual,
        swap_detected,
        trajectory,
    })
}

/// Track all n eigenlines along a path with simple interior spectrum.
pub fn track_eigenlines(path: &MatrixPath) -> Result<MonodromyReport> {
    let n = path.n();
    let last = path.samples.len() - 1;
    let mut current: Vec<DMatrix<Complex64>> = Vec::new();
    let mut start: Vec<DMatrix<Complex64>> = Vec::new();
    let mut trajectory = Vec::with_capacity(path.samples.len());

    for (idx, (t, x)) in path.samples.iter().enumerate() {
        let eig = eigendecompose(x)?;
        if idx != 0 && idx != last {
            let gap = eig
                .values
                .windows(2)
                .map(|w| w[1] - w[0])
                .fold(f64::INFINITY, f64::min);
            if gap < 1e-10 {
                return Err(Error::DegenerateInterior { t: *t, gap });
            }
        }
        let columns: Vec<DMatrix<Complex64>> = (0..n)
            .map(|j| DMatrix::from_column_slice(n, 1, eig.vectors.column(j).as_slice()))
            .collect();

        if idx == 0 {
            start = columns.clone();
            current = columns;
            trajectory.push(TrajectorySample {
                t: *t,
                f: eig.values.clone(),
                angle_max: 0.0,
                overlap_min: 1.0,
            });
            continue;
        }

        let assignment = match_lines(&current, &columns)?;
        let mut overlap_min = 1.0f64;
        let mut next = Vec::with_capacity(n);
        let mut f = vec![0.0; n];
        for (label, &j) in assignment.iter().enumerate() {
            let overlap = linalg::line_overlap(&current[label], &columns[j]);
            overlap_min = overlap_min.min(overlap);
            next.push(columns[j].clone());
            f[label] = eig.values[j];
        }
        current = next;
        let angle_max = current
            .iter()
            .zip(&start)
            .map(|(c, s)| linalg::line_angle(c, s))
            .fold(0.0, f64::max);
        trajectory.push(TrajectorySample {
            t: *t,
            f,
            angle_max,
            overlap_min,
        });
    }

    // compare end lines to start lines as lines
    let permutation = match_lines(&current, &start)?;
    let principal_angles: Vec<f64> = current
        .iter()
        .zip(&permutation)
        .map(|(line, &j)| linalg::line_angle(line, &start[j]))
        .collect();
    let swap_detected = permutation.iter().enumerate().any(|(i, &j)| i != j);

    let start_frame = columns_to_matrix(&start);
    let end_frame = columns_to_matrix(&current);
    Ok(MonodromyReport {
        kind: TrackKind::Eigenline,
        start_frame,
        end_frame,
        permutation,
        principal_angles,
        closure_residual: path.closure_residual,
        swap_detected,
        trajectory,
    })
}

/// Greedy best-overlap assignment of `from` lines onto `to` lines.
/// assignment[i] = index in `to`; every match must clear the threshold.
fn match_lines(
    from: &[DMatrix<Complex64>],
    to: &[DMatrix<Complex64>],
) -> Result<Vec<usize>> {
    let n = from.len();
    let mut pairs = Vec::with_capacity(n * n);
    for (i, u) in from.iter().enumerate() {
        for (j, v) in to.iter().enumerate() {
            pairs.push((linalg::line_overlap(u, v), i, j));
        }
    }
    pairs.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap());
    let mut assignment = vec![usize::MAX; n];
    let mut taken = vec![false; n];
    let mut assigned = 0;
    for (overlap, i, j) in pairs {
        if assignment[i] != usize::MAX || taken[j] {
            continue;
        }
        if overlap < MATCH_THRESHOLD {
            return Err(Error::MatchAmbiguous { overlap });
        }
        assignment[i] = j;
        taken[j] = true;
        assigned += 1;
        if assigned == n {
            break;
        }
    }
    Ok(assignment)
}

fn columns_to_matrix(cols: &[DMatrix<Complex64>]) -> DMatrix<Complex64> {
    let n = cols[0].nrows();
    let mut m = DMatrix::zeros(n, cols.len());
    for (j, c) in cols.iter().enumerate() {
        m.set_column(j, &c.column(0));
    }
    m
}

/// The builtin demonstration paths.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PathName {
    Loop2x2,
    Curve4x4,
    Ray3,
}

impl std::str::FromStr for PathName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "loop2x2" => Ok(PathName::Loop2x2),
            "curve4x4" => Ok(PathName::Curve4x4),
            "ray3" => Ok(PathName::Ray3),
            other => Err(Error::UnknownName {
                name: other.to_string(),
            }),
        }
    }
}

impl PathName {
    pub fn as_str(&self) -> &'static str {
        match self {
            PathName::Loop2x2 => "loop2x2",
            PathName::Curve4x4 => "curve4x4",
            PathName::Ray3 => "ray3",
        }
    }
}

/// Knobs for the builtin paths.
#[derive(Debug, Clone, Copy)]
pub struct PathParams {
    /// Number of traversals of loop2x2 (2 closes the loop on the double
    /// cover of the front face). Ignored by the other paths.
    pub laps: u32,
    /// Seed of the conjugating unitary of ray3. Ignored by the others.
    pub seed: u64,
}

impl Default for PathParams {
    fn default() -> Self {
        Self { laps: 1, seed: 0 }
    }
}

/// Evaluate a builtin path at an arbitrary parameter value in [0, 1].
pub fn builtin_matrix(name: PathName, t: f64, params: &PathParams) -> HermitianMatrix {
    match name {
        PathName::Loop2x2 => loop2x2_matrix(params.laps as f64 * t),
        PathName::Curve4x4 => curve4x4_matrix(t),
        PathName::Ray3 => ray3_matrix(t, params.seed),
    }
}

/// Sample a builtin path on a uniform grid of `steps` steps.
pub fn builtin_path(name: PathName, steps: usize, params: &PathParams) -> Result<MatrixPath> {
    if steps < 16 {
        return Err(Error::TooFewSteps { steps });
    }
    let samples = (0..=steps)
        .map(|i| {
            let t = i as f64 / steps as f64;
            (t, builtin_matrix(name, t, params))
        })
        .collect();
    MatrixPath::new(samples)
}

fn loop2x2_matrix(s: f64) -> HermitianMatrix {
    let (a, c) = ((std::f64::consts::PI * s).cos(), (std::f64::consts::PI * s).sin());
    let raw = DMatrix::from_row_slice(
        2,
        2,
        &[
            Complex64::new(a, 0.0),
            Complex64::new(c, 0.0),
            Complex64::new(c, 0.0),
            Complex64::new(-a, 0.0),
        ],
    );
    make_hermitian(&raw, 1e-12).expect("loop2x2 sample is Hermitian")
}

/// Quintic ramp: w(0) = 0, w(1) = 1, first and second derivative vanish at
/// both ends.
fn smootherstep(s: f64) -> f64 {
    let s = s.clamp(0.0, 1.0);
    s * s * s * (s * (6.0 * s - 15.0) + 10.0)
}

/// Diagonal entries and rotation angle of the repaired 4 x 4 curve.
///
/// Segment A (t in [0, 1/3]): top pair splits from (1, 1) to (2/3, 4/3),
/// bottom stays (-1, -1), no rotation. Segment B: bottom splits to
/// (-4/3, -2/3), top re-merges to (1, 1), rotation angle ramps 0 -> pi/2.
/// Segment C: bottom re-merges to (-1, -1), rotation stays pi/2.
fn curve4x4_data(t: f64) -> ([f64; 4], f64) {
    if t <= 1.0 / 3.0 {
        let w = smootherstep(3.0 * t);
        ([-1.0, -1.0, 1.0 - w / 3.0, 1.0 + w / 3.0], 0.0)
    } else if t <= 2.0 / 3.0 {
        let w = smootherstep(3.0 * t - 1.0);
        (
            [
                -1.0 - w / 3.0,
                -1.0 + w / 3.0,
                2.0 / 3.0 + w / 3.0,
                4.0 / 3.0 - w / 3.0,
            ],
            std::f64::consts::FRAC_PI_2 * w,
        )
    } else {
        let w = smootherstep(3.0 * t - 2.0);
        (
            [-4.0 / 3.0 + w / 3.0, -2.0 / 3.0 - w / 3.0, 1.0, 1.0],
            std::f64::consts::FRAC_PI_2,
        )
    }
}

fn curve4x4_matrix(t: f64) -> HermitianMatrix {
    let (lambda, phi) = curve4x4_data(t);
    let (c, s) = (phi.cos(), phi.sin());
    // U = R_13(phi) R_24(phi); at phi = pi/2 this is the column permutation
    // (e3, e4, -e1, -e2)
    let mut u = DMatrix::<f64>::zeros(4, 4);
    u[(0, 0)] = c;
    u[(0, 2)] = -s;
    u[(2, 0)] = s;
    u[(2, 2)] = c;
    u[(1, 1)] = c;
    u[(1, 3)] = -s;
    u[(3, 1)] = s;
    u[(3, 3)] = c;
    let mut x = DMatrix::<f64>::zeros(4, 4);
    for i in 0..4 {
        for j in 0..4 {
            let mut acc = 0.0;
            for k in 0..4 {
                acc += u[(i, k)] * lambda[k] * u[(j, k)];
            }
            x[(i, j)] = acc;
        }
    }
    let complex = x.map(|v| Complex64::new(v, 0.0));
    make_hermitian(&complex, 1e-12).expect("curve4x4 sample is Hermitian")
}

/// Segment through an exact conical double point: X(t) = G (D + u C) G*,
/// u = 2t - 1, D = diag(1, 1, 5). The perturbation C couples the degenerate
/// pair to each other and to the far eigenvector, so the lifted values bend
/// genuinely while the crossing at u = 0 stays exact.
fn ray3_matrix(t: f64, seed: u64) -> HermitianMatrix {
    let u = 2.0 * t - 1.0;
    let beta = Complex64::new(0.3, 0.1);
    let gamma = Complex64::new(0.2, -0.25);
    let zero = Complex64::new(0.0, 0.0);
    let c = DMatrix::from_row_slice(
        3,
        3,
        &[
            Complex64::new(1.0, 0.0),
            beta,
            gamma,
            beta.conj(),
            Complex64::new(-1.0, 0.0),
            zero,
            gamma.conj(),
            zero,
            zero,
        ],
    );
    let d = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![
        Complex64::new(1.0, 0.0),
        Complex64::new(1.0, 0.0),
        Complex64::new(5.0, 0.0),
    ]));
    let g = random_unitary(3, seed);
    let inner = d + c * Complex64::new(u, 0.0);
    make_hermitian(&(&g * inner * g.adjoint()), 1e-9).expect("ray3 sample is Hermitian")
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn constant_path_identity_cluster() {
        let x = HermitianMatrix::from_real_diagonal(&[-1.0, 1.0]);
        let samples: Vec<(f64, HermitianMatrix)> = (0..=20)
            .map(|i| (i as f64 / 20.0, x.clone()))
            .collect();
        let path = MatrixPath::new(samples).unwrap();
        let report = track_cluster(&path, 0.0, 64).unwrap();
        assert_eq!(report.permutation, vec![0, 1]);
        assert!(!report.swap_detected);
        assert!(report.principal_angles.iter().all(|&a| a < 1e-10));
        assert!(report.closure_residual < 1e-14);
    }

    #[test]
    fn loop2x2_samples_have_unit_eigenvalues() {
        let path = builtin_path(PathName::Loop2x2, 256, &PathParams::default()).unwrap();
        assert_eq!(path.samples.len(), 257);
        for (_, x) in &path.samples {
            let eig = eigendecompose(x).unwrap();
            assert_relative_eq!(eig.values[0], -1.0, epsilon = 1e-12);
            assert_relative_eq!(eig.values[1], 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn loop2x2_single_lap_swaps_lines() {
        let path = builtin_path(PathName::Loop2x2, 256, &PathParams::default()).unwrap();
        let report = track_eigenlines(&path).unwrap();
        assert_eq!(report.permutation, vec![1, 0]);
        assert!(report.swap_detected);
        for &angle in &report.principal_angles {
            assert!(angle <= 1e-8, "angle {angle}");
        }
    }

    #[test]
    fn loop2x2_double_lap_is_identity() {
        let params = PathParams {
            laps: 2,
            ..Default::default()
        };
        let path = builtin_path(PathName::Loop2x2, 512, &params).unwrap();
        assert!(path.closure_residual < 1e-12);
        let report = track_eigenlines(&path).unwrap();
        assert_eq!(report.permutation, vec![0, 1]);
        assert!(!report.swap_detected);
        for &angle in &report.principal_angles {
            assert!(angle <= 1e-8, "angle {angle}");
        }
    }

    #[test]
    fn curve4x4_endpoints_and_gap() {
        let path = builtin_path(PathName::Curve4x4, 512, &PathParams::default()).unwrap();
        assert_eq!(path.samples.len(), 513);
        let eig0 = eigendecompose(&path.samples[0].1).unwrap();
        for (got, want) in eig0.values.iter().zip([-1.0, -1.0, 1.0, 1.0]) {
            assert_relative_eq!(*got, want, epsilon = 1e-12);
        }
        // gap around zero stays open along the whole curve
        let mut min_gap = f64::INFINITY;
        for (_, x) in &path.samples {
            let eig = eigendecompose(x).unwrap();
            let below = eig.values.iter().filter(|&&v| v < 0.0).cloned().fold(f64::NEG_INFINITY, f64::max);
            let above = eig.values.iter().filter(|&&v| v > 0.0).cloned().fold(f64::INFINITY, f64::min);
            min_gap = min_gap.min(above - below);
        }
        assert!(min_gap >= 0.3, "min gap {min_gap}");
    }

    #[test]
    fn curve4x4_swaps_bottom_plane() {
        let path = builtin_path(PathName::Curve4x4, 512, &PathParams::default()).unwrap();
        let report = track_cluster(&path, 0.0, 64).unwrap();
        assert!(report.swap_detected);
        assert_eq!(report.permutation, vec![1, 0]);
        // start span is {e1, e2}: first two rows carry all the weight
        let start_weight: f64 = (0..2)
            .map(|i| report.start_frame.row(i).norm_squared())
            .sum();
        assert_relative_eq!(start_weight, 2.0, epsilon = 1e-9);
        // end span is {e3, e4}
        let end_weight: f64 = (2..4)
            .map(|i| report.end_frame.row(i).norm_squared())
            .sum();
        assert_relative_eq!(end_weight, 2.0, epsilon = 1e-6);
    }

    #[test]
    fn contractible_loop_no_swap() {
        // g(t) = exp(i s(t) H) with s(0) = s(1) = 0 is a contractible loop
        let h = crate::hermitian::random_hermitian(3, 4);
        let d = HermitianMatrix::from_real_diagonal(&[-1.0, 0.5, 2.0]);
        let steps = 64;
        let samples: Vec<(f64, HermitianMatrix)> = (0..=steps)
            .map(|i| {
                let t = i as f64 / steps as f64;
                let s = (std::f64::consts::PI * t).sin();
                let eig = eigendecompose(&h).unwrap();
                let mut u = DMatrix::<Complex64>::zeros(3, 3);
                for j in 0..3 {
                    let phase = Complex64::new(0.0, s * eig.values[j]).exp();
                    let col = eig.vectors.column(j);
                    u += (col * col.adjoint()) * phase;
                }
                (t, d.conjugate_by(&u).unwrap())
            })
            .collect();
        let path = MatrixPath::new(samples).unwrap();
        assert!(path.closure_residual < 1e-9);
        let report = track_eigenlines(&path).unwrap();
        assert_eq!(report.permutation, vec![0, 1, 2]);
    }

    #[test]
    fn scalar_phase_loop_keeps_lines() {
        // conjugation by a global phase does not move lines at all
        let d = HermitianMatrix::from_real_diagonal(&[1.0, 2.0, 3.0]);
        let steps = 32;
        let samples: Vec<(f64, HermitianMatrix)> = (0..=steps)
            .map(|i| (i as f64 / steps as f64, d.clone()))
            .collect();
        let path = MatrixPath::new(samples).unwrap();
        let report = track_eigenlines(&path).unwrap();
        assert_eq!(report.permutation, vec![0, 1, 2]);
        assert!(!report.swap_detected);
    }

    #[test]
    fn curve4x4_three_quarters_splits_to_e3_e4() {
        let x = builtin_matrix(PathName::Curve4x4, 0.75, &PathParams::default());
        let split = riesz::split_at_gap(&x, 0.0, 64).unwrap();
        assert_eq!(split.k, 2);
        let mut e34 = DMatrix::<Complex64>::zeros(4, 2);
        e34[(2, 0)] = Complex64::new(1.0, 0.0);
        e34[(3, 1)] = Complex64::new(1.0, 0.0);
        let angles = linalg::principal_angles(&split.frame, &e34);
        assert!(angles.iter().all(|&a| a <= 1e-8), "{angles:?}");
    }

    #[test]
    fn contractible_loop_cluster_matches_refined_oracle() {
        // g(t) D g(t)* with a contractible unitary loop: no swap, agreeing
        // with the same tracker run at 10x refinement
        let h = crate::hermitian::random_hermitian(4, 8);
        let eig_h = eigendecompose(&h).unwrap();
        let d = HermitianMatrix::from_real_diagonal(&[-0.5, -0.4, 0.4, 0.5]);
        let sample_at = |t: f64| {
            let s = (std::f64::consts::PI * t).sin();
            let mut u = DMatrix::<Complex64>::zeros(4, 4);
            for j in 0..4 {
                let phase = Complex64::new(0.0, s * eig_h.values[j]).exp();
                let col = eig_h.vectors.column(j);
                u += (col * col.adjoint()) * phase;
            }
            d.conjugate_by(&u).unwrap()
        };
        let coarse: Vec<(f64, HermitianMatrix)> = (0..=32)
            .map(|i| (i as f64 / 32.0, sample_at(i as f64 / 32.0)))
            .collect();
        let fine: Vec<(f64, HermitianMatrix)> = (0..=320)
            .map(|i| (i as f64 / 320.0, sample_at(i as f64 / 320.0)))
            .collect();
        let report = track_cluster(&MatrixPath::new(coarse).unwrap(), 0.0, 64).unwrap();
        let oracle = track_cluster(&MatrixPath::new(fine).unwrap(), 0.0, 64).unwrap();
        assert!(!report.swap_detected);
        assert_eq!(report.permutation, oracle.permutation);
        assert_eq!(report.permutation, vec![0, 1]);
    }

    #[test]
    fn step_bound_halves_under_refinement() {
        for name in [PathName::Loop2x2, PathName::Curve4x4, PathName::Ray3] {
            let coarse = builtin_path(name, 64, &PathParams::default()).unwrap();
            let fine = builtin_path(name, 128, &PathParams::default()).unwrap();
            assert!(
                fine.step_bound <= 0.6 * coarse.step_bound,
                "{name:?}: {} vs {}",
                fine.step_bound,
                coarse.step_bound
            );
        }
    }

    #[test]
    fn gap_lost_is_detected() {
        // eigenvalues drift across the cut half way along the path
        let samples: Vec<(f64, HermitianMatrix)> = (0..=32)
            .map(|i| {
                let t = i as f64 / 32.0;
                (t, HermitianMatrix::from_real_diagonal(&[t - 0.5, 2.0]))
            })
            .collect();
        let path = MatrixPath::new(samples).unwrap();
        assert!(matches!(
            track_cluster(&path, 0.0, 64),
            Err(Error::GapLost { .. })
        ));
    }

    fn eigenline_jump_path(degrees: f64) -> MatrixPath {
        let x0 = HermitianMatrix::from_real_diagonal(&[-1.0, 1.0]);
        let phi = degrees.to_radians();
        let raw = DMatrix::from_row_slice(
            2,
            2,
            &[
                Complex64::new(-(2.0 * phi).cos(), 0.0),
                Complex64::new((2.0 * phi).sin(), 0.0),
                Complex64::new((2.0 * phi).sin(), 0.0),
                Complex64::new((2.0 * phi).cos(), 0.0),
            ],
        );
        let x1 = make_hermitian(&raw, 1e-12).unwrap();
        let mut samples = vec![(0.0, x0.clone())];
        for i in 1..16 {
            samples.push((i as f64 / 16.0, x0.clone()));
        }
        samples.push((1.0, x1));
        MatrixPath::new(samples).unwrap()
    }

    #[test]
    fn coarse_subspace_jump_is_rejected() {
        // an 80-degree jump of the eigenline between two samples: cluster
        // transport refuses outright
        let path = eigenline_jump_path(80.0);
        assert!(matches!(
            track_cluster(&path, 0.0, 64),
            Err(Error::StepTooCoarse { .. })
        ));
        // jump from the standard eigenbasis to a DFT-rotated one: every
        // line overlap is 1/sqrt(3), below the confidence threshold
        let d = HermitianMatrix::from_real_diagonal(&[1.0, 2.0, 3.0]);
        let omega = Complex64::new(0.0, 2.0 * std::f64::consts::PI / 3.0).exp();
        let s = 1.0 / 3.0_f64.sqrt();
        let dft = DMatrix::from_fn(3, 3, |i, j| omega.powu((i * j) as u32) * s);
        let rotated = d.conjugate_by(&dft).unwrap();
        let mut samples = vec![(0.0, d.clone())];
        for i in 1..16 {
            samples.push((i as f64 / 16.0, d.clone()));
        }
        samples.push((1.0, rotated));
        let path = MatrixPath::new(samples).unwrap();
        assert!(matches!(
            track_eigenlines(&path),
            Err(Error::MatchAmbiguous { .. })
        ));
    }

    #[test]
    fn ray3_has_exact_double_at_midpoint() {
        let x = builtin_matrix(PathName::Ray3, 0.5, &PathParams::default());
        let eig = eigendecompose(&x).unwrap();
        assert_relative_eq!(eig.values[0], 1.0, epsilon = 1e-10);
        assert_relative_eq!(eig.values[1], 1.0, epsilon = 1e-10);
        assert_relative_eq!(eig.values[2], 5.0, epsilon = 1e-10);
    }

    #[test]
    fn eigenline_tracking_rejects_interior_degeneracy() {
        let path = builtin_path(PathName::Ray3, 64, &PathParams::default()).unwrap();
        // midpoint double eigenvalue sits at an interior sample (64 even)
        assert!(matches!(
            track_eigenlines(&path),
            Err(Error::DegenerateInterior { .. })
        ));
    }

    #[test]
    fn refinement_stability_on_builtins() {
        let coarse = builtin_path(PathName::Loop2x2, 256, &PathParams::default()).unwrap();
        let fine = builtin_path(PathName::Loop2x2, 512, &PathParams::default()).unwrap();
        let a = track_eigenlines(&coarse).unwrap();
        let b = track_eigenlines(&fine).unwrap();
        for (x, y) in a.principal_angles.iter().zip(&b.principal_angles) {
            assert!((x - y).abs() <= 1e-6);
        }
        let coarse = builtin_path(PathName::Curve4x4, 512, &PathParams::default()).unwrap();
        let fine = builtin_path(PathName::Curve4x4, 1024, &PathParams::default()).unwrap();
        let a = track_cluster(&coarse, 0.0, 64).unwrap();
        let b = track_cluster(&fine, 0.0, 64).unwrap();
        for (x, y) in a.principal_angles.iter().zip(&b.principal_angles) {
            assert!((x - y).abs() <= 1e-6);
        }
    }

    #[test]
    fn transported_frame_spans_current_projector_image() {
        let path = builtin_path(PathName::Curve4x4, 128, &PathParams::default()).unwrap();
        let report = track_cluster(&path, 0.0, 64).unwrap();
        // spot-check the final sample: transport only re-bases the subspace
        let (_, x_end) = &path.samples[path.samples.len() - 1];
        let eig = eigendecompose(x_end).unwrap();
        let p = riesz::projector_for_cut(x_end, &eig.values, 0.0, 64).unwrap();
        let image = linalg::orthonormal_image(&p, 2);
        let angles = linalg::principal_angles(&report.end_frame, &image);
        assert!(angles.iter().all(|&a| a <= 1e-8), "{angles:?}");
    }

    /// Brute-force oracle: eigendecompose every sample at 10x refinement and
    /// match greedily; compare the endpoint permutation.
    #[test]
    fn oracle_equivalence_on_random_smooth_paths() {
        use rand::{Rng, SeedableRng};
        let mut checked = 0;
        for seed in 0..120u64 {
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(9000 + seed);
            let n = 2 + (seed as usize % 4);
            let a = crate::hermitian::random_hermitian(n, 3 * seed + 1);
            let b = crate::hermitian::random_hermitian(n, 3 * seed + 2);
            let c = crate::hermitian::random_hermitian(n, 3 * seed + 3);
            let scale: f64 = rng.random_range(0.5..1.0);
            let make = |t: f64| {
                let tau = 2.0 * std::f64::consts::PI * t;
                let m = a.as_matrix()
                    + b.as_matrix() * Complex64::new(scale * tau.cos(), 0.0)
                    + c.as_matrix() * Complex64::new(scale * tau.sin(), 0.0);
                make_hermitian(&m, 1e-9).unwrap()
            };
            let steps = 64;
            let coarse: Vec<(f64, HermitianMatrix)> = (0..=steps)
                .map(|i| (i as f64 / steps as f64, make(i as f64 / steps as f64)))
                .collect();
            // skip paths that pass too close to a degeneracy for clean
            // tracking (the contract requires simple interior spectrum)
            let simple = coarse.iter().all(|(_, x)| {
                let values = eigendecompose(x).unwrap().values;
                values.windows(2).all(|w| w[1] - w[0] > 1e-3)
            });
            if !simple {
                continue;
            }
            checked += 1;
            let path = MatrixPath::new(coarse).unwrap();
            let report = track_eigenlines(&path).unwrap();

            let fine: Vec<(f64, HermitianMatrix)> = (0..=steps * 10)
                .map(|i| {
                    let t = i as f64 / (steps * 10) as f64;
                    (t, make(t))
                })
                .collect();
            let fine_path = MatrixPath::new(fine).unwrap();
            let oracle = track_eigenlines(&fine_path).unwrap();
            assert_eq!(report.permutation, oracle.permutation, "seed {seed}");
            if checked >= 50 {
                break;
            }
        }
        assert!(checked >= 50, "only {checked} smooth paths checked");
    }
}
