//! Blow-up charts for the 2 x 2 trace-free slice and the local normal form.
//!
//! A 2 x 2 self-adjoint matrix splits as tau I + A0 with A0 trace free, and
//! A0 is identified with (a, c, d) in R^3 through
//!
//! ```text
//!     A0 = [[ a,      c + d i ],
//!           [ c - d i,     -a ]],     eigenvalues  +- r,  r = |(a, c, d)|.
//! ```
//!
//! The eigenvalues are singular only at the origin. The radial blow-up
//! replaces the origin by the sphere of directions (front face), with
//! blow-down map (r, theta) -> r theta; on the blown-up space r, and hence
//! both eigenvalues tau +- r, are smooth. The projective blow-up identifies
//! antipodal directions and is covered by three coordinate patches
//! (x1, y1, z1) = (c, d/c, a/c) and cyclic. Eigenlines are carried by a
//! two-formula atlas: each closed formula for an eigenvector vanishes at one
//! pole of the sphere, so the atlas picks whichever has the larger norm.
//!
//! [`resolve_local`] reduces an n x n matrix near a two-fold eigenvalue
//! cluster to this slice: the Riesz projector for a bracket around the
//! cluster gives a rank-2 frame, and the restricted 2 x 2 block is
//! trace-split into (mu, ball coordinates), from which the lifted
//! eigenvalues mu +- r recover the exact pair.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::hermitian::{eigendecompose, make_hermitian, trace_split, HermitianMatrix};
use crate::linalg;
use crate::riesz;

/// Below this radius a cluster is treated as exactly degenerate and no
/// direction is reported.
pub const DEGENERATE_RADIUS: f64 = 1e-13;

/// Ball coordinates (a, c, d) of the trace-free part, with the trace mean
/// carried separately.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BallCoords {
    /// Top-left entry of the trace-free part.
    pub a: f64,
    /// Real part of the off-diagonal entry.
    pub c: f64,
    /// Imaginary part of the off-diagonal entry.
    pub d: f64,
    /// Trace mean.
    pub tau: f64,
}

impl BallCoords {
    pub fn new(a: f64, c: f64, d: f64, tau: f64) -> Self {
        Self { a, c, d, tau }
    }

    /// Distance to the degenerate point, |(a, c, d)|.
    pub fn radius(&self) -> f64 {
        (self.a * self.a + self.c * self.c + self.d * self.d).sqrt()
    }

    /// Reassemble the 2 x 2 matrix [[tau + a, c + d i], [c - d i, tau - a]].
    pub fn to_matrix(&self) -> HermitianMatrix {
        let raw = DMatrix::from_row_slice(
            2,
            2,
            &[
                Complex64::new(self.tau + self.a, 0.0),
                Complex64::new(self.c, self.d),
                Complex64::new(self.c, -self.d),
                Complex64::new(self.tau - self.a, 0.0),
            ],
        );
        make_hermitian(&raw, 1e-12).expect("ball coordinates build a Hermitian matrix")
    }
}

/// The three projective patches, named by their dividing coordinate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProjPatch {
    /// Divides by c.
    P1,
    /// Divides by d.
    P2,
    /// Divides by a.
    P3,
}

impl ProjPatch {
    pub fn number(&self) -> u8 {
        match self {
            ProjPatch::P1 => 1,
            ProjPatch::P2 => 2,
            ProjPatch::P3 => 3,
        }
    }

    pub fn from_number(patch: u8) -> Option<Self> {
        match patch {
            1 => Some(ProjPatch::P1),
            2 => Some(ProjPatch::P2),
            3 => Some(ProjPatch::P3),
            _ => None,
        }
    }
}

/// A point in one of the blow-up charts, trace mean carried along.
#[derive(Debug, Clone, PartialEq)]
pub enum BlowupChartPoint {
    /// Radial chart: radius and unit direction on the front face.
    Radial { r: f64, theta: [f64; 3], tau: f64 },
    /// Projective patch coordinates (x, y, z).
    Projective {
        patch: ProjPatch,
        x: f64,
        y: f64,
        z: f64,
        tau: f64,
    },
}

impl BlowupChartPoint {
    /// The two eigenvalues lifted to the chart: tau -+ magnitude.
    pub fn lifted_values(&self) -> (f64, f64) {
        let (m, tau) = match self {
            BlowupChartPoint::Radial { r, tau, .. } => (*r, *tau),
            BlowupChartPoint::Projective { x, y, z, tau, .. } => {
                (x.abs() * (1.0 + y * y + z * z).sqrt(), *tau)
            }
        };
        (tau - m, tau + m)
    }
}

/// Ball coordinates of a 2 x 2 self-adjoint matrix.
pub fn pauli_coords(x: &HermitianMatrix) -> Result<BallCoords> {
    if x.n() != 2 {
        return Err(Error::WrongDimension {
            expected: 2,
            got: x.n(),
        });
    }
    let tau = 0.5 * (x.entry(0, 0).re + x.entry(1, 1).re);
    let a = x.entry(0, 0).re - tau;
    let z12 = x.entry(0, 1);
    Ok(BallCoords {
        a,
        c: z12.re,
        d: z12.im,
        tau,
    })
}

/// Lift a nonzero point of the ball into the radial chart.
pub fn radial_lift(b: &BallCoords) -> Result<BlowupChartPoint> {
    let r = b.radius();
    if r == 0.0 {
        return Err(Error::OriginWithoutDirection);
    }
    Ok(BlowupChartPoint::Radial {
        r,
        theta: [b.a / r, b.c / r, b.d / r],
        tau: b.tau,
    })
}

/// A boundary point of the radial chart: r = 0 with an explicit direction.
pub fn radial_boundary(tau: f64, theta: [f64; 3]) -> Result<BlowupChartPoint> {
    let norm = (theta[0] * theta[0] + theta[1] * theta[1] + theta[2] * theta[2]).sqrt();
    if (norm - 1.0).abs() > 1e-12 {
        return Err(Error::InvalidDirection { norm });
    }
    Ok(BlowupChartPoint::Radial { r: 0.0, theta, tau })
}

/// Blow-down map back to ball coordinates.
///
/// Radial points map to r theta; projective points invert the patch
/// formulas (the front face x = 0 maps to the origin).
pub fn blow_down(point: &BlowupChartPoint) -> BallCoords {
    match point {
        BlowupChartPoint::Radial { r, theta, tau } => BallCoords {
            a: r * theta[0],
            c: r * theta[1],
            d: r * theta[2],
            tau: *tau,
        },
        BlowupChartPoint::Projective { patch, x, y, z, tau } => {
            let (a, c, d) = match patch {
                ProjPatch::P1 => (x * z, *x, x * y),
                ProjPatch::P2 => (x * z, x * y, *x),
                ProjPatch::P3 => (*x, x * y, x * z),
            };
            BallCoords { a, c, d, tau: *tau }
        }
    }
}

/// Projective patch coordinates of a ball point.
///
/// Patch 1 requires c != 0 and gives (c, d/c, a/c); patches 2 and 3 divide
/// by d and a respectively.
pub fn projective_chart(patch: ProjPatch, b: &BallCoords) -> Result<BlowupChartPoint> {
    let (x, y, z) = match patch {
        ProjPatch::P1 => (b.c, b.d / b.c, b.a / b.c),
        ProjPatch::P2 => (b.d, b.c / b.d, b.a / b.d),
        ProjPatch::P3 => (b.a, b.c / b.a, b.d / b.a),
    };
    if x == 0.0 || !y.is_finite() || !z.is_finite() {
        return Err(Error::PatchDivisionByZero {
            patch: patch.number(),
        });
    }
    Ok(BlowupChartPoint::Projective {
        patch,
        x,
        y,
        z,
        tau: b.tau,
    })
}

/// Pick the best-conditioned patch: the one dividing by the coordinate of
/// largest magnitude.
pub fn best_patch(b: &BallCoords) -> ProjPatch {
    let mags = [b.c.abs(), b.d.abs(), b.a.abs()];
    let mut best = 0;
    for i in 1..3 {
        if mags[i] > mags[best] {
            best = i;
        }
    }
    [ProjPatch::P1, ProjPatch::P2, ProjPatch::P3][best]
}

/// Which closed formula produced an eigenline representative.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FormulaChart {
    /// v+ = (c + d i, 1 - a); degenerate at the north pole a = 1.
    A,
    /// v+ = (1 + a, c - d i); degenerate at the south pole a = -1.
    B,
}

/// Unit representatives of the two eigenlines over a front-face direction.
#[derive(Debug, Clone)]
pub struct EigenlinePair {
    /// Line of the +1 eigenvalue of the direction matrix.
    pub plus: DMatrix<Complex64>,
    /// Line of the -1 eigenvalue.
    pub minus: DMatrix<Complex64>,
    pub chart_plus: FormulaChart,
    pub chart_minus: FormulaChart,
}

/// The direction matrix theta . (sigma-basis), eigenvalues exactly +-1 for
/// unit theta.
pub fn direction_matrix(theta: &[f64; 3]) -> HermitianMatrix {
    BallCoords::new(theta[0], theta[1], theta[2], 0.0).to_matrix()
}

/// Smooth eigenline representatives over the whole front face.
///
/// Formula A reads the eigenvector off the first row of the direction
/// matrix, formula B off the second; A degenerates where a = 1 and B where
/// a = -1, and on the overlap both give the same line. Each of v+ and v-
/// uses the formula with the larger norm, normalized, with the crate phase
/// convention applied.
pub fn eigenline_atlas(theta: &[f64; 3]) -> Result<EigenlinePair> {
    let norm = (theta[0] * theta[0] + theta[1] * theta[1] + theta[2] * theta[2]).sqrt();
    if (norm - 1.0).abs() > 1e-12 {
        return Err(Error::InvalidDirection { norm });
    }
    let (a, c, d) = (theta[0], theta[1], theta[2]);
    let z = Complex64::new(c, d);

    // plus line: A = (c + d i, 1 - a), B = (1 + a, c - d i)
    let (plus, chart_plus) = if a <= 0.0 {
        (vec2(z, Complex64::new(1.0 - a, 0.0)), FormulaChart::A)
    } else {
        (vec2(Complex64::new(1.0 + a, 0.0), z.conj()), FormulaChart::B)
    };
    // minus line: A = (c + d i, -1 - a), B = (a - 1, c - d i)
    let (minus, chart_minus) = if a >= 0.0 {
        (vec2(z, Complex64::new(-1.0 - a, 0.0)), FormulaChart::A)
    } else {
        (vec2(Complex64::new(a - 1.0, 0.0), z.conj()), FormulaChart::B)
    };

    let mut plus = normalize(plus);
    let mut minus = normalize(minus);
    linalg::fix_column_phases(&mut plus);
    linalg::fix_column_phases(&mut minus);
    Ok(EigenlinePair {
        plus,
        minus,
        chart_plus,
        chart_minus,
    })
}

fn vec2(a: Complex64, b: Complex64) -> DMatrix<Complex64> {
    DMatrix::from_column_slice(2, 1, &[a, b])
}

fn normalize(mut v: DMatrix<Complex64>) -> DMatrix<Complex64> {
    let norm = v.norm();
    if norm > 0.0 {
        v /= Complex64::new(norm, 0.0);
    }
    v
}

/// Local resolution data of a two-fold cluster inside an n x n matrix.
#[derive(Debug, Clone)]
pub struct LocalResolutionData {
    /// Two orthonormal columns spanning the near-degenerate plane.
    pub cluster_frame: DMatrix<Complex64>,
    /// Cluster mean eigenvalue.
    pub mu: f64,
    /// Radial coordinate of the restricted trace-free block.
    pub r: f64,
    /// Front-face direction; absent when the cluster is exactly degenerate.
    pub theta: Option<[f64; 3]>,
    /// (mu - r, mu + r), matching the exact bracketed pair.
    pub lifted_values: (f64, f64),
}

/// Reduce an n x n matrix near a double eigenvalue to the 2 x 2 slice.
///
/// The bracket (below, above) must isolate exactly two eigenvalues, each cut
/// lying in a spectral gap. The cluster frame comes from the difference of
/// the two Riesz projectors; the restricted block frame* X frame is
/// trace-split into (mu, ball coordinates) and lifted radially.
pub fn resolve_local(x: &HermitianMatrix, bracket: (f64, f64)) -> Result<LocalResolutionData> {
    let (below, above) = bracket;
    if below >= above || !below.is_finite() || !above.is_finite() {
        return Err(Error::BracketInvalid { inside: 0 });
    }
    let eig = eigendecompose(x)?;
    let inside = eig
        .values
        .iter()
        .filter(|&&v| v > below && v < above)
        .count();
    if inside != 2 {
        return Err(Error::BracketInvalid { inside });
    }
    for &cut in &[below, above] {
        for &v in &eig.values {
            if (v - cut).abs() <= 1e-12 {
                return Err(Error::EigenvalueOnCut {
                    cut,
                    eigenvalue: v,
                });
            }
        }
    }

    let p_above = riesz::projector_for_cut(x, &eig.values, above, riesz::DEFAULT_NODES)?;
    let p_window = if eig.values.iter().any(|&v| v < below) {
        let p_below = riesz::projector_for_cut(x, &eig.values, below, riesz::DEFAULT_NODES)?;
        p_above - p_below
    } else {
        p_above
    };
    let frame = linalg::orthonormal_image(&p_window, 2);

    let restricted = make_hermitian(&(frame.adjoint() * x.as_matrix() * &frame), 1e-9)?;
    let split = trace_split(&restricted);
    let ball = pauli_coords(&split.traceless)?;
    let mu = split.mean;
    let r = ball.radius();
    let (theta, lifted_values) = if r < DEGENERATE_RADIUS {
        (None, (mu, mu))
    } else {
        (
            Some([ball.a / r, ball.c / r, ball.d / r]),
            (mu - r, mu + r),
        )
    };
    Ok(LocalResolutionData {
        cluster_frame: frame,
        mu,
        r,
        theta,
        lifted_values,
    })
}
