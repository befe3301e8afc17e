//! Error type shared by all modules of the crate.

use thiserror::Error;

/// Everything that can go wrong in this crate.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// Input deviates from self-adjointness by more than the tolerance.
    #[error("matrix is not Hermitian: max deviation {max_deviation:.3e} exceeds tol {tol:.3e}")]
    NotHermitian { max_deviation: f64, tol: f64 },
    /// A NaN or infinity showed up where a finite number was required.
    #[error("non-finite entry encountered")]
    NonFinite,
    /// A square matrix was expected.
    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    /// An operation received a matrix of the wrong fixed size.
    #[error("wrong dimension: expected {expected}, got {got}")]
    WrongDimension { expected: usize, got: usize },
    /// Two objects that must share a dimension do not.
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    /// An operation over a collection received nothing to work on.
    #[error("empty input")]
    EmptyInput,
    /// An iteration (Jacobi sweeps, quadrature refinement) hit its budget.
    #[error("failed to converge within budget {sweeps} (residual {off_diagonal:.3e})")]
    ConvergenceFailure { sweeps: usize, off_diagonal: f64 },
    /// A requested real cut coincides with an eigenvalue.
    #[error("eigenvalue {eigenvalue:.6e} lies on the cut {cut:.6e}")]
    EigenvalueOnCut { cut: f64, eigenvalue: f64 },
    /// A resolvent solve on a quadrature node was numerically singular.
    #[error("singular resolvent at quadrature node {node}")]
    SingularResolvent { node: usize },
    /// trace(P) of a computed projector is not within 1e-6 of an integer.
    #[error("projector trace {trace:.6e} is not close to an integer")]
    NonIntegralRank { trace: f64 },
    /// Fewer quadrature nodes than the contour contract allows.
    #[error("contour needs at least 8 nodes, got {nodes}")]
    TooFewNodes { nodes: usize },
    /// Fewer path samples than the tracking contract allows.
    #[error("path needs at least 16 steps, got {steps}")]
    TooFewSteps { steps: usize },
    /// An isotropy index split at a point not contained in the index.
    #[error("cannot split isotropy index at {at}: not an element of the index")]
    GapViolation { at: usize },
    /// Schedule generation outside the supported dimension range.
    #[error("unsupported dimension n = {n} (need 2 <= n <= 12)")]
    UnsupportedN { n: usize },
    /// Radial lift of the exact origin needs a caller-supplied direction.
    #[error("radial lift at the origin requires an explicit direction")]
    OriginWithoutDirection,
    /// A direction vector that must be unit length is not.
    #[error("direction has norm {norm:.3e}, expected 1")]
    InvalidDirection { norm: f64 },
    /// The dividing coordinate of the requested projective patch vanishes.
    #[error("projective patch {patch} divides by a zero coordinate")]
    PatchDivisionByZero { patch: u8 },
    /// A bracket meant to isolate exactly two eigenvalues does not.
    #[error("bracket isolates {inside} eigenvalues, expected exactly 2")]
    BracketInvalid { inside: usize },
    /// The Riesz image no longer projects bijectively onto the reference frame.
    #[error("transversality lost: cross-Gram smallest singular value {sigma_min:.3e} < 1e-6")]
    TransversalityLost { sigma_min: f64 },
    /// A path sample violated the spectral-gap assumption.
    #[error("spectral gap lost at t = {t:.6} (distance {distance:.3e} to the cut)")]
    GapLost { t: f64, distance: f64 },
    /// Consecutive samples are too far apart to transport confidently.
    #[error("step too coarse at t = {t:.6}: subspace overlap {overlap:.4} < 1/sqrt(2)")]
    StepTooCoarse { t: f64, overlap: f64 },
    /// No confident label matching exists (best overlap below 1/sqrt(2)).
    #[error("ambiguous match: best overlap {overlap:.4} < 1/sqrt(2)")]
    MatchAmbiguous { overlap: f64 },
    /// An interior path sample has a (near-)degenerate spectrum.
    #[error("degenerate spectrum at interior sample t = {t:.6} (gap {gap:.3e})")]
    DegenerateInterior { t: f64, gap: f64 },
    /// Unknown builtin path name.
    #[error("unknown builtin path {name:?}")]
    UnknownName { name: String },
}

pub type Result<T> = std::result::Result<T, Error>;
