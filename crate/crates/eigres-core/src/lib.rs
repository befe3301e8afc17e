//! Smooth spectral data for families of Hermitian matrices.
//!
//! The library computes Riesz spectral projectors, gap-based block
//! decompositions, isotropy stratification with blow-up schedules, explicit
//! 2 x 2 blow-up charts, and path tracking that detects eigenbundle
//! monodromy. See the crate README for the command-line surface.

pub mod blowup2;
pub mod bundle_map;
mod eigen;
pub mod error;
pub mod hermitian;
pub mod isotropy;
pub mod json;
pub mod linalg;
pub mod path_track;
pub mod riesz;

pub use error::{Error, Result};
pub use hermitian::{
    eigendecompose, make_hermitian, random_hermitian, random_unitary, trace_split,
    EigenDecomposition, HermitianMatrix, TraceSplit,
};
