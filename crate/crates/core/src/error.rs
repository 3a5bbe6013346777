use thiserror::Error;

use crate::exact_algebra::{AlgebraError, ParseFailure};
use crate::exact_linalg::LinalgError;
use crate::lattice_geometry::GeometryError;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Parse(#[from] ParseFailure),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("no candidate determinant is nonzero: {0}")]
    NotImplicitizable(String),
    #[error("verification failed: {0}")]
    VerificationFailed(String),
    #[error("plane images are linearly dependent inside the quadric kernel")]
    InjectivityFailure,
    #[error("iterated resultant vanishes identically")]
    EliminationCollapse,
    #[error("x4 vanished at {0} consecutive sample points")]
    SamplingExhausted(usize),
    #[error("bracket weights could not be determined for this polygon: {0}")]
    WeightSolve(String),
}

pub type Result<T> = std::result::Result<T, Error>;
