use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("expected {expected} items, got {found}")]
    SizeMismatch { expected: usize, found: usize },

    #[error("hyperplane has a zero normal vector")]
    ZeroNormal,

    #[error("invalid arrangement: {0}")]
    InvalidArrangement(String),

    #[error(
        "hyperplanes {subset:?} have linearly dependent normals; the induced simplex is undefined"
    )]
    SingularSubset { subset: Vec<usize> },

    #[error("epsilon {value} violates 8(d-2)^2 eps^2 < 1 for d = {dimension}")]
    InvalidEpsilon { value: String, dimension: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("position precondition failed: {0}")]
    Position(String),

    #[error("arrangement is not refuted; the perturbation margin is undefined")]
    NotRefuted,

    #[error("perturbation did not succeed within {attempts} attempts")]
    PerturbationBudget { attempts: usize },

    #[error("unsupported dimension {0}; only planar arrangements can be drawn")]
    UnsupportedDimension(usize),

    #[error("parse error: {0}")]
    Parse(String),
}
