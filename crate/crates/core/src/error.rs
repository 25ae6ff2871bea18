//! Shared error type for the whole library.

use crate::verify::{BasisWitness, BhWitness, PointCollision};

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("matrix is not square ({rows}x{cols})")]
    NonSquare { rows: usize, cols: usize },

    #[error("basis matrix is singular")]
    SingularBasis,

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("integer overflow in exact arithmetic")]
    Overflow,

    #[error("element has {got} coordinates, group has {expected} invariant factors")]
    ElementNotInGroup { expected: usize, got: usize },

    #[error("coefficient/element count mismatch: {coeffs} coefficients, {elems} elements")]
    GroupMismatch { coeffs: usize, elems: usize },

    #[error("enumeration would visit {needed} coefficient vectors, budget is {budget}")]
    CardinalityOverflow { needed: u128, budget: u128 },

    #[error("search budget of {budget} point-reductions exhausted at determinant {watermark}")]
    BudgetExceeded { budget: u64, watermark: i128 },

    #[error("set is not a B_h set: {0}")]
    NotABhSet(BhWitness),

    #[error("set is not an h-basis: {0}")]
    NotAnHBasis(BasisWitness),

    #[error("arrangement is not a packing: {0}")]
    NotAPacking(PointCollision),

    #[error("arrangement is not a covering: coset {0:?} is never hit")]
    NotACovering(Vec<i128>),

    #[error("elements generate a subgroup of order {subgroup}, full group has order {order}")]
    NotGenerating { subgroup: i128, order: i128 },

    #[error("rounded basis is singular")]
    DegenerateRounding,

    #[error("unsupported parameters: {0}")]
    UnsupportedParameters(String),

    #[error("construction invalid: {0}")]
    ConstructionInvalid(String),

    #[error("rendering supports dimension 2 only, got {0}")]
    UnsupportedDimension(usize),

    #[error("invalid shape spec {0:?}: {1}")]
    InvalidShapeSpec(String, String),

    #[error("invalid rational literal {0:?}")]
    InvalidRational(String),

    #[error("stored certificate mismatch: {0}")]
    CatalogMismatch(String),

    #[error("i/o error: {0}")]
    Io(String),

    #[error("json error: {0}")]
    Json(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}
