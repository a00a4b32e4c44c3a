use alloc::string::String;

use crate::rmatrix::Side;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("invalid structure entry ({i}, {j}, {k}): {reason}")]
    InvalidEntry { i: usize, j: usize, k: usize, reason: &'static str },
    #[error("Jacobi identity fails on ({i}, {j}, {k}) in coordinate {l}: defect {defect}")]
    JacobiViolation { i: usize, j: usize, k: usize, l: usize, defect: String },
    #[error("realization is not a Lie morphism on basis pair ({i}, {j})")]
    RealizationMismatch { i: usize, j: usize },
    #[error("the algebra has no matrix realization")]
    NoRealization,
    #[error("unsupported built-in name `{0}`")]
    UnsupportedName(String),
    #[error("not an r-matrix: defect {defect} on basis pair ({i}, {j})")]
    NotAnRMatrix { i: usize, j: usize, defect: f64 },
    #[error("{side} span is not a subalgebra: bracket of basis elements {i}, {j} leaves it")]
    NotASubalgebra { side: Side, i: usize, j: usize },
    #[error("index sets do not partition the basis")]
    NotADirectSum,
    #[error("element is not in the augmentation ideal")]
    NotInAugmentationIdeal,
    #[error("element does not have counit 1")]
    NotUnitNormalized,
    #[error("graded component of degree {degree} is not primitive")]
    PrimitivityFailure { degree: usize },
    #[error("order {order} did not collapse to a Lie element: residual {residual}")]
    CollapseFailure { order: usize, residual: String },
    #[error("product is not left pre-Lie (defect {defect})")]
    NotPreLie { defect: f64 },
    #[error("the bracket is not abelian")]
    NotAbelian,
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("a matrix realization is required")]
    RealizationRequired,
    #[error("bad dimensions: {0}")]
    BadDimensions(String),
    #[error("step {step} too large: conserved-quantity drift {drift} exceeds {limit}")]
    StepTooLarge { step: f64, drift: f64, limit: f64 },
}

pub type Result<T> = core::result::Result<T, Error>;
