use thiserror::Error;

/// Errors raised by the algebra, geometry and integration layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension {0} is outside the supported range 1..=12")]
    DimensionOutOfRange(usize),

    #[error("signature mismatch: G_{left} vs G_{right}")]
    SignatureMismatch { left: usize, right: usize },

    #[error("coefficient vector has length {got}, expected {expected}")]
    CoefficientLength { expected: usize, got: usize },

    #[error("blade is singular (norm {norm:e} below tolerance {tol:e})")]
    SingularBlade { norm: f64, tol: f64 },

    #[error("expected a homogeneous multivector of grade {expected}")]
    NotHomogeneous { expected: usize },

    #[error("expected a nonzero grade-1 vector")]
    ZeroVector,

    #[error("expected a grade-1 vector")]
    NotAVector,

    #[error("parameter domain is invalid: {0}")]
    InvalidDomain(String),

    #[error("parameter point {point:?} lies outside the domain")]
    OutsideDomain { point: Vec<f64> },

    #[error("patch of dimension {k} cannot live in R^{n}")]
    PatchDimension { k: usize, n: usize },

    #[error("regularity violation at s = {point:?}: |x_(k)| = {wedge_norm:e}, product of tangent norms = {tangent_product:e}")]
    Regularity {
        point: Vec<f64>,
        wedge_norm: f64,
        tangent_product: f64,
    },

    #[error("field or map produced a non-finite value at {point:?}")]
    NonFinite { point: Vec<f64> },

    #[error("finite-difference step underflow at {point:?}")]
    StepUnderflow { point: Vec<f64> },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("empty patch complex")]
    EmptyComplex,

    #[error("curves do not share endpoints (gap {gap:e})")]
    EndpointMismatch { gap: f64 },

    #[error("point lies within {distance:e} of the boundary; required margin is {margin:e}")]
    TooCloseToBoundary { distance: f64, margin: f64 },

    #[error("parse error at position {position}: {message}")]
    Parse { position: usize, message: String },

    #[error("invalid quadrature specification: {0}")]
    Quadrature(String),
}

pub type Result<T> = std::result::Result<T, Error>;
