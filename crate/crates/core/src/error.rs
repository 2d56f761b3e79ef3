use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("malformed rational literal {0:?}")]
    BadRational(String),

    #[error("vectors are linearly dependent")]
    LinearlyDependent,

    #[error("frame vector {index} does not lie in the subspace")]
    FrameOutsideSubspace { index: usize },

    #[error("subspace family members must share ambient dimension and subspace dimension")]
    InconsistentFamily,

    #[error("family of {0} subspaces is too large for an exhaustive general-position check (limit 20)")]
    FamilyTooLarge(usize),

    #[error("polynomial is not homogeneous")]
    NotHomogeneous,

    #[error("polynomial is degenerate relative to the family")]
    Degenerate,

    #[error("no difference scheme found for this polynomial and family")]
    NoSchemeFound,

    #[error("linear form {form} for subspace {subspace} does not vanish on it")]
    FormDoesNotVanish { subspace: usize, form: usize },

    #[error("scale parameter must be positive, got {0}")]
    NonPositiveScale(f64),

    #[error("scheme couples its terms and needs one common scale, got distinct values")]
    NonUniformScale,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("sampling too coarse: {have} samples, at least {need} required")]
    UnderResolved { have: usize, need: usize },

    #[error("degree {0} exceeds the supported bound")]
    DegreeTooHigh(usize),
}

pub type Result<T> = std::result::Result<T, Error>;
