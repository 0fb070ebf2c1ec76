use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("identically zero polynomial")]
    ZeroPolynomial,

    #[error("nonzero constant polynomial has no roots")]
    NoRoots,

    #[error("invalid k: under-root expression is not a perfect square (residual {residual:.3e})")]
    InvalidK { residual: f64 },

    #[error("no admissible NU branch")]
    NoAdmissibleBranch,

    #[error("no quantized level: {0}")]
    NoQuantizedLevel(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("spinor transform undefined: W - iR vanishes identically")]
    TransformUndefined,

    #[error("closed forms require β = αγ")]
    ClosedFormSlice,

    #[error("invalid model: {0}")]
    InvalidModel(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid discretization: {0}")]
    InvalidDiscretization(String),

    #[error("eigensolver failure: {0}")]
    Eigensolver(String),

    #[error("unknown {kind} '{name}' (available: {available})")]
    UnknownStrategy {
        kind: &'static str,
        name: String,
        available: String,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
