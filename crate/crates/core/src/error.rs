use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Malformed input (shape, range, missing field).
    #[error("format error: {0}")]
    Format(String),

    /// Well-formed input violating a mathematical invariant.
    #[error("validation error: {0}")]
    Validation(String),

    /// Mixing objects of different group kinds.
    #[error("type error: {0}")]
    Type(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("unknown irrep: {0}")]
    UnknownIrrep(String),

    #[error("decomposition error: {message} (residual dimension {residual_dim})")]
    Decomposition { message: String, residual_dim: usize },

    #[error("unsupported: {0}")]
    Unsupported(String),

    /// Two computational routes that must agree did not.
    #[error("internal consistency failure: {0}")]
    Consistency(String),

    #[error("stabilizer not closed at tol {tol}: boundary elements {boundary:?}; try a tighter tolerance")]
    SymClosure { tol: f64, boundary: Vec<String> },

    #[error("finite-difference step too large: |χ| vanished within the stencil")]
    StepTooLarge,

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
