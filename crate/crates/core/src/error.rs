use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// The kernel has a `(d_1 ... d_n)^{-1/2}` factor and some eigenvalue is zero.
    #[error("singular point: eigenvalue {index} is zero")]
    SingularPoint { index: usize },

    /// The requested normalization integral vanishes or is infinite.
    #[error("divergent normalization: {0}")]
    Divergent(String),

    #[error("integrand returned a non-finite value at {point:?}")]
    NonFinite { point: Vec<f64> },

    #[error("cache error: {0}")]
    Cache(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}
