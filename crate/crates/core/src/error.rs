use thiserror::Error;

/// Failure modes shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A mathematical precondition does not hold (wrong causal class, resonance, ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// Boundary jets whose half-plane images cannot be joined by a geodesic.
    #[error("boundary data not connectable: inequality `{violated}` fails")]
    NotConnectable { violated: &'static str },

    #[error("numerical failure: {0}")]
    Numeric(String),

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("internal consistency error: {0}")]
    Internal(String),

    #[error("series live on different grids ({left} vs {right} nodes)")]
    GridMismatch { left: usize, right: usize },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
