use alloc::string::String;

/// Errors raised by the core algorithms.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("unstable pair (g, n) = ({g}, {n})")]
    Unstable { g: u32, n: usize },
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
    #[error("ambient mismatch: ({0}, {1}) vs ({2}, {3})")]
    AmbientMismatch(u32, usize, u32, usize),
    #[error("degree mismatch: {0}")]
    Degree(String),
    #[error("invalid argument: {0}")]
    Invalid(String),
}

pub type Result<T> = core::result::Result<T, Error>;
