use thiserror::Error;

/// Failure modes shared by every operation in the crate.
///
/// The variants map one-to-one onto the CLI exit codes and the FFI status
/// codes, so keep them coarse.
#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the operation's domain (zero vector,
    /// interior point, dependent directions, non-finite input).
    #[error("domain error: {0}")]
    Domain(String),
    /// A norm description could not be turned into a usable plane.
    #[error("configuration error: {0}")]
    Config(String),
    /// An iterative routine failed to bracket or converge.
    #[error("numerical error: {0}")]
    Numerical(String),
    /// The operation is only defined for a class of planes this one is not in.
    #[error("unsupported operation: {0}")]
    Unsupported(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
