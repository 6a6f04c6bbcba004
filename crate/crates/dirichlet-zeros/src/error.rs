use thiserror::Error;

/// Error taxonomy shared by every module.
///
/// The CLI maps these onto its exit codes: domain/degeneracy/resource
/// errors exit 2, precision errors exit 3.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    /// An argument lies outside the operation's domain.
    #[error("domain error: {0}")]
    Domain(String),
    /// The requested accuracy cannot be met within the configured budget.
    #[error("precision error: {0}")]
    Precision(String),
    /// A series operation hit a structural degeneracy (e.g. reciprocal of a
    /// series with vanishing leading coefficient).
    #[error("degeneracy error: {0}")]
    Degeneracy(String),
    /// A hard resource cap was exceeded (e.g. sieve limit).
    #[error("resource error: {0}")]
    Resource(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
    pub fn precision(msg: impl Into<String>) -> Self {
        Error::Precision(msg.into())
    }
    pub fn degeneracy(msg: impl Into<String>) -> Self {
        Error::Degeneracy(msg.into())
    }
    pub fn resource(msg: impl Into<String>) -> Self {
        Error::Resource(msg.into())
    }

    /// Process exit code used by the CLI for this error class.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Precision(_) => 3,
            _ => 2,
        }
    }
}
