use thiserror::Error;

/// Errors raised by the library.
///
/// The CLI maps [`Error::Computation`] to exit code 2 and everything else to
/// exit code 1.
#[derive(Debug, Error)]
pub enum Error {
    #[error("usage error: {0}")]
    Usage(String),
    #[error("computation error: {0}")]
    Computation(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn usage(msg: impl Into<String>) -> Self {
        Error::Usage(msg.into())
    }

    pub(crate) fn computation(msg: impl Into<String>) -> Self {
        Error::Computation(msg.into())
    }

    pub(crate) fn parse(msg: impl Into<String>) -> Self {
        Error::Parse(msg.into())
    }

    /// Prefixes the message with the angle pair at which the error occurred,
    /// keeping the error kind.
    pub fn at_point(self, beta: f64, gamma: f64) -> Self {
        let prefix = format!("at (beta={beta}, gamma={gamma})");
        match self {
            Error::Usage(m) => Error::Usage(format!("{prefix}: {m}")),
            Error::Computation(m) => Error::Computation(format!("{prefix}: {m}")),
            Error::Parse(m) => Error::Parse(format!("{prefix}: {m}")),
            Error::Io(e) => Error::Io(e),
        }
    }

    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> u8 {
        match self {
            Error::Computation(_) => 2,
            _ => 1,
        }
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        // the message already carries "at line L column C" when known
        Error::Parse(e.to_string())
    }
}
