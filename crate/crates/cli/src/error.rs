use std::fmt;

use heat_series_core::Error;

/// Failure of a CLI run, split by exit code.
#[derive(Debug)]
pub enum CliError {
    /// Invalid flags, unreadable inputs or violated preconditions (exit 2).
    Usage(String),
    /// A solver or audit error raised by the library.
    Core(Error),
    /// Writing the report failed.
    Output(String),
}

impl CliError {
    pub fn usage(msg: impl Into<String>) -> Self {
        CliError::Usage(msg.into())
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Core(e) => match e {
                Error::UnknownVertex(_)
                | Error::Schema(_)
                | Error::Domain(_)
                | Error::RadiusExceeded { .. }
                | Error::AuditWindowEmpty { .. } => 2,
                _ => 1,
            },
            CliError::Output(_) => 1,
        }
    }

    /// Short machine-readable tag for error reports.
    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "usage",
            CliError::Output(_) => "output",
            CliError::Core(e) => match e {
                Error::UnknownVertex(_) => "unknown-vertex",
                Error::Unreachable { .. } => "unreachable",
                Error::Schema(_) => "schema",
                Error::Domain(_) => "domain",
                Error::RadiusExceeded { .. } => "radius-exceeded",
                Error::TruncationFailure { .. } => "truncation-failure",
                Error::DegreeBoundViolated { .. } => "degree-bound-violated",
                Error::GrowthProfileViolated { .. } => "growth-profile-violated",
                Error::Unbounded => "unbounded",
                Error::AuditWindowEmpty { .. } => "audit-window-empty",
                Error::SizeCap { .. } => "size-cap",
            },
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Output(m) => write!(f, "cannot write report: {m}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}
