use thiserror::Error;

/// Failures of a CLI invocation, one variant per exit code.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("verification failed: {0}")]
    Verification(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Parse(_) => 2,
            CliError::Precondition(_) => 3,
            CliError::Verification(_) => 4,
        }
    }

    /// Prefix the message with where it happened.
    pub fn context(self, at: &str) -> CliError {
        match self {
            CliError::Usage(m) => CliError::Usage(format!("{at}: {m}")),
            CliError::Parse(m) => CliError::Parse(format!("{at}: {m}")),
            CliError::Precondition(m) => CliError::Precondition(format!("{at}: {m}")),
            CliError::Verification(m) => CliError::Verification(format!("{at}: {m}")),
        }
    }
}

impl From<mfpush::Error> for CliError {
    fn from(e: mfpush::Error) -> CliError {
        use mfpush::Error as E;
        let m = e.to_string();
        match e {
            E::Syntax { .. } | E::UnknownVariable(_) | E::InvalidRing(_) => CliError::Parse(m),
            E::NotAFactorisation { .. }
            | E::NotAMorphism(_)
            | E::HomotopyIdentityFailed(_)
            | E::SideConditionsViolated(_)
            | E::VerificationFailed(_) => CliError::Verification(m),
            _ => CliError::Precondition(m),
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

/// Attach a location to a library error.
pub fn at<T>(r: mfpush::Result<T>, loc: &str) -> CliResult<T> {
    r.map_err(|e| CliError::from(e).context(loc))
}
