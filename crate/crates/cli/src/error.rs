use thiserror::Error;

/// Process exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExitCode {
    Success = 0,
    VerificationFailure = 1,
    Usage = 2,
    Diverged = 3,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] complex_splitting::Error),

    #[error("{0}")]
    Io(#[from] std::io::Error),

    #[error("{0}")]
    Usage(String),

    #[error("verification failed: {0}")]
    Verification(String),

    #[error("run diverged: {0}")]
    Diverged(String),
}

impl CliError {
    pub fn exit_code(&self) -> ExitCode {
        match self {
            CliError::Core(complex_splitting::Error::UnknownName { .. })
            | CliError::Core(complex_splitting::Error::InvalidArgument(_))
            | CliError::Core(complex_splitting::Error::BranchOutOfRange { .. })
            | CliError::Io(_)
            | CliError::Usage(_) => ExitCode::Usage,
            CliError::Core(_) | CliError::Verification(_) => ExitCode::VerificationFailure,
            CliError::Diverged(_) => ExitCode::Diverged,
        }
    }
}
