use std::path::Path;

use coherence_forge_core::SdpStatus;

/// Exit codes: 0 optimal, 1 bad input, 2 numerical failure, 3 infeasible.
pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_NUMERICAL: i32 = 2;
pub const EXIT_INFEASIBLE: i32 = 3;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error(transparent)]
    Core(#[from] coherence_forge_core::Error),
}

impl CliError {
    pub fn io(path: &Path, source: std::io::Error) -> Self {
        Self::Io { path: path.display().to_string(), source }
    }

    pub fn exit_code(&self) -> i32 {
        use coherence_forge_core::Error as E;
        match self {
            Self::Core(E::Solver(_)) | Self::Core(E::NotPositiveDefinite) => EXIT_NUMERICAL,
            Self::Core(E::Infeasible(_)) => EXIT_INFEASIBLE,
            _ => EXIT_INPUT,
        }
    }
}

pub fn status_exit_code(status: SdpStatus) -> i32 {
    match status {
        SdpStatus::Optimal => EXIT_OK,
        SdpStatus::Infeasible => EXIT_INFEASIBLE,
        SdpStatus::Unbounded | SdpStatus::NumericalFailure => EXIT_NUMERICAL,
    }
}
