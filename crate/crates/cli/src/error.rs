use stekloff_core::error::AssemblyError;
use stekloff_core::Error;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("mesh error: {0}")]
    Mesh(String),
    #[error(transparent)]
    Core(#[from] Error),
    #[error("i/o error on {path}: {source}")]
    Io { path: String, source: std::io::Error },
}

impl CliError {
    pub fn io(path: &std::path::Path, source: std::io::Error) -> Self {
        CliError::Io { path: path.display().to_string(), source }
    }

    /// Process exit code: configuration 2, mesh 3, assembly 4, solver 5,
    /// anything else 1.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Core(Error::Config(_)) => 2,
            CliError::Mesh(_) | CliError::Core(Error::Mesh(_)) => 3,
            CliError::Core(Error::Assembly(_)) => 4,
            CliError::Core(Error::Solver(_)) | CliError::Core(Error::Oracle(_)) => 5,
            CliError::Core(Error::Io(_)) | CliError::Io { .. } => 1,
        }
    }
}

impl From<stekloff_core::error::MeshError> for CliError {
    fn from(e: stekloff_core::error::MeshError) -> Self {
        CliError::Core(e.into())
    }
}

impl From<AssemblyError> for CliError {
    fn from(e: AssemblyError) -> Self {
        CliError::Core(e.into())
    }
}

impl From<stekloff_core::error::SolverError> for CliError {
    fn from(e: stekloff_core::error::SolverError) -> Self {
        CliError::Core(e.into())
    }
}

impl From<stekloff_core::error::OracleError> for CliError {
    fn from(e: stekloff_core::error::OracleError) -> Self {
        CliError::Core(e.into())
    }
}
