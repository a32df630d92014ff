use polyperiod_core::Error as CoreError;

use crate::gluing::GluingError;
use crate::obj::ObjError;

/// Process exit codes.
pub mod exit {
    pub const OK: i32 = 0;
    /// IO failures and other errors not tied to the input surface.
    pub const FAILURE: i32 = 1;
    /// Malformed input, invalid configuration, Delaunay violation.
    pub const INVALID: i32 = 2;
    pub const GENUS_ZERO: i32 = 3;
    pub const SOLVER: i32 = 4;
    pub const GENUS_MISMATCH: i32 = 5;
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Obj(#[from] ObjError),
    #[error(transparent)]
    Gluing(#[from] GluingError),
    #[error(transparent)]
    Core(#[from] CoreError),
    #[error("{path}: {message}")]
    BadFile { path: String, message: String },
}

fn core_code(e: &CoreError) -> i32 {
    match e {
        CoreError::GenusZero => exit::GENUS_ZERO,
        CoreError::GenusMismatch { .. } => exit::GENUS_MISMATCH,
        CoreError::SolverDidNotConverge { .. }
        | CoreError::SingularSystem { .. }
        | CoreError::NotPositiveDefinite
        | CoreError::DegenerateIntersection
        | CoreError::HostMismatch => exit::SOLVER,
        _ => exit::INVALID,
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::BadFile { .. } => exit::INVALID,
            CliError::Io(_) | CliError::Obj(ObjError::Io(_)) | CliError::Gluing(GluingError::Io(_)) => exit::FAILURE,
            CliError::Obj(ObjError::Mesh { source, .. }) => core_code(source),
            CliError::Obj(ObjError::Parse { .. }) => exit::INVALID,
            CliError::Gluing(GluingError::Invalid(e)) | CliError::Core(e) => core_code(e),
            CliError::Gluing(_) => exit::INVALID,
        }
    }
}
