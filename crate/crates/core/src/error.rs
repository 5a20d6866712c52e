use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid shape: {0}")]
    InvalidShape(String),

    #[error("degenerate curve: consecutive points around node {index} are collinear")]
    Degenerate { index: usize },

    #[error("invalid frame: {0}")]
    InvalidFrame(String),

    #[error("invalid width profile: {0}")]
    InvalidWidth(String),

    #[error("psi = {psi} at sigma node {index} is within the guard band of a multiple of pi")]
    Singularity { index: usize, psi: f64 },

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("invalid boundary data: {0}")]
    InvalidBoundary(String),

    #[error("cell update did not converge at sigma node {sigma_index}, u node {u_index}")]
    NonConvergence { sigma_index: usize, u_index: usize },

    #[error("frame drift {drift:e} at node {index} exceeds tolerance")]
    FrameDrift { index: usize, drift: f64 },

    #[error("invalid soliton parameters: {0}")]
    InvalidParams(String),

    #[error("parameter out of range: {0}")]
    OutOfRange(String),

    #[error("config line {line}: {message}")]
    ConfigSyntax { line: usize, message: String },

    #[error("config validation failed: {0}")]
    ConfigValidation(String),

    #[error("malformed file {path}: {message}")]
    Format { path: PathBuf, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Process exit code for the command-line driver.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::ConfigSyntax { .. }
            | Error::ConfigValidation(_)
            | Error::Format { .. }
            | Error::Io(_) => 2,
            _ => 3,
        }
    }
}
