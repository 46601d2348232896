use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid circuit: {0}")]
    InvalidCircuit(String),

    #[error("invalid network: {0}")]
    InvalidNetwork(String),

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("network is disconnected: node {from} cannot reach node {to}")]
    Disconnected { from: usize, to: usize },

    #[error("insufficient capacity: total capacity {total} cannot hold {required} qubits")]
    InsufficientCapacity { total: usize, required: usize },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("instance too large for exhaustive search: {states} states (limit {limit})")]
    InstanceTooLarge { states: String, limit: u64 },

    #[error("invalid config: {0}")]
    Config(String),

    #[error("I/O error on {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("CSV error on {}: {source}", path.display())]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },
}

impl Error {
    /// Stable machine-readable identifier for the error variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidParameter(_) => "invalid_parameter",
            Error::InvalidCircuit(_) => "invalid_circuit",
            Error::InvalidNetwork(_) => "invalid_network",
            Error::Parse { .. } => "parse",
            Error::Disconnected { .. } => "disconnected",
            Error::InsufficientCapacity { .. } => "insufficient_capacity",
            Error::DimensionMismatch(_) => "dimension_mismatch",
            Error::InstanceTooLarge { .. } => "instance_too_large",
            Error::Config(_) => "config",
            Error::Io { .. } => "io",
            Error::Csv { .. } => "csv",
        }
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

impl From<serde_json::Error> for Error {
    fn from(err: serde_json::Error) -> Self {
        Error::Parse {
            line: err.line(),
            column: err.column(),
            message: strip_position(&err.to_string()),
        }
    }
}

fn strip_position(message: &str) -> String {
    match message.rsplit_once(" at line ") {
        Some((head, _)) => head.to_string(),
        None => message.to_string(),
    }
}
