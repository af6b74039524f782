use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid Cayley table: {0}")]
    InvalidTable(String),

    #[error("unknown magma spec `{0}`")]
    UnknownSpec(String),

    #[error("{0}")]
    Unsupported(String),

    #[error("magma is not a right quasigroup")]
    NotRightQuasigroup,

    #[error("magma is not a Rump right quasigroup")]
    NotRump,

    #[error("solution is not right non-degenerate")]
    NotRightNondegenerate,

    #[error("solution does not arise from a Rump right quasigroup")]
    NotRumpSolution,

    #[error("index {index} out of range 1..={max}")]
    IndexOutOfRange { index: usize, max: usize },

    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),

    #[error("cocycle check failed: {0}")]
    Cocycle(String),

    #[error("integer overflow during elimination")]
    Overflow,

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
