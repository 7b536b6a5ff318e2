use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("rejected input: {0}")]
    InvalidInput(String),

    #[error("matrix is not positive semidefinite (pivot {pivot} remainder {remainder:.3e})")]
    NotPositiveSemidefinite { pivot: usize, remainder: f64 },

    #[error("eigensolver failed to converge: {0}")]
    NoConvergence(String),

    #[error("model construction failed: {0}")]
    ModelConstruction(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("non-integrable divergence of 1/g^2 at s = {s}")]
    Divergence { s: f64 },

    #[error("spectrum size mismatch: reduced {reduced} values vs full {full}")]
    StructuralMismatch { reduced: usize, full: usize },

    #[error("{n} qubits exceeds the brute-force limit of {max}")]
    TooManyQubits { n: u32, max: u32 },

    #[error("fit failed: {0}")]
    FitFailure(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
