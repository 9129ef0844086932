use thiserror::Error;

use crate::cover::Violation;

/// Errors produced by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    Input(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("hypergraph is not {d}-balanced: Delta_{level} = {max_degree} exceeds d^(({k}-{level})/({k}-1))")]
    NotBalanced {
        level: usize,
        max_degree: u64,
        d: u64,
        k: usize,
    },

    #[error("maximum degree {max_degree} exceeds d = {d}")]
    DegreeExceeded { max_degree: u64, d: u64 },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("input object is not valid for the hypergraph: {0}")]
    InvalidWitness(Violation),

    #[error("resource limit exceeded: {0}")]
    Resource(String),

    #[error("generation failed: {0}")]
    Generation(String),

    #[error("oracle disagreement: {0}")]
    OracleMismatch(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse { line, msg: msg.into() }
    }
}
