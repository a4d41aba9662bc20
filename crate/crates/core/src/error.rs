use thiserror::Error;

use crate::circuit::StructureReport;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown semiring `{name}` (expected one of: {valid})")]
    UnknownSemiring { name: String, valid: String },

    #[error("unknown backpropagation variant `{0}` (expected one of: naive, cancel, dynamic, opt)")]
    UnknownAlgorithm(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("value outside the {semiring} domain: {message}")]
    Domain { semiring: &'static str, message: String },

    #[error("oracle refuses {vars} variables (limit is {limit})")]
    OracleScale { vars: usize, limit: usize },

    #[error("circuit fails the structural requirements of the {semiring} semiring: {reason}")]
    Structure {
        semiring: &'static str,
        reason: String,
        report: Box<StructureReport>,
    },

    #[error("{0}")]
    Unsupported(String),

    #[error("conditional is undefined: the formula has probability zero")]
    ZeroProbability,

    #[error("sample batch is empty")]
    EmptyBatch,

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
