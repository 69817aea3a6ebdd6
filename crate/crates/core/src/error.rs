use thiserror::Error;

/// Every fallible operation in the crate returns this error.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("precision error: {0}")]
    Precision(String),
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("arity error: {0}")]
    Arity(String),
    #[error("missing binding for variable `{0}`")]
    MissingBinding(String),
    #[error("singular matrix: {0}")]
    Singular(String),
    #[error("derivation failed: {0}")]
    Derivation(String),
    #[error("point lies on a Humbert surface: {0}")]
    Humbert(String),
    #[error("indeterminate image: {0}")]
    Indeterminacy(String),
    #[error("identity `{name}` failed")]
    Identity { name: String, witness: Vec<String> },
    #[error("invalid input: {0}")]
    Input(String),
}

pub type Result<T> = std::result::Result<T, Error>;
