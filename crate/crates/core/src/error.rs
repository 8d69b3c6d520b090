use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("cannot compose: codomain {left} does not match domain {right}")]
    Composition { left: usize, right: usize },
    #[error("finite map: {0}")]
    FinMap(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("arity mismatch: {0}")]
    Arity(String),
    #[error("wrong signature: expected {expected}, got {got}")]
    WrongSignature { expected: String, got: String },
    #[error("laplaza spec {spec} does not apply to signature {signature}")]
    SpecMismatch { spec: String, signature: String },
    #[error("invalid object: {0}")]
    InvalidObject(String),
    #[error("invalid step: {0}")]
    InvalidStep(String),
    #[error("paths are not parallel: {0}")]
    NotParallel(String),
    #[error("model error: {0}")]
    Model(String),
    #[error("incoherent category: {0}")]
    Incoherent(String),
    #[error("typing error at {path}: {message}")]
    Typing { path: String, message: String },
    #[error("cobordism error: {0}")]
    Cobordism(String),
}
