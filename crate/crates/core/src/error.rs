use thiserror::Error;

/// Errors surfaced by the public API. Internal invariant violations panic.
#[derive(Debug, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("elements belong to different towers")]
    TowerMismatch,
    #[error("element lives above level {level}: {what}")]
    LevelTooHigh { level: usize, what: String },
    #[error("invalid generator `{name}`: {reason}")]
    InvalidGenerator { name: String, reason: String },
    #[error("unsupported level shape for {op} at level {level}")]
    UnsupportedLevel { op: &'static str, level: usize },
    #[error("expected a polynomial in the level-{level} generator, got {what}")]
    NotPolynomial { level: usize, what: String },
    #[error("parse error at byte {offset}: {msg}")]
    Parse { offset: usize, msg: String },
    #[error("{0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
