//! Front end for the difference-field engine: parse summand expressions,
//! compile them into Pi/Sigma* towers, simplify indefinite sums, and derive
//! recurrences for definite parameterized sums. Everything a command emits
//! is re-verified by exact sequence evaluation before it is reported.

pub mod compile;
pub mod eval;
pub mod expr;
pub mod parser;
pub mod report;
pub mod telescope;
pub mod zeilberger;

pub use num_rational::BigRational as Q;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("parse error at byte {offset}: {msg}")]
    Parse { offset: usize, msg: String },
    #[error("evaluation error: {0}")]
    Eval(String),
    #[error("unsupported summand: {0}")]
    Unsupported(String),
    #[error("verification failed: {0}")]
    Verification(String),
    #[error(transparent)]
    Core(#[from] pisigma_core::Error),
}
