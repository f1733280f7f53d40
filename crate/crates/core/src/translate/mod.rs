//! Translations between ℒ* statements and ℒ programs, and trace
//! certificates.

mod certificate;
mod compile;

use thiserror::Error;

pub use certificate::{check_trace, CheckResult, Rejection, TraceCertificate};
pub use compile::{compile, compile_with_order, CompiledUnit};

use crate::lcore::Program;
use crate::lstar::{Statement, Term};
use crate::naming::{godel_encode, ObjectName};

/// Alias under which the trace-checking relation is expected.
pub const EXEC_SEQ_ALIAS: &str = "EXEC_SEQ";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TranslateError {
    #[error("unknown alias `{0}`")]
    AliasUnknown(String),
    #[error("free variable `{0}` has no input position")]
    UnboundVariable(String),
    #[error("program has arity {0}; only closed programs can be reversed")]
    NotClosed(usize),
}

/// `exists x : EXEC_SEQ(g, x)` with g the Gödel number of the program.
pub fn reverse(p: &Program) -> Result<Statement, TranslateError> {
    if p.arity != 0 {
        return Err(TranslateError::NotClosed(p.arity));
    }
    let g = godel_encode(&p.source).expect("parsed programs are in the alphabet");
    Ok(Statement::exists(
        "x",
        Statement::Rel(Term::Alias(EXEC_SEQ_ALIAS.to_string()), vec![Term::Name(ObjectName::Numeral(g)), Term::var("x")]),
    ))
}
