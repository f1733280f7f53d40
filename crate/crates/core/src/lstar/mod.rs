//! The restricted logic ℒ*: syntax, parser and a fuel-bounded reference
//! evaluator.

mod alias;
mod ast;
mod eval;
mod parser;

use thiserror::Error;

pub use alias::{AliasEntry, AliasTable};
pub use ast::{AExpr, CmpOp, Statement, Term};
pub use eval::{eval_ref, eval_ref_with, EvalOptions, RefResult, RefVerdict};
pub use parser::{parse_lstar, parse_lstar_open};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LStarError {
    #[error("forbidden connective `{token}` at {pos}")]
    ForbiddenConnective { token: String, pos: usize },
    #[error("syntax error at {pos}: {message}")]
    Syntax { pos: usize, message: String },
    #[error("unbound variable `{0}`")]
    UnboundVariable(String),
    #[error("no binding for free variable `{0}`")]
    MissingBinding(String),
    #[error("unknown alias `{0}`")]
    AliasUnknown(String),
    #[error("alias manifest: {0}")]
    Manifest(String),
}

impl LStarError {
    pub(crate) fn syntax(pos: usize, message: impl Into<String>) -> Self {
        LStarError::Syntax { pos, message: message.into() }
    }
}
