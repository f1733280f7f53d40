//! The language ℒ: syntax, parser, and a fuel-metered virtual machine.

pub mod ast;
pub mod lexer;
pub mod parser;
pub mod render;
pub mod trace;
pub mod vm;

use std::sync::Arc;

use thiserror::Error;

pub use ast::{Cond, CondOp, Expr, Program, Stmt};
pub use parser::parse_program;
pub use render::{quote, render, render_compact};
pub use trace::{emit_trace, Frame, Trace, TraceOutcome};
pub use vm::{Compiled, LStr, MachineState, Status};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("missing `args n;` signature")]
    MissingSignature,
    #[error("syntax error at byte {pos}: {message}")]
    Syntax { pos: usize, message: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LError {
    #[error("arity mismatch: program takes {expected} inputs, got {got}")]
    ArityMismatch { expected: usize, got: usize },
}

/// Outcome of a fuel-bounded run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Halted(u64),
    OutOfFuel(u64),
}

impl Verdict {
    pub fn halted(&self) -> bool {
        matches!(self, Verdict::Halted(_))
    }
}

/// Runs `program` on `inputs` for at most `fuel` steps.
pub fn run(program: &Program, inputs: &[&str], fuel: u64) -> Result<Verdict, LError> {
    let code = Arc::new(Compiled::new(program.clone()));
    run_compiled(&code, inputs, fuel)
}

pub fn run_compiled(code: &Arc<Compiled>, inputs: &[&str], fuel: u64) -> Result<Verdict, LError> {
    let mut m = MachineState::new(Arc::clone(code), inputs)?;
    Ok(if m.run_for(fuel) { Verdict::Halted(m.steps()) } else { Verdict::OutOfFuel(fuel) })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn run_examples() {
        let p = parse_program("args 0; halt;").unwrap();
        assert_eq!(run(&p, &[], 10), Ok(Verdict::Halted(1)));
        let p = parse_program("args 0; while \"\" == \"\" { x = \"a\"; }").unwrap();
        assert_eq!(run(&p, &[], 100), Ok(Verdict::OutOfFuel(100)));
        let p = parse_program("args 1;").unwrap();
        assert_eq!(run(&p, &["x"], 0), Ok(Verdict::Halted(0)));
        assert_eq!(run(&p, &[], 5), Err(LError::ArityMismatch { expected: 1, got: 0 }));
    }

    #[test]
    fn fuel_monotonicity() {
        let p = parse_program("args 1; x = arg1; while x != \"\" { x = tail(x); }").unwrap();
        let Verdict::Halted(s) = run(&p, &["abcd"], 1000).unwrap() else { panic!() };
        assert_eq!(run(&p, &["abcd"], s - 1).unwrap(), Verdict::OutOfFuel(s - 1));
        for f in s..s + 5 {
            assert_eq!(run(&p, &["abcd"], f).unwrap(), Verdict::Halted(s));
        }
    }
}
