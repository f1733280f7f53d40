//! Trace certificates: a program's Gödel number and a claimed halting trace.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigUint;
use thiserror::Error;

use crate::lcore::{parse_program, Compiled, MachineState, Program};
use crate::naming::{godel_decode, godel_encode};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceCertificate {
    pub program_godel: BigUint,
    pub witness: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Rejection {
    #[error("the Gödel number does not encode a valid program")]
    InvalidProgram,
    #[error("the program has arity {0}, not 0")]
    NotClosed(usize),
    #[error("frame 0 is not the initial state")]
    BadInitialFrame,
    #[error("frame {0} does not follow from the previous frame")]
    InvalidStep(usize),
    #[error("frame {0} is halted but the trace goes on")]
    HaltedEarly(usize),
    #[error("the `#HALT` marker follows frame {0}, which is not halted")]
    NotHalted(usize),
    #[error("the trace ends without a halting frame")]
    NoHaltingFrame,
    #[error("text after the `#HALT` marker")]
    TrailingText,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CheckResult {
    Accepted,
    Rejected(Rejection),
}

impl fmt::Display for CheckResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CheckResult::Accepted => f.write_str("accepted"),
            CheckResult::Rejected(r) => write!(f, "rejected({r:?})"),
        }
    }
}

impl TraceCertificate {
    pub fn new(program: &Program, witness: String) -> Self {
        let program_godel = godel_encode(&program.source).expect("parsed programs are in the alphabet");
        TraceCertificate { program_godel, witness }
    }

    /// Two lines: the decimal Gödel number, then the trace text.
    pub fn serialize(&self) -> String {
        format!("{}\n{}\n", self.program_godel, self.witness)
    }

    pub fn parse(text: &str) -> Option<Self> {
        let (g, w) = text.split_once('\n')?;
        let program_godel = g.trim().parse().ok()?;
        let witness = w.strip_suffix('\n').unwrap_or(w).to_string();
        Some(TraceCertificate { program_godel, witness })
    }
}

/// Replays the program once alongside the witness, comparing frame texts.
pub fn check_trace(cert: &TraceCertificate) -> CheckResult {
    match check(cert) {
        Ok(()) => CheckResult::Accepted,
        Err(r) => CheckResult::Rejected(r),
    }
}

fn check(cert: &TraceCertificate) -> Result<(), Rejection> {
    let program = parse_program(&godel_decode(&cert.program_godel)).map_err(|_| Rejection::InvalidProgram)?;
    if program.arity != 0 {
        return Err(Rejection::NotClosed(program.arity));
    }
    let mut m = MachineState::new(Arc::new(Compiled::new(program)), &[]).expect("arity 0");
    let mut rest = cert.witness.as_str();
    let mut frame = 0;
    loop {
        let expected = m.frame_text();
        let matched = rest.strip_prefix(expected.as_str()).filter(|r| r.is_empty() || r.starts_with(['|', '#']));
        let Some(after) = matched else {
            return Err(if frame == 0 { Rejection::BadInitialFrame } else { Rejection::InvalidStep(frame) });
        };
        if let Some(tail) = after.strip_prefix("#HALT") {
            if !m.is_halted() {
                return Err(Rejection::NotHalted(frame));
            }
            return if tail.is_empty() { Ok(()) } else { Err(Rejection::TrailingText) };
        }
        let Some(next) = after.strip_prefix('|') else { return Err(Rejection::NoHaltingFrame) };
        if m.is_halted() {
            return Err(Rejection::HaltedEarly(frame));
        }
        m.step();
        frame += 1;
        rest = next;
    }
}
