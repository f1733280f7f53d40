//! Execution traces and their text serialization.

use std::sync::Arc;

use super::render::quote;
use super::vm::{Compiled, MachineState};
use super::{LError, Program};

/// One snapshot: pc-path and non-empty bindings in ascending name order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Frame {
    pub pc: String,
    pub store: Vec<(String, Vec<u8>)>,
}

impl Frame {
    pub fn of(m: &MachineState) -> Self {
        Frame {
            pc: m.pc_path().to_string(),
            store: m.bindings().map(|(n, v)| (n.to_string(), v.to_vec())).collect(),
        }
    }

    pub fn render(&self) -> String {
        let mut s = format!("{}:", self.pc);
        for (i, (n, v)) in self.store.iter().enumerate() {
            if i > 0 {
                s.push(';');
            }
            s.push_str(n);
            s.push('=');
            s.push_str(&quote(v));
        }
        s
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trace {
    pub program: Program,
    pub inputs: Vec<String>,
    pub frames: Vec<Frame>,
}

impl Trace {
    /// Frames joined by `|`, last frame suffixed `#HALT`.
    pub fn serialize(&self) -> String {
        let mut s = self.frames.iter().map(Frame::render).collect::<Vec<_>>().join("|");
        s.push_str("#HALT");
        s
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TraceOutcome {
    Trace(Trace),
    OutOfFuel(u64),
}

/// Runs like [`super::run`] and records every frame.
pub fn emit_trace(program: &Program, inputs: &[&str], fuel: u64) -> Result<TraceOutcome, LError> {
    let code = Arc::new(Compiled::new(program.clone()));
    let mut m = MachineState::new(code, inputs)?;
    let mut frames = vec![Frame::of(&m)];
    let mut left = fuel;
    while !m.is_halted() {
        if left == 0 {
            return Ok(TraceOutcome::OutOfFuel(fuel));
        }
        m.step();
        left -= 1;
        frames.push(Frame::of(&m));
    }
    Ok(TraceOutcome::Trace(Trace {
        program: program.clone(),
        inputs: inputs.iter().map(|s| s.to_string()).collect(),
        frames,
    }))
}
