//! Deterministic dovetailing: closed evaluation, racing machines, and the
//! growing pool used for existential search.
//!
//! Machines are stepped one at a time in round-robin order, so "first to
//! halt" is always well defined and every result is reproducible.

use std::sync::Arc;

use thiserror::Error;

use crate::lcore::{Compiled, LError, MachineState, Program, Verdict};
use crate::naming::ObjectName;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SchedError {
    #[error("program has arity {0}; a closed statement has arity 0")]
    NotClosed(usize),
    #[error("entry {index}: {source}")]
    Arity { index: usize, source: LError },
    #[error("nothing to race")]
    Empty,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SchedConfig {
    /// Steps per task per round.
    pub quantum: u64,
    /// Candidates admitted per round.
    pub admission: u64,
}

impl Default for SchedConfig {
    fn default() -> Self {
        SchedConfig { quantum: 1, admission: 1 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RaceResult {
    /// `Halted(total steps across all machines)` or `OutOfFuel(fuel)`.
    pub verdict: Verdict,
    pub winner: Option<usize>,
    pub winner_steps: u64,
    pub task_steps: Vec<u64>,
    pub rounds: u64,
    pub config: SchedConfig,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DovetailResult {
    pub verdict: Verdict,
    pub witness: Option<ObjectName>,
    pub witness_steps: u64,
    pub admitted: u64,
    pub task_steps: Vec<u64>,
    pub rounds: u64,
    pub config: SchedConfig,
}

/// Truth of a closed statement: its program halts.
pub fn eval_closed(program: &Program, fuel: u64) -> Result<Verdict, SchedError> {
    if program.arity != 0 {
        return Err(SchedError::NotClosed(program.arity));
    }
    Ok(crate::lcore::run(program, &[], fuel).expect("arity 0"))
}

struct Task {
    machine: Option<MachineState>,
    steps: u64,
}

impl Task {
    fn new(code: Arc<Compiled>, inputs: &[String]) -> Result<Self, LError> {
        let refs: Vec<&str> = inputs.iter().map(String::as_str).collect();
        Ok(Task { machine: Some(MachineState::new(code, &refs)?), steps: 0 })
    }

    fn inert() -> Self {
        Task { machine: None, steps: 0 }
    }

    fn halted(&self) -> bool {
        self.machine.as_ref().is_some_and(MachineState::is_halted)
    }

    /// Gives the task up to `quantum` steps out of `budget`; returns true if it halted.
    fn turn(&mut self, quantum: u64, budget: &mut u64) -> bool {
        let Some(m) = self.machine.as_mut() else { return false };
        for _ in 0..quantum {
            if m.is_halted() {
                return true;
            }
            if *budget == 0 {
                return false;
            }
            m.step();
            self.steps += 1;
            *budget -= 1;
        }
        m.is_halted()
    }
}

/// Runs all machines in round-robin until one halts or the shared budget ends.
pub fn race(entries: &[(Arc<Compiled>, Vec<String>)], fuel: u64, config: SchedConfig) -> Result<RaceResult, SchedError> {
    if entries.is_empty() {
        return Err(SchedError::Empty);
    }
    let mut tasks = Vec::with_capacity(entries.len());
    for (index, (code, inputs)) in entries.iter().enumerate() {
        tasks.push(Task::new(Arc::clone(code), inputs).map_err(|source| SchedError::Arity { index, source })?);
    }
    let mut budget = fuel;
    let mut rounds = 0;
    let quantum = config.quantum.max(1);
    loop {
        rounds += 1;
        for i in 0..tasks.len() {
            if tasks[i].halted() || tasks[i].turn(quantum, &mut budget) {
                let total = fuel - budget;
                return Ok(RaceResult {
                    verdict: Verdict::Halted(total),
                    winner: Some(i),
                    winner_steps: tasks[i].steps,
                    task_steps: tasks.iter().map(|t| t.steps).collect(),
                    rounds,
                    config,
                });
            }
            if budget == 0 {
                return Ok(RaceResult {
                    verdict: Verdict::OutOfFuel(fuel),
                    winner: None,
                    winner_steps: 0,
                    task_steps: tasks.iter().map(|t| t.steps).collect(),
                    rounds,
                    config,
                });
            }
        }
    }
}

/// Growing-pool search over the object stream 0, R0, 1, R1, ...: each round
/// admits `admission` new candidates, then gives every admitted task a
/// quantum in admission order. An instance whose inputs do not fit its
/// program never halts.
pub fn dovetail_exists<F>(mut instantiate: F, fuel: u64, config: SchedConfig) -> DovetailResult
where
    F: FnMut(&ObjectName) -> (Arc<Compiled>, Vec<String>),
{
    let mut tasks: Vec<Task> = Vec::new();
    let mut budget = fuel;
    let mut rounds = 0;
    let quantum = config.quantum.max(1);
    let done = |tasks: &[Task], verdict, witness: Option<(usize, ObjectName)>, rounds| DovetailResult {
        verdict,
        witness_steps: witness.as_ref().map_or(0, |(i, _)| tasks[*i].steps),
        witness: witness.map(|(_, w)| w),
        admitted: tasks.len() as u64,
        task_steps: tasks.iter().map(|t| t.steps).collect(),
        rounds,
        config,
    };
    loop {
        rounds += 1;
        for _ in 0..config.admission.max(1) {
            let name = ObjectName::stream(tasks.len() as u64);
            let (code, inputs) = instantiate(&name);
            tasks.push(Task::new(code, &inputs).unwrap_or_else(|_| Task::inert()));
        }
        for i in 0..tasks.len() {
            if tasks[i].halted() || tasks[i].turn(quantum, &mut budget) {
                let w = ObjectName::stream(i as u64);
                return done(&tasks, Verdict::Halted(fuel - budget), Some((i, w)), rounds);
            }
            if budget == 0 {
                return done(&tasks, Verdict::OutOfFuel(fuel), None, rounds);
            }
        }
    }
}
