//! Fuel-metered virtual machine for ℒ.
//!
//! A program is flattened into pre-order instruction slots; the slot index
//! past the last instruction is the halted state. One executed statement is
//! one step, including condition evaluation of `if`/`while`.

use std::collections::BTreeMap;
use std::sync::Arc;

use once_cell::sync::Lazy;

use super::ast::{Cond, CondOp, Expr, Program, Stmt};
use super::render::quote;
use super::LError;

static EMPTY: Lazy<Arc<Vec<u8>>> = Lazy::new(|| Arc::new(Vec::new()));

/// An ℒ string value: a shared buffer plus a window into it.
#[derive(Clone)]
pub struct LStr {
    buf: Arc<Vec<u8>>,
    start: usize,
    end: usize,
}

impl Default for LStr {
    fn default() -> Self {
        LStr { buf: EMPTY.clone(), start: 0, end: 0 }
    }
}

impl std::fmt::Debug for LStr {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", quote(self.as_bytes()))
    }
}

impl PartialEq for LStr {
    fn eq(&self, other: &Self) -> bool {
        self.as_bytes() == other.as_bytes()
    }
}

impl Eq for LStr {}

impl LStr {
    pub fn new(bytes: &[u8]) -> Self {
        if bytes.is_empty() {
            return LStr::default();
        }
        LStr { buf: Arc::new(bytes.to_vec()), start: 0, end: bytes.len() }
    }

    pub fn as_bytes(&self) -> &[u8] {
        &self.buf[self.start..self.end]
    }

    pub fn len(&self) -> usize {
        self.end - self.start
    }

    pub fn is_empty(&self) -> bool {
        self.start == self.end
    }

    fn head(mut self) -> Self {
        self.end = self.end.min(self.start + 1);
        self
    }

    fn tail(mut self) -> Self {
        if self.start < self.end {
            self.start += 1;
        }
        self
    }

    /// Appends in place when the buffer is unshared and the window reaches its end.
    fn append(&mut self, more: &[u8]) {
        if more.is_empty() {
            return;
        }
        if let Some(buf) = Arc::get_mut(&mut self.buf) {
            if self.end == buf.len() && !buf.is_empty() {
                buf.extend_from_slice(more);
                self.end = buf.len();
                return;
            }
        }
        let mut v = Vec::with_capacity((self.len() + more.len()) * 2);
        v.extend_from_slice(self.as_bytes());
        v.extend_from_slice(more);
        self.end = v.len();
        self.start = 0;
        self.buf = Arc::new(v);
    }
}

#[derive(Debug, Clone)]
enum CExpr {
    Lit(LStr),
    Var(usize),
    Head(Box<CExpr>),
    Tail(Box<CExpr>),
    Concat(Vec<CExpr>),
}

#[derive(Debug, Clone)]
struct CCond {
    lhs: CExpr,
    eq: bool,
    rhs: CExpr,
}

#[derive(Debug, Clone)]
enum Instr {
    Assign { slot: usize, expr: CExpr, next: usize },
    /// `x = x . e1 . e2 ...` appended in place.
    Append { slot: usize, rest: Vec<CExpr>, next: usize },
    If { cond: CCond, then_pc: usize, else_pc: usize },
    While { cond: CCond, body_pc: usize, exit_pc: usize },
    Halt,
}

/// A program prepared for execution.
#[derive(Debug)]
pub struct Compiled {
    pub program: Program,
    instrs: Vec<Instr>,
    /// pc-path text per slot, including the halted slot.
    paths: Vec<String>,
    /// Variable names by slot, in ascending identifier order.
    names: Vec<String>,
    /// Slots of arg1..argN.
    arg_slots: Vec<usize>,
}

struct Builder {
    slots: BTreeMap<String, usize>,
    instrs: Vec<Instr>,
    paths: Vec<String>,
}

fn collect_vars_expr(e: &Expr, out: &mut BTreeMap<String, usize>) {
    match e {
        Expr::Lit(_) => {}
        Expr::Var(n) => {
            out.entry(n.clone()).or_insert(0);
        }
        Expr::Head(a) | Expr::Tail(a) => collect_vars_expr(a, out),
        Expr::Concat(a, b) => {
            collect_vars_expr(a, out);
            collect_vars_expr(b, out);
        }
    }
}

fn collect_vars(body: &[Stmt], out: &mut BTreeMap<String, usize>) {
    for s in body {
        match s {
            Stmt::Assign { target, expr } => {
                out.entry(target.clone()).or_insert(0);
                collect_vars_expr(expr, out);
            }
            Stmt::If { cond, then_body, else_body } => {
                collect_vars_expr(&cond.lhs, out);
                collect_vars_expr(&cond.rhs, out);
                collect_vars(then_body, out);
                if let Some(e) = else_body {
                    collect_vars(e, out);
                }
            }
            Stmt::While { cond, body } => {
                collect_vars_expr(&cond.lhs, out);
                collect_vars_expr(&cond.rhs, out);
                collect_vars(body, out);
            }
            Stmt::Halt => {}
        }
    }
}

fn size(body: &[Stmt]) -> usize {
    body.iter()
        .map(|s| match s {
            Stmt::If { then_body, else_body, .. } => {
                1 + size(then_body) + else_body.as_deref().map_or(0, size)
            }
            Stmt::While { body, .. } => 1 + size(body),
            _ => 1,
        })
        .sum()
}

impl Builder {
    fn expr(&self, e: &Expr) -> CExpr {
        match e {
            Expr::Lit(v) => CExpr::Lit(LStr::new(v)),
            Expr::Var(n) => CExpr::Var(self.slots[n]),
            Expr::Head(a) => CExpr::Head(Box::new(self.expr(a))),
            Expr::Tail(a) => CExpr::Tail(Box::new(self.expr(a))),
            Expr::Concat(..) => CExpr::Concat(e.concat_parts().into_iter().map(|p| self.expr(p)).collect()),
        }
    }

    fn cond(&self, c: &Cond) -> CCond {
        CCond { lhs: self.expr(&c.lhs), eq: c.op == CondOp::Eq, rhs: self.expr(&c.rhs) }
    }

    /// Emits `body` at the current end; `prefix` is the parent path, the
    /// first statement gets index `first_index`, `after` is where control
    /// goes when the block is exhausted.
    fn block(&mut self, body: &[Stmt], prefix: &str, first_index: usize, after: usize) {
        let base = self.instrs.len();
        let mut starts = Vec::with_capacity(body.len());
        let mut at = base;
        for s in body {
            starts.push(at);
            at += size(std::slice::from_ref(s));
        }
        for (j, s) in body.iter().enumerate() {
            let here = starts[j];
            debug_assert_eq!(here, self.instrs.len());
            let next = starts.get(j + 1).copied().unwrap_or(after);
            let path = format!("{prefix}{}", first_index + j);
            self.paths.push(path.clone());
            let child = format!("{path}.");
            match s {
                Stmt::Assign { target, expr } => {
                    let slot = self.slots[target];
                    let parts = expr.concat_parts();
                    let instr = match parts.first() {
                        Some(Expr::Var(n)) if parts.len() > 1 && *n == *target => Instr::Append {
                            slot,
                            rest: parts[1..].iter().map(|p| self.expr(p)).collect(),
                            next,
                        },
                        _ => Instr::Assign { slot, expr: self.expr(expr), next },
                    };
                    self.instrs.push(instr);
                }
                Stmt::Halt => self.instrs.push(Instr::Halt),
                Stmt::If { cond, then_body, else_body } => {
                    let then_len = size(then_body);
                    let then_pc = if then_body.is_empty() { next } else { here + 1 };
                    let else_pc = match else_body {
                        Some(e) if !e.is_empty() => here + 1 + then_len,
                        _ => next,
                    };
                    self.instrs.push(Instr::If { cond: self.cond(cond), then_pc, else_pc });
                    self.block(then_body, &child, 0, next);
                    if let Some(e) = else_body {
                        self.block(e, &child, then_body.len(), next);
                    }
                }
                Stmt::While { cond, body } => {
                    let body_pc = if body.is_empty() { here } else { here + 1 };
                    self.instrs.push(Instr::While { cond: self.cond(cond), body_pc, exit_pc: next });
                    self.block(body, &child, 0, here);
                }
            }
        }
    }
}

impl Compiled {
    pub fn new(program: Program) -> Self {
        let mut slots = BTreeMap::new();
        for k in 1..=program.arity {
            slots.insert(format!("arg{k}"), 0);
        }
        collect_vars(&program.body, &mut slots);
        let names: Vec<String> = slots.keys().cloned().collect();
        for (i, n) in names.iter().enumerate() {
            slots.insert(n.clone(), i);
        }
        let arg_slots = (1..=program.arity).map(|k| slots[&format!("arg{k}")]).collect();
        let total = size(&program.body);
        let mut b = Builder { slots, instrs: Vec::with_capacity(total), paths: Vec::with_capacity(total + 1) };
        b.block(&program.body, "", 0, total);
        b.paths.push(program.body.len().to_string());
        Compiled { program, instrs: b.instrs, paths: b.paths, names, arg_slots }
    }

    pub fn arity(&self) -> usize {
        self.program.arity
    }

    /// Slot index of the halted state.
    pub fn end(&self) -> usize {
        self.instrs.len()
    }

    pub fn path(&self, pc: usize) -> &str {
        &self.paths[pc]
    }
}

/// Complete state of one machine.
#[derive(Debug, Clone)]
pub struct MachineState {
    code: Arc<Compiled>,
    pc: usize,
    store: Vec<LStr>,
    steps: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Running,
    Halted,
}

impl MachineState {
    pub fn new(code: Arc<Compiled>, inputs: &[&str]) -> Result<Self, LError> {
        if inputs.len() != code.arity() {
            return Err(LError::ArityMismatch { expected: code.arity(), got: inputs.len() });
        }
        let mut store = vec![LStr::default(); code.names.len()];
        for (slot, input) in code.arg_slots.iter().zip(inputs) {
            store[*slot] = LStr::new(input.as_bytes());
        }
        Ok(MachineState { code, pc: 0, store, steps: 0 })
    }

    pub fn code(&self) -> &Arc<Compiled> {
        &self.code
    }

    pub fn steps(&self) -> u64 {
        self.steps
    }

    pub fn status(&self) -> Status {
        if self.pc == self.code.end() {
            Status::Halted
        } else {
            Status::Running
        }
    }

    pub fn is_halted(&self) -> bool {
        self.pc == self.code.end()
    }

    pub fn pc_path(&self) -> &str {
        self.code.path(self.pc)
    }

    /// Non-empty bindings in ascending identifier order.
    pub fn bindings(&self) -> impl Iterator<Item = (&str, &[u8])> {
        self.code
            .names
            .iter()
            .zip(&self.store)
            .filter(|(_, v)| !v.is_empty())
            .map(|(n, v)| (n.as_str(), v.as_bytes()))
    }

    /// Current value of a variable; unset variables read as empty.
    pub fn value(&self, name: &str) -> &[u8] {
        match self.code.names.binary_search_by(|n| n.as_str().cmp(name)) {
            Ok(i) => self.store[i].as_bytes(),
            Err(_) => &[],
        }
    }

    /// Canonical frame text: `pc-path ':' bindings`.
    pub fn frame_text(&self) -> String {
        let mut s = String::new();
        s.push_str(self.pc_path());
        s.push(':');
        for (i, (n, v)) in self.bindings().enumerate() {
            if i > 0 {
                s.push(';');
            }
            s.push_str(n);
            s.push('=');
            s.push_str(&quote(v));
        }
        s
    }

    /// Executes one statement. Returns false (and does nothing) when halted.
    pub fn step(&mut self) -> bool {
        let MachineState { code, pc, store, steps } = self;
        let Some(instr) = code.instrs.get(*pc) else {
            return false;
        };
        *steps += 1;
        *pc = match instr {
            Instr::Assign { slot, expr: CExpr::Tail(inner), next } if matches!(**inner, CExpr::Var(s) if s == *slot) => {
                let v = &mut store[*slot];
                if v.start < v.end {
                    v.start += 1;
                }
                *next
            }
            Instr::Assign { slot, expr, next } => {
                let v = eval(store, expr);
                store[*slot] = v;
                *next
            }
            Instr::Append { slot, rest, next } => {
                if let [one] = rest.as_slice() {
                    if let Some(bytes) = view(store, one) {
                        let bytes = bytes.to_vec();
                        store[*slot].append(&bytes);
                        *pc = *next;
                        return true;
                    }
                }
                let vals: Vec<LStr> = rest.iter().map(|p| eval(store, p)).collect();
                let target = &mut store[*slot];
                for v in &vals {
                    target.append(v.as_bytes());
                }
                *next
            }
            Instr::If { cond, then_pc, else_pc } => {
                if test(store, cond) {
                    *then_pc
                } else {
                    *else_pc
                }
            }
            Instr::While { cond, body_pc, exit_pc } => {
                if test(store, cond) {
                    *body_pc
                } else {
                    *exit_pc
                }
            }
            Instr::Halt => code.end(),
        };
        true
    }

    /// Steps until halted or `fuel` steps have been spent in this call.
    /// Returns true when halted.
    pub fn run_for(&mut self, fuel: u64) -> bool {
        let mut left = fuel;
        while !self.is_halted() {
            if left == 0 {
                return false;
            }
            self.step();
            left -= 1;
        }
        true
    }
}

/// Borrowed value of a concatenation-free expression.
fn view<'a>(store: &'a [LStr], e: &'a CExpr) -> Option<&'a [u8]> {
    Some(match e {
        CExpr::Lit(v) => v.as_bytes(),
        CExpr::Var(slot) => store[*slot].as_bytes(),
        CExpr::Head(a) => {
            let b = view(store, a)?;
            &b[..b.len().min(1)]
        }
        CExpr::Tail(a) => {
            let b = view(store, a)?;
            if b.is_empty() {
                b
            } else {
                &b[1..]
            }
        }
        CExpr::Concat(_) => return None,
    })
}

fn eval(store: &[LStr], e: &CExpr) -> LStr {
    match e {
        CExpr::Lit(v) => v.clone(),
        CExpr::Var(slot) => store[*slot].clone(),
        CExpr::Head(a) => eval(store, a).head(),
        CExpr::Tail(a) => eval(store, a).tail(),
        CExpr::Concat(parts) => {
            let mut total = 0;
            for p in parts {
                total += match view(store, p) {
                    Some(b) => b.len(),
                    None => eval(store, p).len(),
                };
            }
            if total == 0 {
                return LStr::default();
            }
            let mut buf = Vec::with_capacity(total);
            for p in parts {
                match view(store, p) {
                    Some(b) => buf.extend_from_slice(b),
                    None => buf.extend_from_slice(eval(store, p).as_bytes()),
                }
            }
            LStr { end: buf.len(), buf: Arc::new(buf), start: 0 }
        }
    }
}

fn test(store: &[LStr], c: &CCond) -> bool {
    let same = match (view(store, &c.lhs), view(store, &c.rhs)) {
        (Some(l), Some(r)) => l == r,
        _ => eval(store, &c.lhs) == eval(store, &c.rhs),
    };
    same == c.eq
}
