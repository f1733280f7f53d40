//! Fuel-bounded reference evaluator for ℒ*.
//!
//! Evaluation runs in rounds with a growing local budget b = 1, 2, 4, ...:
//! in a round every relation run gets at most b steps, every ∃ tries the
//! first ⌈√b⌉ objects of the stream 0, R0, 1, R1, ..., and every atomic test
//! costs one unit of fuel. Trace certificates proposed for
//! `∃x: EXEC_SEQ(g, x)` are tried first, with budget b². A round that settles True or False is final;
//! otherwise the next round starts, until the global fuel is spent.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::Zero;

use super::ast::{AExpr, Statement, Term};
use super::{AliasTable, LStarError};
use crate::lcore::{emit_trace, parse_program, Compiled, MachineState, TraceOutcome, Verdict};
use crate::naming::{godel_decode, godel_encode, nth_program_with_cap, ObjectName, DEFAULT_LENGTH_CAP};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RefVerdict {
    True,
    False,
    /// No verdict within the budget; carries the fuel spent.
    Unknown(u64),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RefResult {
    pub verdict: RefVerdict,
    pub spent: u64,
    /// Witness of a top-level ∃ that verified.
    pub witness: Option<ObjectName>,
}

#[derive(Debug, Clone)]
pub struct EvalOptions {
    pub fuel: u64,
    pub name_cap: usize,
    /// Try the certificate of a native run as a candidate for
    /// `∃x: EXEC_SEQ(g, x)` before the ordinary object stream.
    pub trace_hints: bool,
}

impl EvalOptions {
    pub fn with_fuel(fuel: u64) -> Self {
        EvalOptions { fuel, name_cap: DEFAULT_LENGTH_CAP, trace_hints: true }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum V {
    T,
    F,
    U,
}

struct Exhausted;

type Step = Result<V, Exhausted>;

struct Evaluator<'a> {
    aliases: &'a AliasTable,
    opts: &'a EvalOptions,
    spent: u64,
    programs: HashMap<BigUint, Option<Arc<Compiled>>>,
    exec_seq: Option<String>,
    witness: Option<ObjectName>,
}

/// Evaluates a statement under `env` with the default options.
pub fn eval_ref(
    s: &Statement,
    env: &BTreeMap<String, ObjectName>,
    aliases: &AliasTable,
    fuel: u64,
) -> Result<RefResult, LStarError> {
    eval_ref_with(s, env, aliases, &EvalOptions::with_fuel(fuel))
}

pub fn eval_ref_with(
    s: &Statement,
    env: &BTreeMap<String, ObjectName>,
    aliases: &AliasTable,
    opts: &EvalOptions,
) -> Result<RefResult, LStarError> {
    for v in s.free_vars() {
        if !env.contains_key(&v) {
            return Err(LStarError::MissingBinding(v));
        }
    }
    for a in s.aliases() {
        if aliases.get(&a).is_none() {
            return Err(LStarError::AliasUnknown(a));
        }
    }
    let exec_seq = opts.trace_hints.then(|| crate::stdlib::exec_seq_rel().source);
    let mut ev = Evaluator { aliases, opts, spent: 0, programs: HashMap::new(), exec_seq, witness: None };
    let mut env: Vec<(String, ObjectName)> = env.iter().map(|(k, v)| (k.clone(), v.clone())).collect();
    let mut b: u64 = 1;
    loop {
        ev.witness = None;
        let verdict = match ev.eval(s, &mut env, b, true) {
            Ok(V::T) => RefVerdict::True,
            Ok(V::F) => RefVerdict::False,
            Ok(V::U) => {
                b = b.saturating_mul(2);
                continue;
            }
            Err(Exhausted) => RefVerdict::Unknown(ev.spent),
        };
        let witness = if verdict == RefVerdict::True { ev.witness.take() } else { None };
        return Ok(RefResult { verdict, spent: ev.spent, witness });
    }
}

/// Objects an ∃ tries in a round with local budget `b`.
fn width(b: u64) -> u64 {
    let mut w = (b as f64).sqrt() as u64;
    while w * w < b {
        w += 1;
    }
    w.max(1)
}

impl Evaluator<'_> {
    fn charge(&mut self, n: u64) -> Result<(), Exhausted> {
        if self.spent + n > self.opts.fuel {
            self.spent = self.opts.fuel;
            return Err(Exhausted);
        }
        self.spent += n;
        Ok(())
    }

    fn left(&self) -> u64 {
        self.opts.fuel - self.spent
    }

    fn lookup(env: &[(String, ObjectName)], t: &Term) -> ObjectName {
        match t {
            Term::Name(n) => n.clone(),
            Term::Var(v) => env.iter().rev().find(|(k, _)| k == v).map(|(_, n)| n.clone()).expect("checked binding"),
            Term::Alias(_) => unreachable!("aliases only occur as relations"),
        }
    }

    fn arith(env: &[(String, ObjectName)], e: &AExpr) -> Option<BigUint> {
        match e {
            AExpr::Term(t) => match Self::lookup(env, t) {
                ObjectName::Numeral(n) => Some(n),
                ObjectName::RName(_) => None,
            },
            AExpr::Add(a, b) => Some(Self::arith(env, a)? + Self::arith(env, b)?),
            AExpr::Mul(a, b) => Some(Self::arith(env, a)? * Self::arith(env, b)?),
        }
    }

    fn rname_program(&mut self, i: &BigUint) -> Option<Arc<Compiled>> {
        if let Some(p) = self.programs.get(i) {
            return p.clone();
        }
        let code = nth_program_with_cap(i, self.opts.name_cap)
            .ok()
            .and_then(|src| parse_program(&src).ok())
            .map(|p| Arc::new(Compiled::new(p)));
        self.programs.insert(i.clone(), code.clone());
        code
    }

    /// Runs `code` on the names for at most `b` steps.
    fn run(&mut self, code: &Arc<Compiled>, args: &[String], b: u64) -> Step {
        if args.len() != code.arity() {
            return Ok(V::F);
        }
        let refs: Vec<&str> = args.iter().map(String::as_str).collect();
        let mut m = MachineState::new(Arc::clone(code), &refs).expect("arity checked");
        let allowed = b.min(self.left());
        let halted = m.run_for(allowed);
        self.spent += m.steps();
        if halted {
            Ok(V::T)
        } else if allowed < b {
            Err(Exhausted)
        } else {
            Ok(V::U)
        }
    }

    fn eval(&mut self, s: &Statement, env: &mut Vec<(String, ObjectName)>, b: u64, top: bool) -> Step {
        match s {
            Statement::Eq(x, y) | Statement::Neq(x, y) => {
                self.charge(1)?;
                let same = Self::lookup(env, x) == Self::lookup(env, y);
                Ok(if same == matches!(s, Statement::Eq(..)) { V::T } else { V::F })
            }
            Statement::Arith(l, op, r) => {
                self.charge(1)?;
                Ok(match (Self::arith(env, l), Self::arith(env, r)) {
                    (Some(a), Some(c)) if op.holds(&a, &c) => V::T,
                    _ => V::F,
                })
            }
            Statement::Rel(t0, args) => {
                self.charge(1)?;
                let code = match t0 {
                    Term::Alias(a) => Arc::clone(&self.aliases.get(a).expect("checked alias").code),
                    t => match Self::lookup(env, t) {
                        ObjectName::Numeral(_) => return Ok(V::F),
                        ObjectName::RName(i) => match self.rname_program(&i) {
                            Some(c) => c,
                            None => return Ok(V::U),
                        },
                    },
                };
                let names: Vec<String> = args.iter().map(|a| Self::lookup(env, a).to_string()).collect();
                self.run(&code, &names, b)
            }
            Statement::And(x, y) => {
                let a = self.eval(x, env, b, false)?;
                if a == V::F {
                    return Ok(V::F);
                }
                let c = self.eval(y, env, b, false)?;
                Ok(match (a, c) {
                    (_, V::F) => V::F,
                    (V::T, V::T) => V::T,
                    _ => V::U,
                })
            }
            Statement::Or(x, y) => {
                let a = self.eval(x, env, b, false)?;
                if a == V::T {
                    return Ok(V::T);
                }
                let c = self.eval(y, env, b, false)?;
                Ok(match (a, c) {
                    (_, V::T) => V::T,
                    (V::F, V::F) => V::F,
                    _ => V::U,
                })
            }
            Statement::BoundedAll(v, bound, body) => {
                self.charge(1)?;
                let n = match Self::lookup(env, bound) {
                    ObjectName::Numeral(n) => n,
                    ObjectName::RName(_) => return Ok(V::F),
                };
                let mut result = V::T;
                let mut k = BigUint::zero();
                while k <= n {
                    for name in [ObjectName::Numeral(k.clone()), ObjectName::RName(k.clone())] {
                        env.push((v.clone(), name));
                        let r = self.eval(body, env, b, false);
                        env.pop();
                        match r? {
                            V::F => return Ok(V::F),
                            V::U => result = V::U,
                            V::T => {}
                        }
                    }
                    k += 1u32;
                }
                Ok(result)
            }
            Statement::Exists(v, body) => {
                self.charge(1)?;
                let hb = b.saturating_mul(b);
                let mut candidates: Vec<(ObjectName, u64)> =
                    self.hints(v, body, env, b)?.into_iter().map(|n| (n, hb)).collect();
                candidates.extend((0..width(b)).map(|k| (ObjectName::stream(k), b)));
                for (name, budget) in candidates {
                    env.push((v.clone(), name.clone()));
                    let r = self.eval(body, env, budget, false);
                    env.pop();
                    if r? == V::T {
                        if top {
                            self.witness = Some(name);
                        }
                        return Ok(V::T);
                    }
                }
                Ok(V::U)
            }
        }
    }

    /// Certificate candidates for `∃x: EXEC_SEQ(g, x)`: the Gödel number of
    /// the trace of the program encoded by g, if it halts within b steps.
    fn hints(
        &mut self,
        v: &str,
        body: &Statement,
        env: &[(String, ObjectName)],
        b: u64,
    ) -> Result<Vec<ObjectName>, Exhausted> {
        let Some(exec_seq) = &self.exec_seq else { return Ok(vec![]) };
        let Statement::Rel(Term::Alias(a), args) = body else { return Ok(vec![]) };
        if self.aliases.get(a).map(|e| &e.code.program.source) != Some(exec_seq) {
            return Ok(vec![]);
        }
        let [g, Term::Var(x)] = args.as_slice() else { return Ok(vec![]) };
        if x != v || matches!(g, Term::Var(y) if y == v) {
            return Ok(vec![]);
        }
        let ObjectName::Numeral(g) = Self::lookup(env, g) else { return Ok(vec![]) };
        // Decoding cost is proportional to the text length; skip absurd sizes.
        if g.bits() > 64 * 1024 * 8 {
            return Ok(vec![]);
        }
        let Ok(p) = parse_program(&godel_decode(&g)) else { return Ok(vec![]) };
        if p.arity != 0 {
            return Ok(vec![]);
        }
        let allowed = b.min(self.left());
        // frames are recorded only once the run is known to halt
        let steps = match crate::lcore::run(&p, &[], allowed).expect("arity 0") {
            Verdict::Halted(s) => s,
            Verdict::OutOfFuel(_) => {
                self.charge(allowed)?;
                if allowed < b {
                    return Err(Exhausted);
                }
                return Ok(vec![]);
            }
        };
        let TraceOutcome::Trace(t) = emit_trace(&p, &[], steps).expect("arity 0") else {
            unreachable!("the run halted within {steps} steps")
        };
        self.charge(steps)?;
        let cert = godel_encode(&t.serialize()).expect("trace text is in the alphabet");
        Ok(vec![ObjectName::Numeral(cert)])
    }
}
