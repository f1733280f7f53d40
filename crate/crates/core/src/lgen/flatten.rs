//! Flattening: structured ℒ code as a resumable machine.
//!
//! Every statement gets a fixed-width decimal label. One call of the step
//! block executes the statement under the program counter and moves it on,
//! so one call is exactly one step of the native VM. The counter holds
//! [`DONE`] once the code has run to its end (or halted) and [`DEAD`] once
//! it sits in the canonical `while "" == "" {}`.

use std::collections::{BTreeMap, BTreeSet};

use super::{chain, lit, Gen};
use crate::lcore::ast::{Cond, CondOp, Expr, Stmt};

pub const DONE: &str = "e";
pub const DEAD: &str = "d";

#[derive(Debug, Clone)]
pub struct Flat {
    pub pc: String,
    /// Variables the code assigns, in a fixed order.
    pub vars: Vec<String>,
    pub start: String,
    pub step: Vec<Stmt>,
}

fn is_diverge(cond: &Cond, body: &[Stmt]) -> bool {
    body.is_empty()
        && cond.op == CondOp::Eq
        && matches!((&cond.lhs, &cond.rhs), (Expr::Lit(a), Expr::Lit(b)) if a.is_empty() && b.is_empty())
}

fn set_pc(pc: &str, label: &str) -> Stmt {
    Stmt::Assign { target: pc.to_string(), expr: Expr::lit(label.as_bytes()) }
}

struct Layout<'a> {
    pc: &'a str,
    width: usize,
    next_id: usize,
    instrs: BTreeMap<String, Vec<Stmt>>,
    assigned: BTreeSet<String>,
}

impl Layout<'_> {
    fn label(&self, id: usize) -> String {
        format!("{id:0width$}", width = self.width)
    }

    /// Lays out `body`; control continues at `cont` after its last statement.
    fn lay(&mut self, body: &[Stmt], cont: &str) {
        let first = self.next_id;
        let ids: Vec<usize> = {
            let mut ids = Vec::with_capacity(body.len());
            let mut id = first;
            for s in body {
                ids.push(id);
                id += count(s);
            }
            ids
        };
        for (i, s) in body.iter().enumerate() {
            let me = self.label(ids[i]);
            let next = if i + 1 < body.len() { self.label(ids[i + 1]) } else { cont.to_string() };
            self.next_id = ids[i] + 1;
            let pc = self.pc;
            let instr = match s {
                Stmt::Assign { target, .. } => {
                    self.assigned.insert(target.clone());
                    vec![s.clone(), set_pc(pc, &next)]
                }
                Stmt::Halt => vec![set_pc(pc, DONE)],
                Stmt::If { cond, then_body, else_body } => {
                    let then_first = if then_body.is_empty() { next.clone() } else { self.label(self.next_id) };
                    self.lay(then_body, &next);
                    let else_body = else_body.as_deref().unwrap_or(&[]);
                    let else_first = if else_body.is_empty() { next.clone() } else { self.label(self.next_id) };
                    self.lay(else_body, &next);
                    vec![Stmt::If {
                        cond: cond.clone(),
                        then_body: vec![set_pc(pc, &then_first)],
                        else_body: Some(vec![set_pc(pc, &else_first)]),
                    }]
                }
                Stmt::While { cond, body } => {
                    if is_diverge(cond, body) {
                        vec![set_pc(pc, DEAD)]
                    } else {
                        let body_first = if body.is_empty() { me.clone() } else { self.label(self.next_id) };
                        self.lay(body, &me);
                        vec![Stmt::If {
                            cond: cond.clone(),
                            then_body: vec![set_pc(pc, &body_first)],
                            else_body: Some(vec![set_pc(pc, &next)]),
                        }]
                    }
                }
            };
            self.instrs.insert(me, instr);
        }
    }
}

fn count(s: &Stmt) -> usize {
    1 + match s {
        Stmt::If { then_body, else_body, .. } => {
            then_body.iter().map(count).sum::<usize>() + else_body.iter().flatten().map(count).sum::<usize>()
        }
        Stmt::While { body, .. } => body.iter().map(count).sum(),
        _ => 0,
    }
}

/// Dispatch on the label digits from position `depth` on.
fn dispatch(g: &mut Gen, entries: Vec<(String, Vec<Stmt>)>, depth: usize, digit: &str, rest: &str) -> Vec<Stmt> {
    if entries.len() == 1 && entries[0].0.len() == depth {
        return entries.into_iter().next().unwrap().1;
    }
    let mut groups: BTreeMap<char, Vec<(String, Vec<Stmt>)>> = BTreeMap::new();
    for (label, instr) in entries {
        let c = label.as_bytes()[depth] as char;
        groups.entry(c).or_default().push((label, instr));
    }
    let last_level = groups.values().all(|v| v.iter().all(|(l, _)| l.len() == depth + 1));
    let cases = groups
        .into_iter()
        .map(|(c, group)| (c.to_string(), dispatch(g, group, depth + 1, digit, rest)))
        .collect();
    let mut out = if last_level {
        g.code("@d = @r;", &[("d", digit), ("r", rest)])
    } else {
        g.code("@d = head(@r); @r = tail(@r);", &[("d", digit), ("r", rest)])
    };
    out.extend(chain(digit, cases, vec![]));
    out
}

pub fn flatten(g: &mut Gen, body: &[Stmt]) -> Flat {
    let pc = g.fresh("pc");
    let total: usize = body.iter().map(count).sum();
    let width = total.saturating_sub(1).to_string().len();
    let mut layout = Layout { pc: &pc, width, next_id: 0, instrs: BTreeMap::new(), assigned: BTreeSet::new() };
    layout.lay(body, DONE);
    let start = if total == 0 { DONE.to_string() } else { layout.label(0) };
    let assigned = std::mem::take(&mut layout.assigned);
    let instrs = std::mem::take(&mut layout.instrs);
    let digit = g.fresh("dg");
    let rest = g.fresh("rs");
    let step = if instrs.is_empty() {
        Vec::new()
    } else {
        let mut out = g.code("@r = @pc;", &[("r", &rest), ("pc", &pc)]);
        out.extend(dispatch(g, instrs.into_iter().collect(), 0, &digit, &rest));
        out
    };
    Flat { pc, vars: assigned.into_iter().collect(), start, step }
}

impl Flat {
    /// Clears the variables and puts the counter on the first statement.
    pub fn reset(&self, g: &mut Gen) -> Vec<Stmt> {
        let mut text = format!("{} = {};", self.pc, lit(&self.start));
        for v in &self.vars {
            text.push_str(&format!(" {v} = \"\";"));
        }
        g.code(&text, &[])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lcore::{parse_program, render, Compiled, MachineState};
    use std::sync::Arc;

    /// Runs the flattened program, counting steps in unary in `n`.
    fn stepped(src: &str, limit: usize) -> (String, Vec<(String, String)>, bool) {
        let p = parse_program(src).unwrap();
        let mut g = Gen::new();
        let f = flatten(&mut g, &p.body);
        let mut body = f.reset(&mut g);
        let step = f.step.clone();
        body.extend(g.splice(
            &format!(
                r#"while @pc != "e" {{
                    if @pc == "d" {{ @pc = "e"; dead = "1"; }}
                    else {{ %step; n = n . "1"; if n == {} {{ @pc = "e"; }} }}
                }}"#,
                lit(&"1".repeat(limit))
            ),
            &[("pc", &f.pc)],
            vec![("step", step)],
        ));
        let q = parse_program(&render(0, &body)).unwrap();
        let mut m = MachineState::new(Arc::new(Compiled::new(q)), &[]).unwrap();
        assert!(m.run_for(10_000_000));
        let vals = f.vars.iter().map(|v| (v.clone(), String::from_utf8(m.value(v).to_vec()).unwrap())).collect();
        (String::from_utf8(m.value("n").to_vec()).unwrap(), vals, !m.value("dead").is_empty())
    }

    #[test]
    fn one_call_is_one_native_step() {
        let mut sources: Vec<&str> = crate::lgen::interp::tests::PROGRAMS.to_vec();
        sources.extend([
            "args 0; while x != \"aaaaaaaaaaaa\" { x = x . \"a\"; if x == \"aaa\" { y = \"1\"; } else { z = z . x; } }",
            "args 0; x = \"1\"; if x == \"1\" { while \"\" == \"\" {} }",
        ]);
        for src in sources {
            let p = parse_program(src).unwrap();
            let (n, vals, dead) = stepped(src, 200);
            let mut m = MachineState::new(Arc::new(Compiled::new(p)), &[]).unwrap();
            m.run_for(n.len() as u64);
            if !dead && n.len() < 200 {
                assert!(m.is_halted(), "{src}");
            }
            for (v, val) in vals {
                assert_eq!(m.value(&v), val.as_bytes(), "{src}: {v}");
            }
        }
    }

    #[test]
    fn dead_end_is_detected() {
        let (n, _, dead) = stepped("args 0; x = \"1\"; if x == \"1\" { while \"\" == \"\" {} }", 100);
        assert!(dead);
        assert_eq!(n.len(), 3);
    }
}
