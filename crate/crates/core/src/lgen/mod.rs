//! Host-side generator for ℒ code.
//!
//! Routines are written as ℒ text templates. `@name` is a placeholder: it
//! expands to the caller's binding, or to a fresh variable private to that
//! expansion. `%name;` splices a statement block supplied by the caller.
//! Generated programs are plain ℒ; nothing here runs at evaluation time.

pub mod arith;
pub mod flatten;
pub mod godel;
pub mod interp;
pub mod ncode;
pub mod unrank;

use std::collections::{BTreeMap, HashMap};

use crate::lcore::ast::{is_arg_name, Cond, CondOp, Expr, Stmt};
use crate::lcore::{parse_program, quote, render_compact};

/// Fresh-name source shared by all expansions of one generated program.
#[derive(Debug, Default)]
pub struct Gen {
    counter: usize,
}

/// Caller bindings for a template: placeholder name to ℒ text.
pub type Binds<'a> = &'a [(&'a str, &'a str)];

const SPLICE: &str = "splice__";

impl Gen {
    pub fn new() -> Self {
        Gen::default()
    }

    pub fn fresh(&mut self, hint: &str) -> String {
        self.counter += 1;
        format!("{hint}__{}", self.counter)
    }

    /// Expands a template with variable bindings only.
    pub fn code(&mut self, template: &str, binds: Binds) -> Vec<Stmt> {
        self.splice(template, binds, Vec::new())
    }

    /// Expands a template, replacing `%name;` with the given blocks.
    pub fn splice(&mut self, template: &str, binds: Binds, blocks: Vec<(&str, Vec<Stmt>)>) -> Vec<Stmt> {
        let text = self.expand(template, binds);
        let program = match parse_program(&format!("args 0; {text}")) {
            Ok(p) => p,
            Err(e) => panic!("bad template: {e}\n{text}"),
        };
        let mut blocks: HashMap<String, Vec<Stmt>> =
            blocks.into_iter().map(|(k, v)| (format!("{SPLICE}{k}"), v)).collect();
        let out = splice_stmts(program.body, &mut blocks);
        assert!(blocks.is_empty(), "unused blocks: {:?}", blocks.keys().collect::<Vec<_>>());
        out
    }

    fn expand(&mut self, template: &str, binds: Binds) -> String {
        let src = template.as_bytes();
        let mut out = String::with_capacity(src.len());
        let mut locals: HashMap<String, String> = HashMap::new();
        let mut i = 0;
        while i < src.len() {
            let c = src[i];
            match c {
                b'"' => {
                    let start = i;
                    i += 1;
                    while src[i] != b'"' {
                        i += if src[i] == b'\\' { 2 } else { 1 };
                    }
                    i += 1;
                    out.push_str(&template[start..i]);
                }
                b'@' | b'%' => {
                    let start = i + 1;
                    let mut end = start;
                    while end < src.len() && (src[end].is_ascii_alphanumeric() || src[end] == b'_') {
                        end += 1;
                    }
                    let name = &template[start..end];
                    assert!(!name.is_empty(), "empty placeholder in template");
                    if c == b'%' {
                        out.push_str(&format!("{SPLICE}{name} = \"\""));
                    } else if let Some((_, v)) = binds.iter().find(|(k, _)| *k == name) {
                        out.push_str(v);
                    } else {
                        let fresh = match locals.get(name) {
                            Some(f) => f.clone(),
                            None => {
                                let f = self.fresh(name);
                                locals.insert(name.to_string(), f.clone());
                                f
                            }
                        };
                        out.push_str(&fresh);
                    }
                    i = end;
                }
                _ => {
                    out.push(c as char);
                    i += 1;
                }
            }
        }
        out
    }
}

fn splice_stmts(body: Vec<Stmt>, blocks: &mut HashMap<String, Vec<Stmt>>) -> Vec<Stmt> {
    let mut out = Vec::with_capacity(body.len());
    for s in body {
        match s {
            Stmt::Assign { target, .. } if target.starts_with(SPLICE) => {
                let block = blocks.remove(&target).unwrap_or_else(|| panic!("missing block {target}"));
                out.extend(block);
            }
            Stmt::If { cond, then_body, else_body } => out.push(Stmt::If {
                cond,
                then_body: splice_stmts(then_body, blocks),
                else_body: else_body.map(|e| splice_stmts(e, blocks)),
            }),
            Stmt::While { cond, body } => out.push(Stmt::While { cond, body: splice_stmts(body, blocks) }),
            other => out.push(other),
        }
    }
    out
}

/// ℒ source text of a literal.
pub fn lit(value: &str) -> String {
    quote(value.as_bytes())
}

/// `if v == k1 { b1 } else { if v == k2 { b2 } ... else { default } }`.
pub fn chain(var: &str, cases: Vec<(String, Vec<Stmt>)>, default: Vec<Stmt>) -> Vec<Stmt> {
    let mut acc = default;
    for (key, body) in cases.into_iter().rev() {
        let cond = Cond::new(Expr::var(var), CondOp::Eq, Expr::lit(key.as_bytes()));
        let else_body = if acc.is_empty() { None } else { Some(acc) };
        acc = vec![Stmt::If { cond, then_body: body, else_body }];
    }
    acc
}

/// The canonical diverge.
pub fn diverge() -> Vec<Stmt> {
    vec![Stmt::While { cond: Cond::new(Expr::lit(""), CondOp::Eq, Expr::lit("")), body: vec![] }]
}

/// Names in order of preference for renaming: `a`..`z`, then two
/// characters, skipping keywords.
fn short_name(mut i: usize) -> String {
    const FIRST: &[u8] = b"abcdefghijklmnopqrstuvwxyz";
    const REST: &[u8] = b"abcdefghijklmnopqrstuvwxyz0123456789_";
    let mut len = 1;
    let mut block = FIRST.len();
    while i >= block {
        i -= block;
        len += 1;
        block = FIRST.len() * REST.len().pow(len as u32 - 1);
    }
    let mut tail = Vec::with_capacity(len);
    for _ in 1..len {
        tail.push(REST[i % REST.len()]);
        i /= REST.len();
    }
    let mut s = String::with_capacity(len);
    s.push(FIRST[i] as char);
    s.extend(tail.iter().rev().map(|&b| b as char));
    s
}

fn short_names() -> impl Iterator<Item = String> {
    (0..).map(short_name).filter(|n| crate::lcore::ast::is_identifier(n) && !is_arg_name(n) && !n.starts_with("arg"))
}

fn count_expr(e: &Expr, counts: &mut BTreeMap<String, usize>) {
    match e {
        Expr::Lit(_) => {}
        Expr::Var(n) => *counts.entry(n.clone()).or_default() += 1,
        Expr::Head(a) | Expr::Tail(a) => count_expr(a, counts),
        Expr::Concat(a, b) => {
            count_expr(a, counts);
            count_expr(b, counts);
        }
    }
}

fn count_stmts(body: &[Stmt], counts: &mut BTreeMap<String, usize>) {
    for s in body {
        match s {
            Stmt::Assign { target, expr } => {
                *counts.entry(target.clone()).or_default() += 1;
                count_expr(expr, counts);
            }
            Stmt::If { cond, then_body, else_body } => {
                count_expr(&cond.lhs, counts);
                count_expr(&cond.rhs, counts);
                count_stmts(then_body, counts);
                if let Some(e) = else_body {
                    count_stmts(e, counts);
                }
            }
            Stmt::While { cond, body } => {
                count_expr(&cond.lhs, counts);
                count_expr(&cond.rhs, counts);
                count_stmts(body, counts);
            }
            Stmt::Halt => {}
        }
    }
}

pub fn rename_expr(e: &Expr, map: &dyn Fn(&str) -> String) -> Expr {
    match e {
        Expr::Lit(v) => Expr::Lit(v.clone()),
        Expr::Var(n) => Expr::Var(map(n)),
        Expr::Head(a) => Expr::head(rename_expr(a, map)),
        Expr::Tail(a) => Expr::tail(rename_expr(a, map)),
        Expr::Concat(a, b) => Expr::concat(rename_expr(a, map), rename_expr(b, map)),
    }
}

/// Renames every variable (including assignment targets) through `map`.
pub fn rename_stmts(body: &[Stmt], map: &dyn Fn(&str) -> String) -> Vec<Stmt> {
    let cond = |c: &Cond| Cond::new(rename_expr(&c.lhs, map), c.op, rename_expr(&c.rhs, map));
    body.iter()
        .map(|s| match s {
            Stmt::Assign { target, expr } => Stmt::Assign { target: map(target), expr: rename_expr(expr, map) },
            Stmt::If { cond: c, then_body, else_body } => Stmt::If {
                cond: cond(c),
                then_body: rename_stmts(then_body, map),
                else_body: else_body.as_ref().map(|e| rename_stmts(e, map)),
            },
            Stmt::While { cond: c, body } => Stmt::While { cond: cond(c), body: rename_stmts(body, map) },
            Stmt::Halt => Stmt::Halt,
        })
        .collect()
}

/// Renames variables to the shortest names, most frequent first, and
/// renders the program compactly. `argN` keeps its name.
pub fn finish(arity: usize, body: &[Stmt]) -> String {
    let mut counts = BTreeMap::new();
    count_stmts(body, &mut counts);
    let mut vars: Vec<(String, usize)> = counts.into_iter().filter(|(n, _)| !is_arg_name(n)).collect();
    vars.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    let map: HashMap<String, String> = vars.into_iter().map(|(n, _)| n).zip(short_names()).collect();
    let renamed = rename_stmts(body, &|n| map.get(n).cloned().unwrap_or_else(|| n.to_string()));
    render_compact(arity, &renamed)
}
