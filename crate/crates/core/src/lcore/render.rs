//! Source rendering for ℒ syntax trees.

use super::ast::{Cond, CondOp, Expr, Stmt};
use super::lexer::is_word_byte;

/// Quotes a value as a string literal (`"` and `\` escaped).
pub fn quote(value: &[u8]) -> String {
    let mut s = String::with_capacity(value.len() + 2);
    s.push('"');
    for &b in value {
        if b == b'"' || b == b'\\' {
            s.push('\\');
        }
        s.push(b as char);
    }
    s.push('"');
    s
}

fn tokens_expr(e: &Expr, out: &mut Vec<String>) {
    let parts = e.concat_parts();
    for (i, part) in parts.iter().enumerate() {
        if i > 0 {
            out.push(".".into());
        }
        match part {
            Expr::Lit(v) => out.push(quote(v)),
            Expr::Var(n) => out.push(n.clone()),
            Expr::Head(inner) | Expr::Tail(inner) => {
                out.push(if matches!(part, Expr::Head(_)) { "head(" } else { "tail(" }.into());
                tokens_expr(inner, out);
                out.push(")".into());
            }
            Expr::Concat(..) => unreachable!("flattened"),
        }
    }
}

fn tokens_cond(c: &Cond, out: &mut Vec<String>) {
    tokens_expr(&c.lhs, out);
    out.push(match c.op {
        CondOp::Eq => "==".into(),
        CondOp::Ne => "!=".into(),
    });
    tokens_expr(&c.rhs, out);
}

fn tokens_stmts(body: &[Stmt], out: &mut Vec<String>) {
    for s in body {
        match s {
            Stmt::Assign { target, expr } => {
                out.push(target.clone());
                out.push("=".into());
                tokens_expr(expr, out);
                out.push(";".into());
            }
            Stmt::Halt => {
                out.push("halt".into());
                out.push(";".into());
            }
            Stmt::If { cond, then_body, else_body } => {
                out.push("if".into());
                tokens_cond(cond, out);
                out.push("{".into());
                tokens_stmts(then_body, out);
                out.push("}".into());
                if let Some(e) = else_body {
                    out.push("else".into());
                    out.push("{".into());
                    tokens_stmts(e, out);
                    out.push("}".into());
                }
            }
            Stmt::While { cond, body } => {
                out.push("while".into());
                tokens_cond(cond, out);
                out.push("{".into());
                tokens_stmts(body, out);
                out.push("}".into());
            }
        }
    }
}

fn header_tokens(arity: usize) -> Vec<String> {
    vec!["args".into(), arity.to_string(), ";".into()]
}

/// Shortest rendering: a space only where two word tokens would merge.
pub fn render_compact(arity: usize, body: &[Stmt]) -> String {
    let mut toks = header_tokens(arity);
    tokens_stmts(body, &mut toks);
    let mut out = String::new();
    for t in toks {
        let merge = out.bytes().last().is_some_and(is_word_byte) && t.bytes().next().is_some_and(is_word_byte);
        if merge {
            out.push(' ');
        }
        out.push_str(&t);
    }
    out
}

/// Canonical human-readable rendering: tokens separated by single spaces
/// except before `;` and `)` and after `head(`/`tail(`.
pub fn render(arity: usize, body: &[Stmt]) -> String {
    let mut toks = header_tokens(arity);
    tokens_stmts(body, &mut toks);
    let mut out = String::new();
    let mut prev: Option<&str> = None;
    for t in &toks {
        if let Some(p) = prev {
            let tight = t == ";" || t == ")" || p.ends_with('(');
            if !tight {
                out.push(' ');
            }
        }
        out.push_str(t);
        prev = Some(t);
    }
    out
}
