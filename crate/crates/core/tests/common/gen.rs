//! Random ℒ programs and ℒ* statements for property tests, built from the
//! grammars directly (not from the crate's enumerator or parser).

#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

const LITERALS: &[&str] = &["\"\"", "\"a\"", "\"1\"", "\"ab\"", "\"x;y\"", "\"\\\"\"", "\"\\\\\""];

fn expr(r: &mut ChaCha8Rng, vars: &[String], depth: u32) -> String {
    let pick = if depth == 0 { r.gen_range(0..2) } else { r.gen_range(0..5) };
    match pick {
        0 => LITERALS.choose(r).unwrap().to_string(),
        1 => vars.choose(r).unwrap().clone(),
        2 => format!("head({})", expr(r, vars, depth - 1)),
        3 => format!("tail({})", expr(r, vars, depth - 1)),
        _ => format!("{} . {}", expr(r, vars, depth - 1), expr(r, vars, depth - 1)),
    }
}

fn cond(r: &mut ChaCha8Rng, vars: &[String]) -> String {
    let op = if r.gen_bool(0.5) { "==" } else { "!=" };
    format!("{} {op} {}", expr(r, vars, 1), expr(r, vars, 1))
}

fn stmt(r: &mut ChaCha8Rng, vars: &[String], targets: &[&str], depth: u32) -> String {
    let pick = if depth == 0 { r.gen_range(0..2) } else { r.gen_range(0..5) };
    match pick {
        0 => format!("{} = {};", targets.choose(r).unwrap(), expr(r, vars, 2)),
        1 => "halt;".to_string(),
        2 => format!("if {} {{ {} }}", cond(r, vars), stmt(r, vars, targets, depth - 1)),
        3 => format!(
            "if {} {{ {} }} else {{ {} }}",
            cond(r, vars),
            stmt(r, vars, targets, depth - 1),
            stmt(r, vars, targets, depth - 1)
        ),
        _ => format!("while {} {{ {} }}", cond(r, vars), stmt(r, vars, targets, depth - 1)),
    }
}

/// A syntactically valid program with `arity` inputs, whitespace as
/// single spaces.
pub fn program(r: &mut ChaCha8Rng, arity: usize, max_len: usize) -> String {
    let targets = ["x", "y", "zz"];
    let mut vars: Vec<String> = targets.iter().map(|s| s.to_string()).collect();
    vars.extend((1..=arity).map(|i| format!("arg{i}")));
    loop {
        let mut text = format!("args {arity};");
        for _ in 0..r.gen_range(0..3) {
            text.push(' ');
            text.push_str(&stmt(r, &vars, &targets, 2));
        }
        if text.len() <= max_len {
            return text;
        }
    }
}

/// An ℒ* statement and the free variables it actually uses, in order of
/// first use.
pub fn statement(r: &mut ChaCha8Rng, free_pool: &[&str]) -> (String, Vec<String>) {
    let mut used = Vec::new();
    let text = stmt_l(r, free_pool, &mut Vec::new(), &mut used, 3, &mut 0);
    (text, used)
}

fn term(r: &mut ChaCha8Rng, free_pool: &[&str], bound: &[String], used: &mut Vec<String>) -> String {
    match r.gen_range(0..4) {
        0 => r.gen_range(0..5).to_string(),
        1 => format!("R{}", r.gen_range(0..3)),
        2 if !bound.is_empty() => bound.choose(r).unwrap().clone(),
        _ => {
            let v = free_pool.choose(r).unwrap().to_string();
            if !used.contains(&v) {
                used.push(v.clone());
            }
            v
        }
    }
}

fn stmt_l(
    r: &mut ChaCha8Rng,
    free_pool: &[&str],
    bound: &mut Vec<String>,
    used: &mut Vec<String>,
    depth: u32,
    fresh: &mut u32,
) -> String {
    let pick = if depth == 0 { r.gen_range(0..4) } else { r.gen_range(0..8) };
    match pick {
        0 => format!("{} = {}", term(r, free_pool, bound, used), term(r, free_pool, bound, used)),
        1 => format!("{} != {}", term(r, free_pool, bound, used), term(r, free_pool, bound, used)),
        2 => {
            let op = ["=", "<", "<=", ">", ">=", "!="].choose(r).unwrap();
            let l = term(r, free_pool, bound, used);
            let m = term(r, free_pool, bound, used);
            let rr = term(r, free_pool, bound, used);
            format!("{l} + {m} {op} {rr}")
        }
        3 => {
            let f = term(r, free_pool, bound, used);
            let a = term(r, free_pool, bound, used);
            format!("{f}({a})")
        }
        4 => format!(
            "({} and {})",
            stmt_l(r, free_pool, bound, used, depth - 1, fresh),
            stmt_l(r, free_pool, bound, used, depth - 1, fresh)
        ),
        5 => format!(
            "({} or {})",
            stmt_l(r, free_pool, bound, used, depth - 1, fresh),
            stmt_l(r, free_pool, bound, used, depth - 1, fresh)
        ),
        6 => {
            *fresh += 1;
            let v = format!("q{fresh}");
            bound.push(v.clone());
            let body = stmt_l(r, free_pool, bound, used, depth - 1, fresh);
            bound.pop();
            format!("(exists {v} : {body})")
        }
        _ => {
            *fresh += 1;
            let v = format!("q{fresh}");
            let b = term(r, free_pool, bound, used);
            bound.push(v.clone());
            let body = stmt_l(r, free_pool, bound, used, depth - 1, fresh);
            bound.pop();
            format!("(forall {v} <= {b} : {body})")
        }
    }
}
