//! Brute-force enumeration of relation programs by depth-first search over
//! raw bytes of Σ. A prefix is pruned only when no extension can parse:
//! the complete tokens before the last lexeme must parse up to end of
//! input, and some token kind the last lexeme can still grow into must be
//! accepted there. Independent of the counting tables; only the lexer and
//! parser decide.

#![allow(dead_code)]

use tvl::lcore::lexer::{next_token, skip_space, LexErrorKind};
use tvl::lcore::{parse_program, ParseError};

/// Parse succeeds, or fails only because input ended.
fn parses_to_end(text: &str) -> bool {
    match parse_program(text) {
        Ok(_) => true,
        Err(ParseError::MissingSignature) => text.trim_start_matches(' ').is_empty(),
        Err(ParseError::Syntax { pos, message }) => pos >= text.len() && message.contains("end of input"),
    }
}

/// Concrete lexemes for each token kind `u` can still become.
fn representatives(u: &[u8], complete: bool) -> Vec<String> {
    let text = std::str::from_utf8(u).unwrap();
    match u[0] {
        b'a'..=b'z' => {
            if text.ends_with('(') {
                return vec![text.to_string()];
            }
            let mut reps = vec!["x".to_string()];
            for kw in ["args", "if", "else", "while", "halt", "head(", "tail("] {
                if kw.starts_with(text) {
                    reps.push(kw.to_string());
                }
            }
            reps
        }
        b'0' => vec!["0".into()],
        b'1'..=b'9' => vec!["1".into()],
        b'"' => vec!["\"\"".into()],
        b'=' if u.len() == 1 => vec!["=".into(), "==".into()],
        b'!' if u.len() == 1 => vec!["!=".into()],
        _ if complete => vec![text.to_string()],
        _ => vec![],
    }
}

/// Whether some extension of `prefix` could still parse.
fn alive(prefix: &[u8]) -> bool {
    let mut pos = 0;
    loop {
        let s = skip_space(prefix, pos);
        if s == prefix.len() {
            return parses_to_end(std::str::from_utf8(prefix).unwrap());
        }
        let complete = match next_token(prefix, pos) {
            Ok(Some(lx)) if lx.end < prefix.len() => {
                pos = lx.end;
                continue;
            }
            Ok(Some(_)) => true,
            Err(e) if e.kind == LexErrorKind::Incomplete => false,
            _ => return false,
        };
        let head = std::str::from_utf8(&prefix[..s]).unwrap();
        return representatives(&prefix[s..], complete)
            .iter()
            .any(|rep| parses_to_end(&format!("{head}{rep}")));
    }
}

/// All relation programs of length <= `max_len`, in shortlex order.
pub fn relation_programs_up_to(max_len: usize) -> Vec<String> {
    let mut found = Vec::new();
    let mut prefix = Vec::new();
    fn dfs(prefix: &mut Vec<u8>, max_len: usize, found: &mut Vec<String>) {
        let text = std::str::from_utf8(prefix).unwrap();
        if let Ok(p) = parse_program(text) {
            if p.arity >= 1 {
                found.push(text.to_string());
            }
        }
        if prefix.len() == max_len {
            return;
        }
        for b in 32u8..=126 {
            prefix.push(b);
            if alive(prefix) {
                dfs(prefix, max_len, found);
            }
            prefix.pop();
        }
    }
    dfs(&mut prefix, max_len, &mut found);
    found.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    found
}
