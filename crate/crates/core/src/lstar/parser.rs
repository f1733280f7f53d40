//! Parser for the ℒ* concrete syntax.
//!
//! ```text
//! stmt  := conj (("or" | "∨") conj)*
//! conj  := unit (("and" | "∧") unit)*
//! unit  := ("exists" | "∃") var ":" stmt
//!        | ("forall" | "∀") var ("<=" | "≤") term ":" stmt
//!        | "(" stmt ")"
//!        | term "(" [term ("," term)*] ")"
//!        | aexpr cmp aexpr
//! aexpr := prod ("+" prod)* ;  prod := atom (("*" | "·") atom)* ;  atom := term | "(" aexpr ")"
//! cmp   := "=" | "!=" | "≠" | "<" | "<=" | "≤" | ">" | ">=" | "≥"
//! ```
//! Quantifier bodies extend as far right as possible. `#` starts a line comment.

use super::ast::{AExpr, CmpOp, Statement, Term};
use super::LStarError;
use crate::naming::{classify_name, Classified, ObjectName};

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Lower(String),
    Upper(String),
    Num(String),
    LParen,
    RParen,
    Comma,
    Colon,
    Plus,
    Star,
    Cmp(CmpOp),
    And,
    Or,
    Exists,
    Forall,
    Forbidden(String),
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>, LStarError> {
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let mut out = Vec::new();
    let mut i = 0;
    let at = |i: usize| chars.get(i).map(|c| c.1);
    while i < chars.len() {
        let (pos, c) = chars[i];
        let next = at(i + 1);
        let mut width = 1;
        let tok = match c {
            ' ' | '\t' | '\n' | '\r' => {
                i += 1;
                continue;
            }
            '#' => {
                while i < chars.len() && chars[i].1 != '\n' {
                    i += 1;
                }
                continue;
            }
            'a'..='z' | 'A'..='Z' | '0'..='9' | '_' => {
                let mut j = i;
                while j < chars.len() && (chars[j].1.is_ascii_alphanumeric() || chars[j].1 == '_') {
                    j += 1;
                }
                let word: String = chars[i..j].iter().map(|c| c.1).collect();
                width = j - i;
                match word.as_str() {
                    "exists" => Tok::Exists,
                    "forall" => Tok::Forall,
                    "and" => Tok::And,
                    "or" => Tok::Or,
                    "not" | "implies" | "iff" => Tok::Forbidden(word),
                    _ if c.is_ascii_digit() => Tok::Num(word),
                    _ if c.is_ascii_uppercase() => Tok::Upper(word),
                    _ if c == '_' => return Err(LStarError::syntax(pos, "identifiers start with a letter")),
                    _ => Tok::Lower(word),
                }
            }
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            ',' => Tok::Comma,
            ':' => Tok::Colon,
            '+' => Tok::Plus,
            '*' | '·' => Tok::Star,
            '∧' => Tok::And,
            '∨' => Tok::Or,
            '∃' => Tok::Exists,
            '∀' => Tok::Forall,
            '≠' => Tok::Cmp(CmpOp::Ne),
            '≤' => Tok::Cmp(CmpOp::Le),
            '≥' => Tok::Cmp(CmpOp::Ge),
            '¬' | '→' | '↔' | '⇒' | '⇔' | '⊃' => Tok::Forbidden(c.to_string()),
            '=' if next == Some('>') => {
                width = 2;
                Tok::Forbidden("=>".into())
            }
            '=' => Tok::Cmp(CmpOp::Eq),
            '!' if next == Some('=') => {
                width = 2;
                Tok::Cmp(CmpOp::Ne)
            }
            '!' | '~' => Tok::Forbidden(c.to_string()),
            '-' if next == Some('>') => {
                width = 2;
                Tok::Forbidden("->".into())
            }
            '<' if next == Some('-') && at(i + 2) == Some('>') => {
                width = 3;
                Tok::Forbidden("<->".into())
            }
            '<' if next == Some('=') && at(i + 2) == Some('>') => {
                width = 3;
                Tok::Forbidden("<=>".into())
            }
            '<' if next == Some('=') => {
                width = 2;
                Tok::Cmp(CmpOp::Le)
            }
            '<' => Tok::Cmp(CmpOp::Lt),
            '>' if next == Some('=') => {
                width = 2;
                Tok::Cmp(CmpOp::Ge)
            }
            '>' => Tok::Cmp(CmpOp::Gt),
            other => return Err(LStarError::syntax(pos, format!("unexpected character `{other}`"))),
        };
        if let Tok::Forbidden(t) = &tok {
            return Err(LStarError::ForbiddenConnective { token: t.clone(), pos });
        }
        out.push((tok, pos));
        i += width;
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    i: usize,
    end: usize,
    bound: Vec<String>,
    free: Vec<String>,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.i).map(|t| &t.0)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.i).map_or(self.end, |t| t.1)
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == Some(t) {
            self.i += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, t: Tok, what: &str) -> Result<(), LStarError> {
        if self.eat(&t) {
            Ok(())
        } else {
            Err(self.unexpected(what))
        }
    }

    fn unexpected(&self, what: &str) -> LStarError {
        match self.peek() {
            Some(t) => LStarError::syntax(self.pos(), format!("expected {what}, found {t:?}")),
            None => LStarError::syntax(self.pos(), format!("expected {what}, found end of input")),
        }
    }

    fn stmt(&mut self) -> Result<Statement, LStarError> {
        let mut acc = self.conj()?;
        while self.eat(&Tok::Or) {
            let rhs = self.conj()?;
            acc = Statement::or(acc, rhs);
        }
        Ok(acc)
    }

    fn conj(&mut self) -> Result<Statement, LStarError> {
        let mut acc = self.unit()?;
        while self.eat(&Tok::And) {
            let rhs = self.unit()?;
            acc = Statement::and(acc, rhs);
        }
        Ok(acc)
    }

    fn var_name(&mut self) -> Result<String, LStarError> {
        match self.peek().cloned() {
            Some(Tok::Lower(v)) => {
                self.i += 1;
                Ok(v)
            }
            _ => Err(self.unexpected("variable")),
        }
    }

    fn unit(&mut self) -> Result<Statement, LStarError> {
        match self.peek() {
            Some(Tok::Exists) => {
                self.i += 1;
                let v = self.var_name()?;
                self.expect(Tok::Colon, "`:`")?;
                self.bound.push(v.clone());
                let body = self.stmt();
                self.bound.pop();
                Ok(Statement::Exists(v, Box::new(body?)))
            }
            Some(Tok::Forall) => {
                let pos = self.pos();
                self.i += 1;
                let v = self.var_name()?;
                if !self.eat(&Tok::Cmp(CmpOp::Le)) {
                    return Err(LStarError::ForbiddenConnective { token: "forall".into(), pos });
                }
                let bound = self.term()?;
                if matches!(bound, Term::Alias(_)) {
                    return Err(LStarError::syntax(pos, "a bound must be a name or variable"));
                }
                self.expect(Tok::Colon, "`:`")?;
                self.bound.push(v.clone());
                let body = self.stmt();
                self.bound.pop();
                Ok(Statement::BoundedAll(v, bound, Box::new(body?)))
            }
            Some(Tok::LParen) => {
                let save = (self.i, self.free.len());
                self.i += 1;
                if let Ok(s) = self.stmt() {
                    if self.eat(&Tok::RParen) && !matches!(self.peek(), Some(Tok::Plus | Tok::Star | Tok::Cmp(_))) {
                        return Ok(s);
                    }
                }
                self.i = save.0;
                self.free.truncate(save.1);
                self.atomic()
            }
            _ => self.atomic(),
        }
    }

    fn atomic(&mut self) -> Result<Statement, LStarError> {
        let start = self.i;
        if !matches!(self.peek(), Some(Tok::LParen)) {
            let t0 = self.term()?;
            if self.eat(&Tok::LParen) {
                let mut args = Vec::new();
                if !self.eat(&Tok::RParen) {
                    loop {
                        let a = self.term()?;
                        if let Term::Alias(name) = &a {
                            return Err(LStarError::syntax(self.toks[self.i - 1].1, format!("alias `{name}` may only name a relation")));
                        }
                        args.push(a);
                        if self.eat(&Tok::RParen) {
                            break;
                        }
                        self.expect(Tok::Comma, "`,` or `)`")?;
                    }
                }
                return Ok(Statement::Rel(t0, args));
            }
            if let Term::Alias(name) = &t0 {
                return Err(LStarError::syntax(self.toks[start].1, format!("alias `{name}` may only name a relation")));
            }
            self.i = start;
        }
        let lhs = self.aexpr()?;
        let op = match self.peek() {
            Some(Tok::Cmp(op)) => *op,
            _ => return Err(self.unexpected("comparison")),
        };
        self.i += 1;
        let rhs = self.aexpr()?;
        Ok(match (lhs, op, rhs) {
            (AExpr::Term(a), CmpOp::Eq, AExpr::Term(b)) => Statement::Eq(a, b),
            (AExpr::Term(a), CmpOp::Ne, AExpr::Term(b)) => Statement::Neq(a, b),
            (lhs, op, rhs) => Statement::Arith(lhs, op, rhs),
        })
    }

    fn aexpr(&mut self) -> Result<AExpr, LStarError> {
        let mut acc = self.prod()?;
        while self.eat(&Tok::Plus) {
            let rhs = self.prod()?;
            acc = AExpr::add(acc, rhs);
        }
        Ok(acc)
    }

    fn prod(&mut self) -> Result<AExpr, LStarError> {
        let mut acc = self.aatom()?;
        while self.eat(&Tok::Star) {
            let rhs = self.aatom()?;
            acc = AExpr::mul(acc, rhs);
        }
        Ok(acc)
    }

    fn aatom(&mut self) -> Result<AExpr, LStarError> {
        if self.eat(&Tok::LParen) {
            let e = self.aexpr()?;
            self.expect(Tok::RParen, "`)`")?;
            return Ok(e);
        }
        let pos = self.pos();
        match self.term()? {
            Term::Alias(name) => Err(LStarError::syntax(pos, format!("alias `{name}` may only name a relation"))),
            t => Ok(AExpr::Term(t)),
        }
    }

    fn term(&mut self) -> Result<Term, LStarError> {
        let pos = self.pos();
        let t = match self.peek().cloned() {
            Some(Tok::Num(s)) => match classify_name(&s) {
                Classified::Numeral(n) => Term::Name(ObjectName::Numeral(n)),
                _ => return Err(LStarError::syntax(pos, format!("`{s}` is not a canonical numeral"))),
            },
            Some(Tok::Upper(s)) => match classify_name(&s) {
                Classified::RName(i) => Term::Name(ObjectName::RName(i)),
                _ if s.len() > 1 && s.starts_with('R') && s[1..].bytes().all(|b| b.is_ascii_digit()) => {
                    return Err(LStarError::syntax(pos, format!("`{s}` is not a canonical R-name")))
                }
                _ => Term::Alias(s),
            },
            Some(Tok::Lower(v)) => {
                if !self.bound.contains(&v) && !self.free.contains(&v) {
                    return Err(LStarError::UnboundVariable(v));
                }
                Term::Var(v)
            }
            _ => return Err(self.unexpected("term")),
        };
        self.i += 1;
        Ok(t)
    }
}

/// Parses a closed statement.
pub fn parse_lstar(text: &str) -> Result<Statement, LStarError> {
    parse_lstar_open(text, &[])
}

/// Parses a statement whose free variables are exactly drawn from `free`.
pub fn parse_lstar_open(text: &str, free: &[&str]) -> Result<Statement, LStarError> {
    let toks = lex(text)?;
    let mut p = Parser {
        toks,
        i: 0,
        end: text.len(),
        bound: Vec::new(),
        free: free.iter().map(|s| s.to_string()).collect(),
    };
    if p.peek().is_none() {
        return Err(LStarError::syntax(0, "empty statement"));
    }
    let s = p.stmt()?;
    if p.peek().is_some() {
        return Err(p.unexpected("end of statement"));
    }
    Ok(s)
}
