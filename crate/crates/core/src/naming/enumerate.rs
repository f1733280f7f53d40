//! Shortlex ranking and unranking of relation programs (arity >= 1, all
//! bytes in Σ) by counting over the token grammar.
//!
//! A source string is: gap tok gap tok ... tok gap, where each gap is a run
//! of spaces, and a gap between two word-class tokens must be non-empty.
//! `table(X)[p][q][n]` counts the realizations of grammar symbol X of total
//! length n (including the gap before each of its tokens), given the class
//! `p` of whatever precedes it and ending in class `q`.

use std::cell::RefCell;
use std::collections::HashMap;
use std::rc::Rc;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use super::NamingError;
use crate::lcore::ast::{in_sigma, is_arg_name};
use crate::lcore::lexer::{next_token, skip_space, LexErrorKind, Tok};
use crate::lcore::parse_program;

pub const DEFAULT_LENGTH_CAP: usize = 64;

/// Boundary classes: 0 = punctuation or start of text, 1 = word character.
const P: usize = 0;
const W: usize = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum Term {
    Args,
    PosNat,
    Semi,
    /// Assignable identifier (not a keyword, not argN).
    AIdent,
    /// Any identifier in expression position.
    Ident,
    Assign,
    If,
    Else,
    While,
    Halt,
    HeadOpen,
    TailOpen,
    Str,
    Dot,
    RParen,
    LBrace,
    RBrace,
    EqEq,
    Neq,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum Nt {
    Program,
    Stmts,
    Stmt,
    ElseOpt,
    Expr,
    ExprTail,
    Atom,
    Cond,
    CondOp,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum Sym {
    T(Term),
    N(Nt),
}

use Sym::{N, T};

fn productions(nt: Nt) -> &'static [&'static [Sym]] {
    use Nt::*;
    use Term::*;
    match nt {
        Program => &[&[T(Args), T(PosNat), T(Semi), N(Stmts)]],
        Stmts => &[&[N(Stmt), N(Stmts)], &[]],
        Stmt => &[
            &[T(AIdent), T(Assign), N(Expr), T(Semi)],
            &[T(If), N(Cond), T(LBrace), N(Stmts), T(RBrace), N(ElseOpt)],
            &[T(While), N(Cond), T(LBrace), N(Stmts), T(RBrace)],
            &[T(Halt), T(Semi)],
        ],
        ElseOpt => &[&[T(Else), T(LBrace), N(Stmts), T(RBrace)], &[]],
        Expr => &[&[N(Atom), N(ExprTail)]],
        ExprTail => &[&[T(Dot), N(Atom), N(ExprTail)], &[]],
        Atom => &[&[T(Str)], &[T(Ident)], &[T(HeadOpen), N(Expr), T(RParen)], &[T(TailOpen), N(Expr), T(RParen)]],
        Cond => &[&[N(Expr), N(CondOp), N(Expr)]],
        CondOp => &[&[T(EqEq)], &[T(Neq)]],
    }
}

fn first_contains(sym: Sym, t: Term) -> bool {
    match sym {
        T(x) => x == t,
        N(nt) => productions(nt).iter().any(|p| p.first().is_some_and(|s| first_contains(*s, t))),
    }
}

/// (start class, end class) of a terminal.
fn classes(t: Term) -> (usize, usize) {
    use Term::*;
    match t {
        Args | PosNat | AIdent | Ident | If | Else | While | Halt => (W, W),
        HeadOpen | TailOpen => (W, P),
        _ => (P, P),
    }
}

const KW_FIXED: [(&str, Term); 5] =
    [("args", Term::Args), ("if", Term::If), ("else", Term::Else), ("while", Term::While), ("halt", Term::Halt)];
const ALL_KEYWORDS: [&str; 7] = ["args", "if", "else", "while", "halt", "head", "tail"];

/// LL(1) step: consumes terminal `t` from the parse stack (top at the end).
fn feed(stack: &mut Vec<Sym>, t: Term) -> bool {
    loop {
        match stack.pop() {
            None => return false,
            Some(T(x)) => return x == t,
            Some(N(nt)) => {
                let prods = productions(nt);
                if let Some(p) = prods.iter().find(|p| p.first().is_some_and(|s| first_contains(*s, t))) {
                    stack.extend(p.iter().rev());
                } else if !prods.iter().any(|p| p.is_empty()) {
                    return false;
                }
            }
        }
    }
}

fn big_pow(base: u32, e: usize) -> BigUint {
    BigUint::from(base).pow(e as u32)
}

/// Strings of length `len` matching `arg[1-9][0-9]*` that start with `u`.
fn argforms_with_prefix(u: &[u8], len: usize) -> BigUint {
    if len < 4 || u.len() > len {
        return BigUint::zero();
    }
    let allowed = |i: usize, b: u8| match i {
        0 => b == b'a',
        1 => b == b'r',
        2 => b == b'g',
        3 => (b'1'..=b'9').contains(&b),
        _ => b.is_ascii_digit(),
    };
    if !u.iter().enumerate().all(|(i, &b)| allowed(i, b)) {
        return BigUint::zero();
    }
    let mut n = BigUint::one();
    for i in u.len()..len {
        n *= match i {
            0..=2 => 1u32,
            3 => 9,
            _ => 10,
        };
    }
    n
}

type Table = [[BigUint; 2]; 2];

fn zero_table() -> Table {
    Default::default()
}

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
enum Key {
    Sym(Sym),
    /// Suffix of production `prod` of `nt` starting at item `at`.
    Seq(Nt, usize, usize),
}

/// Count caches. Grows lazily; single-threaded (one instance per thread).
#[derive(Default)]
struct Counter {
    strlit: Vec<BigUint>,
    tables: HashMap<(Key, usize), Rc<Table>>,
    chains: HashMap<(Vec<Sym>, usize), Rc<Vec<[BigUint; 2]>>>,
}

impl Counter {
    /// Number of string-literal bodies of length m (escapes take two bytes).
    fn strbody(&mut self, m: usize) -> BigUint {
        if self.strlit.is_empty() {
            self.strlit.push(BigUint::one());
            self.strlit.push(BigUint::from(93u32));
        }
        while self.strlit.len() <= m {
            let k = self.strlit.len();
            let v = &self.strlit[k - 1] * 93u32 + &self.strlit[k - 2] * 2u32;
            self.strlit.push(v);
        }
        self.strlit[m].clone()
    }

    /// Realizations of a terminal with exactly `m` bytes.
    fn realize(&mut self, t: Term, m: usize) -> BigUint {
        use Term::*;
        let fixed = |len: usize| if m == len { BigUint::one() } else { BigUint::zero() };
        match t {
            Args | Else | Halt => fixed(4),
            If | EqEq | Neq => fixed(2),
            While | HeadOpen | TailOpen => fixed(5),
            Semi | Assign | Dot | RParen | LBrace | RBrace => fixed(1),
            PosNat => {
                if m == 0 {
                    BigUint::zero()
                } else {
                    big_pow(10, m - 1) * 9u32
                }
            }
            Ident | AIdent => {
                if m == 0 {
                    return BigUint::zero();
                }
                let kw = ALL_KEYWORDS.iter().filter(|k| k.len() == m).count() as u32;
                let mut n = big_pow(37, m - 1) * 26u32 - kw;
                if t == AIdent {
                    n -= argforms_with_prefix(b"", m);
                }
                n
            }
            Str => {
                if m < 2 {
                    BigUint::zero()
                } else {
                    self.strbody(m - 2)
                }
            }
        }
    }

    fn table(&mut self, key: Key, n: usize) -> Rc<Table> {
        if let Some(t) = self.tables.get(&(key, n)) {
            return Rc::clone(t);
        }
        let mut out = zero_table();
        match key {
            Key::Sym(T(t)) => {
                let (start, end) = classes(t);
                for (p, row) in out.iter_mut().enumerate() {
                    let need = usize::from(p == W && start == W);
                    let mut acc = BigUint::zero();
                    for g in need..=n {
                        acc += self.realize(t, n - g);
                    }
                    row[end] = acc;
                }
            }
            Key::Sym(N(nt)) => {
                for i in 0..productions(nt).len() {
                    let t = self.table(Key::Seq(nt, i, 0), n);
                    for p in 0..2 {
                        for q in 0..2 {
                            out[p][q] += &t[p][q];
                        }
                    }
                }
            }
            Key::Seq(nt, i, at) => {
                let prod = productions(nt)[i];
                if at == prod.len() {
                    if n == 0 {
                        out[P][P] = BigUint::one();
                        out[W][W] = BigUint::one();
                    }
                } else {
                    for m in 0..=n {
                        let head = self.table(Key::Sym(prod[at]), m);
                        if head.iter().flatten().all(Zero::is_zero) {
                            continue;
                        }
                        let rest = self.table(Key::Seq(nt, i, at + 1), n - m);
                        for p in 0..2 {
                            for r in 0..2 {
                                if head[p][r].is_zero() {
                                    continue;
                                }
                                for q in 0..2 {
                                    if !rest[r][q].is_zero() {
                                        out[p][q] += &head[p][r] * &rest[r][q];
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
        let rc = Rc::new(out);
        self.tables.insert((key, n), Rc::clone(&rc));
        rc
    }

    /// `v[r][p]`: ways to realize the stack (top at the end) followed by
    /// trailing spaces in exactly r bytes, after a token of class p.
    fn chain(&mut self, stack: &[Sym], rmax: usize) -> Rc<Vec<[BigUint; 2]>> {
        if let Some(v) = self.chains.get(&(stack.to_vec(), rmax)) {
            return Rc::clone(v);
        }
        let v = match stack.split_last() {
            None => Rc::new(vec![[BigUint::one(), BigUint::one()]; rmax + 1]),
            Some((&top, rest)) => {
                let below = self.chain(rest, rmax);
                let mut v: Vec<[BigUint; 2]> = vec![Default::default(); rmax + 1];
                for m in 0..=rmax {
                    let t = self.table(Key::Sym(top), m);
                    for p in 0..2 {
                        for q in 0..2 {
                            if t[p][q].is_zero() {
                                continue;
                            }
                            for r in m..=rmax {
                                let b = &below[r - m][q];
                                if !b.is_zero() {
                                    v[r][p] += &t[p][q] * b;
                                }
                            }
                        }
                    }
                }
                Rc::new(v)
            }
        };
        self.chains.insert((stack.to_vec(), rmax), Rc::clone(&v));
        v
    }

    /// Number of valid relation programs of length `len` that begin with `prefix`.
    fn prefix_count(&mut self, prefix: &[u8], len: usize) -> BigUint {
        if prefix.len() > len || !prefix.iter().all(|&b| in_sigma(b)) {
            return BigUint::zero();
        }
        let rem = len - prefix.len();
        let mut stack = vec![N(Nt::Program)];
        let mut last = P;
        let mut pos = 0;
        let (start, complete) = loop {
            let s = skip_space(prefix, pos);
            if s == prefix.len() {
                let class = if s > pos { P } else { last };
                return self.chain(&stack, len)[rem][class].clone();
            }
            match next_token(prefix, pos) {
                Ok(Some(lx)) if lx.end < prefix.len() => {
                    let Some(t) = self.term_of(&stack, &lx.tok) else { return BigUint::zero() };
                    if !feed(&mut stack, t) {
                        return BigUint::zero();
                    }
                    last = classes(t).1;
                    pos = lx.end;
                }
                Ok(Some(_)) => break (s, true),
                Err(e) if e.kind == LexErrorKind::Incomplete => break (s, false),
                _ => return BigUint::zero(),
            }
        };
        let u = &prefix[start..];
        let mut total = BigUint::zero();
        for (t, ways) in self.completions(u, complete, rem) {
            let mut st = stack.clone();
            if !feed(&mut st, t) {
                continue;
            }
            let v = self.chain(&st, len);
            let end = classes(t).1;
            for (e, w) in ways.into_iter().enumerate() {
                if !w.is_zero() {
                    total += w * &v[rem - e][end];
                }
            }
        }
        total
    }

    /// Terminal for a complete lexeme given the parse state.
    fn term_of(&self, stack: &[Sym], tok: &Tok) -> Option<Term> {
        use Term::*;
        Some(match tok {
            Tok::Args => Args,
            Tok::If => If,
            Tok::Else => Else,
            Tok::While => While,
            Tok::Halt => Halt,
            Tok::HeadOpen => HeadOpen,
            Tok::TailOpen => TailOpen,
            Tok::Ident(name) => {
                let mut probe = stack.to_vec();
                if !is_arg_name(name) && feed(&mut probe, AIdent) {
                    AIdent
                } else {
                    Ident
                }
            }
            Tok::Nat(d) if d != "0" => PosNat,
            Tok::Nat(_) => return None,
            Tok::Str(_) => Str,
            Tok::Semi => Semi,
            Tok::Assign => Assign,
            Tok::EqEq => EqEq,
            Tok::Neq => Neq,
            Tok::LBrace => LBrace,
            Tok::RBrace => RBrace,
            Tok::RParen => RParen,
            Tok::Dot => Dot,
        })
    }

    /// Ways to finish the partial lexeme `u` as each terminal, indexed by
    /// the number of extra bytes (0..=rem).
    fn completions(&mut self, u: &[u8], complete: bool, rem: usize) -> Vec<(Term, Vec<BigUint>)> {
        use Term::*;
        let exact = |t: Term, e: usize| {
            let mut w = vec![BigUint::zero(); rem + 1];
            if e <= rem {
                w[e] = BigUint::one();
            }
            (t, w)
        };
        let c0 = u[0];
        match c0 {
            b'a'..=b'z' => {
                if u.last() == Some(&b'(') {
                    return match u {
                        b"head(" => vec![exact(HeadOpen, 0)],
                        b"tail(" => vec![exact(TailOpen, 0)],
                        _ => vec![],
                    };
                }
                let mut out = Vec::new();
                for (kw, t) in KW_FIXED {
                    if kw.len() >= u.len() && kw.as_bytes().starts_with(u) {
                        out.push(exact(t, kw.len() - u.len()));
                    }
                }
                for (kw, t) in [("head(", HeadOpen), ("tail(", TailOpen)] {
                    if kw.len() > u.len() && kw.as_bytes().starts_with(u) {
                        out.push(exact(t, kw.len() - u.len()));
                    }
                }
                let mut any = vec![BigUint::zero(); rem + 1];
                let mut assignable = vec![BigUint::zero(); rem + 1];
                for e in 0..=rem {
                    let l = u.len() + e;
                    let kws = ALL_KEYWORDS.iter().filter(|k| k.len() == l && k.as_bytes().starts_with(u)).count();
                    let n = big_pow(37, e) - kws as u32;
                    assignable[e] = &n - argforms_with_prefix(u, l);
                    any[e] = n;
                }
                out.push((Ident, any));
                out.push((AIdent, assignable));
                out
            }
            b'0'..=b'9' => {
                if c0 == b'0' {
                    return vec![];
                }
                let w = (0..=rem).map(|e| big_pow(10, e)).collect();
                vec![(PosNat, w)]
            }
            b'"' => {
                if complete {
                    return vec![exact(Str, 0)];
                }
                let mut pending = false;
                let mut i = 1;
                while i < u.len() {
                    if u[i] == b'\\' {
                        pending = i + 1 == u.len();
                        i += 2;
                    } else {
                        i += 1;
                    }
                }
                let w = (0..=rem)
                    .map(|e| match (pending, e) {
                        (true, e) if e >= 2 => self.strbody(e - 2) * 2u32,
                        (false, e) if e >= 1 => self.strbody(e - 1),
                        _ => BigUint::zero(),
                    })
                    .collect();
                vec![(Str, w)]
            }
            b'=' if u.len() == 1 => vec![exact(Assign, 0), exact(EqEq, 1)],
            b'=' => vec![exact(EqEq, 0)],
            b'!' if u.len() == 1 => vec![exact(Neq, 1)],
            b'!' => vec![exact(Neq, 0)],
            b';' => vec![exact(Semi, 0)],
            b'.' => vec![exact(Dot, 0)],
            b'{' => vec![exact(LBrace, 0)],
            b'}' => vec![exact(RBrace, 0)],
            b')' => vec![exact(RParen, 0)],
            _ => vec![],
        }
    }

    fn count(&mut self, len: usize) -> BigUint {
        self.prefix_count(b"", len)
    }

    fn trim(&mut self) {
        if self.chains.len() > 200_000 {
            self.chains.clear();
        }
    }
}

thread_local! {
    static COUNTER: RefCell<Counter> = RefCell::new(Counter::default());
}

fn with_counter<R>(f: impl FnOnce(&mut Counter) -> R) -> R {
    COUNTER.with(|c| {
        let mut c = c.borrow_mut();
        c.trim();
        f(&mut c)
    })
}

/// Number of relation programs of exactly `len` bytes.
pub fn count_programs(len: usize) -> BigUint {
    with_counter(|c| c.count(len))
}

/// Source of the i-th relation program, with the default length cap.
pub fn nth_program(i: &BigUint) -> Result<String, NamingError> {
    nth_program_with_cap(i, DEFAULT_LENGTH_CAP)
}

pub fn nth_program_with_cap(i: &BigUint, cap: usize) -> Result<String, NamingError> {
    with_counter(|c| {
        let mut i = i.clone();
        let mut len = 0;
        loop {
            if len > cap {
                return Err(NamingError::ResourceLimit { cap });
            }
            let n = c.count(len);
            if i < n {
                break;
            }
            i -= n;
            len += 1;
        }
        let mut prefix = Vec::with_capacity(len);
        for _ in 0..len {
            let mut chosen = false;
            for b in 32u8..=126 {
                prefix.push(b);
                let n = c.prefix_count(&prefix, len);
                if i < n {
                    chosen = true;
                    break;
                }
                i -= n;
                prefix.pop();
            }
            assert!(chosen, "count tables inconsistent");
        }
        Ok(String::from_utf8(prefix).expect("ascii"))
    })
}

/// The validity predicate of the enumeration: Σ text that parses with arity at least 1.
pub fn check_relation_program(source: &str) -> Result<(), NamingError> {
    let bytes = source.as_bytes();
    if let Some(pos) = bytes.iter().position(|&b| !in_sigma(b)) {
        return Err(NamingError::NotARelationProgram(format!("byte 0x{:02x} at {pos} is outside the alphabet", bytes[pos])));
    }
    match parse_program(source) {
        Err(e) => return Err(NamingError::NotARelationProgram(e.to_string())),
        Ok(p) if p.arity == 0 => return Err(NamingError::NotARelationProgram("arity 0".into())),
        Ok(_) => {}
    }
    Ok(())
}

/// Index of `source` in the enumeration.
pub fn rank_program(source: &str) -> Result<BigUint, NamingError> {
    check_relation_program(source)?;
    let bytes = source.as_bytes();
    with_counter(|c| {
        let len = bytes.len();
        let mut rank = BigUint::zero();
        for l in 0..len {
            rank += c.count(l);
        }
        let mut prefix = Vec::with_capacity(len);
        for &actual in bytes {
            for b in 32u8..actual {
                prefix.push(b);
                rank += c.prefix_count(&prefix, len);
                prefix.pop();
            }
            prefix.push(actual);
        }
        Ok(rank)
    })
}
