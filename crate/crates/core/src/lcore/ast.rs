//! Abstract syntax of ℒ programs.

/// First and last symbol of the alphabet Σ (printable ASCII, ordered by code point).
pub const SIGMA_MIN: u8 = 32;
pub const SIGMA_MAX: u8 = 126;
/// Number of symbols in Σ.
pub const SIGMA_SIZE: u32 = 95;

/// Whether `b` belongs to the value alphabet Σ.
pub fn in_sigma(b: u8) -> bool {
    (SIGMA_MIN..=SIGMA_MAX).contains(&b)
}

/// Keywords that can never be identifiers.
pub const KEYWORDS: [&str; 7] = ["args", "if", "else", "while", "halt", "head", "tail"];

/// Whether `name` is an argument variable `argN` (canonical positive `N`),
/// which may be read but never assigned.
pub fn is_arg_name(name: &str) -> bool {
    match name.strip_prefix("arg") {
        Some(digits) => {
            !digits.is_empty()
                && !digits.starts_with('0')
                && digits.bytes().all(|b| b.is_ascii_digit())
        }
        None => false,
    }
}

/// Whether `name` matches the identifier lexeme and is not a keyword.
pub fn is_identifier(name: &str) -> bool {
    let mut bytes = name.bytes();
    match bytes.next() {
        Some(b) if b.is_ascii_lowercase() => {}
        _ => return false,
    }
    bytes.all(|b| b.is_ascii_lowercase() || b.is_ascii_digit() || b == b'_')
        && !KEYWORDS.contains(&name)
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Expr {
    Lit(Vec<u8>),
    Var(String),
    Head(Box<Expr>),
    Tail(Box<Expr>),
    Concat(Box<Expr>, Box<Expr>),
}

impl Expr {
    pub fn lit(s: impl AsRef<[u8]>) -> Self {
        Expr::Lit(s.as_ref().to_vec())
    }

    pub fn var(name: impl Into<String>) -> Self {
        Expr::Var(name.into())
    }

    pub fn head(e: Expr) -> Self {
        Expr::Head(Box::new(e))
    }

    pub fn tail(e: Expr) -> Self {
        Expr::Tail(Box::new(e))
    }

    pub fn concat(a: Expr, b: Expr) -> Self {
        Expr::Concat(Box::new(a), Box::new(b))
    }

    /// Operands of a concatenation chain, left to right.
    pub fn concat_parts(&self) -> Vec<&Expr> {
        let mut out = Vec::new();
        fn walk<'a>(e: &'a Expr, out: &mut Vec<&'a Expr>) {
            match e {
                Expr::Concat(a, b) => {
                    walk(a, out);
                    walk(b, out);
                }
                other => out.push(other),
            }
        }
        walk(self, &mut out);
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CondOp {
    Eq,
    Ne,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Cond {
    pub lhs: Expr,
    pub op: CondOp,
    pub rhs: Expr,
}

impl Cond {
    pub fn new(lhs: Expr, op: CondOp, rhs: Expr) -> Self {
        Cond { lhs, op, rhs }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Stmt {
    Assign { target: String, expr: Expr },
    If { cond: Cond, then_body: Vec<Stmt>, else_body: Option<Vec<Stmt>> },
    While { cond: Cond, body: Vec<Stmt> },
    Halt,
}

/// A parsed ℒ program. `source` is the exact text it was parsed from.
#[derive(Debug, Clone)]
pub struct Program {
    pub source: String,
    pub arity: usize,
    pub body: Vec<Stmt>,
}

impl Program {
    /// Structural equality, ignoring the source text.
    pub fn same_structure(&self, other: &Program) -> bool {
        self.arity == other.arity && self.body == other.body
    }

    /// Builds a program from syntax, rendering its canonical source.
    pub fn from_parts(arity: usize, body: Vec<Stmt>) -> Self {
        let source = super::render::render(arity, &body);
        Program { source, arity, body }
    }
}

impl PartialEq for Program {
    fn eq(&self, other: &Self) -> bool {
        self.source == other.source && self.same_structure(other)
    }
}

impl Eq for Program {}
