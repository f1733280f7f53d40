//! Abstract syntax of ℒ* statements. There is no negation, implication or
//! unbounded universal node.

use std::collections::BTreeSet;
use std::fmt;

use crate::naming::ObjectName;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Term {
    Name(ObjectName),
    Var(String),
    /// Human-readable relation name resolved through the alias table.
    /// Only valid as the relation of a `Rel`.
    Alias(String),
}

impl Term {
    pub fn num(n: u64) -> Self {
        Term::Name(ObjectName::numeral(n))
    }

    pub fn var(v: &str) -> Self {
        Term::Var(v.to_string())
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Name(n) => write!(f, "{n}"),
            Term::Var(v) | Term::Alias(v) => f.write_str(v),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum AExpr {
    Term(Term),
    Add(Box<AExpr>, Box<AExpr>),
    Mul(Box<AExpr>, Box<AExpr>),
}

impl AExpr {
    pub fn add(a: AExpr, b: AExpr) -> Self {
        AExpr::Add(Box::new(a), Box::new(b))
    }

    pub fn mul(a: AExpr, b: AExpr) -> Self {
        AExpr::Mul(Box::new(a), Box::new(b))
    }

    pub fn terms<'a>(&'a self, out: &mut Vec<&'a Term>) {
        match self {
            AExpr::Term(t) => out.push(t),
            AExpr::Add(a, b) | AExpr::Mul(a, b) => {
                a.terms(out);
                b.terms(out);
            }
        }
    }

    fn fmt_prec(&self, f: &mut fmt::Formatter<'_>, prec: u8) -> fmt::Result {
        match self {
            AExpr::Term(t) => write!(f, "{t}"),
            AExpr::Add(a, b) => {
                if prec > 0 {
                    f.write_str("(")?;
                }
                a.fmt_prec(f, 0)?;
                f.write_str(" + ")?;
                b.fmt_prec(f, 1)?;
                if prec > 0 {
                    f.write_str(")")?;
                }
                Ok(())
            }
            AExpr::Mul(a, b) => {
                if prec > 1 {
                    f.write_str("(")?;
                }
                a.fmt_prec(f, 1)?;
                f.write_str(" * ")?;
                b.fmt_prec(f, 2)?;
                if prec > 1 {
                    f.write_str(")")?;
                }
                Ok(())
            }
        }
    }
}

impl fmt::Display for AExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_prec(f, 0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CmpOp {
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
}

impl CmpOp {
    pub fn symbol(self) -> &'static str {
        match self {
            CmpOp::Eq => "=",
            CmpOp::Ne => "!=",
            CmpOp::Lt => "<",
            CmpOp::Le => "<=",
            CmpOp::Gt => ">",
            CmpOp::Ge => ">=",
        }
    }

    pub fn holds<T: Ord>(self, a: &T, b: &T) -> bool {
        match self {
            CmpOp::Eq => a == b,
            CmpOp::Ne => a != b,
            CmpOp::Lt => a < b,
            CmpOp::Le => a <= b,
            CmpOp::Gt => a > b,
            CmpOp::Ge => a >= b,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Statement {
    Eq(Term, Term),
    Neq(Term, Term),
    Rel(Term, Vec<Term>),
    Arith(AExpr, CmpOp, AExpr),
    And(Box<Statement>, Box<Statement>),
    Or(Box<Statement>, Box<Statement>),
    Exists(String, Box<Statement>),
    BoundedAll(String, Term, Box<Statement>),
}

impl Statement {
    pub fn and(a: Statement, b: Statement) -> Self {
        Statement::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Statement, b: Statement) -> Self {
        Statement::Or(Box::new(a), Box::new(b))
    }

    pub fn exists(v: &str, s: Statement) -> Self {
        Statement::Exists(v.to_string(), Box::new(s))
    }

    pub fn forall_le(v: &str, bound: Term, s: Statement) -> Self {
        Statement::BoundedAll(v.to_string(), bound, Box::new(s))
    }

    /// Variables occurring free, in order of first occurrence.
    pub fn free_vars(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<String>, out: &mut Vec<String>) {
        let mut note = |t: &Term, bound: &Vec<String>| {
            if let Term::Var(v) = t {
                if !bound.contains(v) && !out.contains(v) {
                    out.push(v.clone());
                }
            }
        };
        match self {
            Statement::Eq(a, b) | Statement::Neq(a, b) => {
                note(a, bound);
                note(b, bound);
            }
            Statement::Rel(t0, args) => {
                note(t0, bound);
                for a in args {
                    note(a, bound);
                }
            }
            Statement::Arith(a, _, b) => {
                let mut ts = Vec::new();
                a.terms(&mut ts);
                b.terms(&mut ts);
                for t in ts {
                    note(t, bound);
                }
            }
            Statement::And(a, b) | Statement::Or(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            Statement::Exists(v, s) => {
                bound.push(v.clone());
                s.collect_free(bound, out);
                bound.pop();
            }
            Statement::BoundedAll(v, t, s) => {
                note(t, bound);
                bound.push(v.clone());
                s.collect_free(bound, out);
                bound.pop();
            }
        }
    }

    /// Aliases named anywhere in the statement.
    pub fn aliases(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.visit(&mut |s| {
            if let Statement::Rel(Term::Alias(a), _) = s {
                out.insert(a.clone());
            }
        });
        out
    }

    pub fn visit(&self, f: &mut impl FnMut(&Statement)) {
        f(self);
        match self {
            Statement::And(a, b) | Statement::Or(a, b) => {
                a.visit(f);
                b.visit(f);
            }
            Statement::Exists(_, s) | Statement::BoundedAll(_, _, s) => s.visit(f),
            _ => {}
        }
    }

    fn fmt_prec(&self, f: &mut fmt::Formatter<'_>, prec: u8) -> fmt::Result {
        // 0: anything, 1: operand of `or`, 2: operand of `and`
        let wrap = match self {
            Statement::Or(..) => prec > 0,
            Statement::And(..) => prec > 1,
            Statement::Exists(..) | Statement::BoundedAll(..) => prec > 0,
            _ => false,
        };
        if wrap {
            f.write_str("(")?;
        }
        match self {
            Statement::Eq(a, b) => write!(f, "{a} = {b}")?,
            Statement::Neq(a, b) => write!(f, "{a} != {b}")?,
            Statement::Rel(t0, args) => {
                write!(f, "{t0}(")?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{a}")?;
                }
                f.write_str(")")?;
            }
            Statement::Arith(a, op, b) => {
                // Bare terms compared with `=`/`!=` would read back as Eq/Neq.
                let bare = matches!((a, b), (AExpr::Term(_), AExpr::Term(_)));
                if bare && matches!(op, CmpOp::Eq | CmpOp::Ne) {
                    write!(f, "{a} + 0 {} {b}", op.symbol())?;
                } else {
                    write!(f, "{a} {} {b}", op.symbol())?;
                }
            }
            Statement::Or(a, b) => {
                a.fmt_prec(f, 1)?;
                f.write_str(" or ")?;
                b.fmt_prec(f, 1)?;
            }
            Statement::And(a, b) => {
                a.fmt_prec(f, 2)?;
                f.write_str(" and ")?;
                b.fmt_prec(f, 2)?;
            }
            Statement::Exists(v, s) => {
                write!(f, "exists {v} : ")?;
                s.fmt_prec(f, 0)?;
            }
            Statement::BoundedAll(v, t, s) => {
                write!(f, "forall {v} <= {t} : ")?;
                s.fmt_prec(f, 0)?;
            }
        }
        if wrap {
            f.write_str(")")?;
        }
        Ok(())
    }
}

impl fmt::Display for Statement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_prec(f, 0)
    }
}
