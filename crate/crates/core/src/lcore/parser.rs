//! Recursive-descent parser for ℒ.
//!
//! ```text
//! program := "args" nat ";" stmt*
//! stmt    := ident "=" expr ";"
//!          | "if" cond "{" stmt* "}" ["else" "{" stmt* "}"]
//!          | "while" cond "{" stmt* "}"
//!          | "halt" ";"
//! expr    := atom ("." atom)*
//! atom    := strlit | ident | "head(" expr ")" | "tail(" expr ")"
//! cond    := expr ("==" | "!=") expr
//! ```

use super::ast::{is_arg_name, Cond, CondOp, Expr, Program, Stmt};
use super::lexer::{next_token, LexError, Lexeme, Tok};
use super::ParseError;

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    peeked: Option<Option<Lexeme>>,
}

impl<'a> Parser<'a> {
    fn peek(&mut self) -> Result<Option<&Lexeme>, ParseError> {
        if self.peeked.is_none() {
            let lx = next_token(self.src, self.pos).map_err(lex_error)?;
            self.peeked = Some(lx);
        }
        Ok(self.peeked.as_ref().unwrap().as_ref())
    }

    fn bump(&mut self) -> Result<Option<Lexeme>, ParseError> {
        self.peek()?;
        let lx = self.peeked.take().unwrap();
        if let Some(l) = &lx {
            self.pos = l.end;
        }
        Ok(lx)
    }

    fn error_at(&self, pos: usize, message: impl Into<String>) -> ParseError {
        ParseError::Syntax { pos, message: message.into() }
    }

    fn unexpected(&mut self, wanted: &str) -> ParseError {
        match self.peek() {
            Ok(Some(l)) => {
                let (pos, found) = (l.start, l.tok.describe());
                self.error_at(pos, format!("expected {wanted}, found {found}"))
            }
            Ok(None) => self.error_at(self.src.len(), format!("expected {wanted}, found end of input")),
            Err(e) => e,
        }
    }

    fn expect(&mut self, tok: Tok, wanted: &str) -> Result<Lexeme, ParseError> {
        match self.peek()? {
            Some(l) if l.tok == tok => Ok(self.bump()?.unwrap()),
            _ => Err(self.unexpected(wanted)),
        }
    }

    fn program(&mut self) -> Result<(usize, Vec<Stmt>), ParseError> {
        match next_token(self.src, 0) {
            Ok(Some(Lexeme { tok: Tok::Args, .. })) => {}
            _ => return Err(ParseError::MissingSignature),
        }
        self.bump()?;
        let arity = match self.bump()? {
            Some(Lexeme { tok: Tok::Nat(digits), start, .. }) => digits
                .parse::<usize>()
                .map_err(|_| self.error_at(start, "arity out of range"))?,
            Some(l) => return Err(self.error_at(l.start, format!("expected arity, found {}", l.tok.describe()))),
            None => return Err(self.error_at(self.src.len(), "expected arity, found end of input")),
        };
        self.expect(Tok::Semi, "`;`")?;
        let body = self.block_items()?;
        if self.peek()?.is_some() {
            return Err(self.unexpected("statement or end of input"));
        }
        Ok((arity, body))
    }

    /// Statements up to (not including) `}` or end of input.
    fn block_items(&mut self) -> Result<Vec<Stmt>, ParseError> {
        let mut out = Vec::new();
        loop {
            match self.peek()?.map(|l| l.tok.clone()) {
                Some(Tok::Ident(_) | Tok::If | Tok::While | Tok::Halt) => out.push(self.stmt()?),
                _ => return Ok(out),
            }
        }
    }

    fn block(&mut self) -> Result<Vec<Stmt>, ParseError> {
        self.expect(Tok::LBrace, "`{`")?;
        let body = self.block_items()?;
        self.expect(Tok::RBrace, "`}` or statement")?;
        Ok(body)
    }

    fn stmt(&mut self) -> Result<Stmt, ParseError> {
        let lx = self.bump()?.expect("peeked statement start");
        match lx.tok {
            Tok::Ident(target) => {
                if is_arg_name(&target) {
                    return Err(self.error_at(lx.start, format!("`{target}` is not assignable")));
                }
                self.expect(Tok::Assign, "`=`")?;
                let expr = self.expr()?;
                self.expect(Tok::Semi, "`;`")?;
                Ok(Stmt::Assign { target, expr })
            }
            Tok::Halt => {
                self.expect(Tok::Semi, "`;`")?;
                Ok(Stmt::Halt)
            }
            Tok::If => {
                let cond = self.cond()?;
                let then_body = self.block()?;
                let else_body = match self.peek()? {
                    Some(Lexeme { tok: Tok::Else, .. }) => {
                        self.bump()?;
                        Some(self.block()?)
                    }
                    _ => None,
                };
                Ok(Stmt::If { cond, then_body, else_body })
            }
            Tok::While => {
                let cond = self.cond()?;
                let body = self.block()?;
                Ok(Stmt::While { cond, body })
            }
            _ => unreachable!("block_items only dispatches statement starts"),
        }
    }

    fn cond(&mut self) -> Result<Cond, ParseError> {
        let lhs = self.expr()?;
        let op = match self.peek()?.map(|l| l.tok.clone()) {
            Some(Tok::EqEq) => CondOp::Eq,
            Some(Tok::Neq) => CondOp::Ne,
            _ => return Err(self.unexpected("`==` or `!=`")),
        };
        self.bump()?;
        let rhs = self.expr()?;
        Ok(Cond { lhs, op, rhs })
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut acc = self.atom()?;
        while let Some(Lexeme { tok: Tok::Dot, .. }) = self.peek()? {
            self.bump()?;
            let rhs = self.atom()?;
            acc = Expr::concat(acc, rhs);
        }
        Ok(acc)
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        let tok = self.peek()?.map(|l| l.tok.clone());
        match tok {
            Some(Tok::Str(v)) => {
                self.bump()?;
                Ok(Expr::Lit(v))
            }
            Some(Tok::Ident(name)) => {
                self.bump()?;
                Ok(Expr::Var(name))
            }
            Some(Tok::HeadOpen) | Some(Tok::TailOpen) => {
                self.bump()?;
                let inner = self.expr()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(if tok == Some(Tok::HeadOpen) { Expr::head(inner) } else { Expr::tail(inner) })
            }
            _ => Err(self.unexpected("expression")),
        }
    }
}

fn lex_error(e: LexError) -> ParseError {
    ParseError::Syntax { pos: e.pos, message: e.to_string() }
}

/// Parses ℒ source text.
pub fn parse_program(source: &str) -> Result<Program, ParseError> {
    let mut p = Parser { src: source.as_bytes(), pos: 0, peeked: None };
    let (arity, body) = p.program()?;
    Ok(Program { source: source.to_string(), arity, body })
}
