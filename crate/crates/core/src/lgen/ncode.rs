//! N-code: the pre-digested program form the ℒ-level interpreter runs.
//!
//! ```text
//! ncode  := record* 'E' count ':'
//! record := 'A' path ':' name ',' op* ';'
//!         | 'I' path ':' op* cmp op* ';' record* '}' path ':' [ '[' record* ']' path ':' ]
//!         | 'W' path ':' op* cmp op* ';' record* ')' path ':'
//!         | 'H' path ':'
//! cmp    := '=' | '!'
//! op     := 'v' name ',' | 'l' ('.' char)* ',' | 'h' | 't' | 'c'
//! ```
//!
//! Expressions are postfix. Literal and runtime values are "dotted": every
//! character is preceded by `.`, so a value ends at the first position that
//! is not a `.` and no escaping is ever needed.
//!
//! This module holds the host-side reference generator and the ℒ routine
//! that validates source text and emits the same N-code.

use std::collections::BTreeSet;

use super::{arith, lit, Gen};
use crate::lcore::ast::{Cond, CondOp, Expr, Program, Stmt};

/// `.`-prefixes every character.
pub fn dotted(v: &[u8]) -> String {
    let mut s = String::with_capacity(2 * v.len());
    for &b in v {
        s.push('.');
        s.push(b as char);
    }
    s
}

fn expr_ops(e: &Expr, out: &mut String) {
    match e {
        Expr::Lit(v) => {
            out.push('l');
            out.push_str(&dotted(v));
            out.push(',');
        }
        Expr::Var(n) => {
            out.push('v');
            out.push_str(n);
            out.push(',');
        }
        Expr::Head(a) => {
            expr_ops(a, out);
            out.push('h');
        }
        Expr::Tail(a) => {
            expr_ops(a, out);
            out.push('t');
        }
        Expr::Concat(a, b) => {
            expr_ops(a, out);
            expr_ops(b, out);
            out.push('c');
        }
    }
}

fn cond_ops(c: &Cond, out: &mut String) {
    expr_ops(&c.lhs, out);
    out.push(if c.op == CondOp::Eq { '=' } else { '!' });
    expr_ops(&c.rhs, out);
    out.push(';');
}

fn block(body: &[Stmt], prefix: &str, first: usize, out: &mut String) {
    for (j, s) in body.iter().enumerate() {
        let path = format!("{prefix}{}", first + j);
        match s {
            Stmt::Assign { target, expr } => {
                out.push_str(&format!("A{path}:{target},"));
                expr_ops(expr, out);
                out.push(';');
            }
            Stmt::Halt => out.push_str(&format!("H{path}:")),
            Stmt::If { cond, then_body, else_body } => {
                out.push_str(&format!("I{path}:"));
                cond_ops(cond, out);
                let inner = format!("{path}.");
                block(then_body, &inner, 0, out);
                out.push_str(&format!("}}{path}:"));
                if let Some(e) = else_body {
                    out.push('[');
                    block(e, &inner, then_body.len(), out);
                    out.push_str(&format!("]{path}:"));
                }
            }
            Stmt::While { cond, body } => {
                out.push_str(&format!("W{path}:"));
                cond_ops(cond, out);
                block(body, &format!("{path}."), 0, out);
                out.push_str(&format!("){path}:"));
            }
        }
    }
}

/// Host-side N-code of a parsed program.
pub fn host_ncode(p: &Program) -> String {
    let mut out = String::new();
    block(&p.body, "", 0, &mut out);
    out.push_str(&format!("E{}:", p.body.len()));
    out
}

fn names_expr(e: &Expr, out: &mut BTreeSet<String>) {
    match e {
        Expr::Lit(_) => {}
        Expr::Var(n) => {
            out.insert(n.clone());
        }
        Expr::Head(a) | Expr::Tail(a) => names_expr(a, out),
        Expr::Concat(a, b) => {
            names_expr(a, out);
            names_expr(b, out);
        }
    }
}

fn names_block(body: &[Stmt], out: &mut BTreeSet<String>) {
    for s in body {
        match s {
            Stmt::Assign { target, expr } => {
                out.insert(target.clone());
                names_expr(expr, out);
            }
            Stmt::If { cond, then_body, else_body } => {
                names_expr(&cond.lhs, out);
                names_expr(&cond.rhs, out);
                names_block(then_body, out);
                if let Some(e) = else_body {
                    names_block(e, out);
                }
            }
            Stmt::While { cond, body } => {
                names_expr(&cond.lhs, out);
                names_expr(&cond.rhs, out);
                names_block(body, out);
            }
            Stmt::Halt => {}
        }
    }
}

/// Initial store with every identifier the program mentions, in
/// ascending order, all empty: `name=;name=;...`.
pub fn host_names(p: &Program) -> String {
    let mut set = BTreeSet::new();
    names_block(&p.body, &mut set);
    set.into_iter().map(|n| format!("{n}=;")).collect()
}

const LOWER: &str = "abcdefghijklmnopqrstuvwxyz";
const WORD: &str = "abcdefghijklmnopqrstuvwxyz0123456789_";
const DIGITS: &str = "0123456789";
/// Identifier characters in byte order.
const ORDER: &str = "0123456789_abcdefghijklmnopqrstuvwxyz";

/// `f = "1"` iff the one-character string `ch` occurs in `set`.
fn member(g: &mut Gen, ch: &str, set: &str, f: &str) -> Vec<Stmt> {
    g.code(
        &format!(
            r#"@p = {} . @ch; while head(@p) != @ch {{ @p = tail(@p); }}
            @f = ""; if @p != @ch {{ @f = "1"; }}"#,
            lit(set)
        ),
        &[("ch", ch), ("f", f)],
    )
}

/// One token from `s`: kind in `k`, payload in `w`.
///
/// Kinds: `w` identifier, `A I L W H` for args/if/else/while/halt, `h t`
/// for `head(`/`tail(`, `n` numeral, `s` string (payload dotted), `e` for
/// `==`, `x` for `!=`, `z` end of input, `?` lexical error, and the
/// character itself for `; { } ) . =`.
fn lex(g: &mut Gen, s: &str, k: &str, w: &str) -> Vec<Stmt> {
    let ch = g.fresh("ch");
    let f = g.fresh("f");
    let is_lower = member(g, &ch, LOWER, &f);
    let is_word = member(g, &ch, WORD, &f);
    let is_digit = member(g, &ch, DIGITS, &f);
    let is_digit2 = member(g, &ch, DIGITS, &f);
    let is_punct = member(g, &ch, ";{}).", &f);
    g.splice(
        r#"while head(@s) == " " { @s = tail(@s); }
        @ch = head(@s); @k = "?"; @w = "";
        if @ch == "" { @k = "z"; }
        %lower;
        if @f == "1" {
            @m = "1";
            while @m == "1" {
                @ch = head(@s); %word;
                if @f == "1" { @w = @w . @ch; @s = tail(@s); } else { @m = ""; }
            }
            @k = "w";
            if @w == "args" { @k = "A"; }
            if @w == "if" { @k = "I"; }
            if @w == "else" { @k = "L"; }
            if @w == "while" { @k = "W"; }
            if @w == "halt" { @k = "H"; }
            if @w == "head" { @k = "h"; }
            if @w == "tail" { @k = "t"; }
            if @k == "h" { if head(@s) == "(" { @s = tail(@s); } else { @k = "?"; } }
            if @k == "t" { if head(@s) == "(" { @s = tail(@s); } else { @k = "?"; } }
            @ch = "";
        }
        %digit;
        if @f == "1" {
            @m = "1";
            while @m == "1" {
                @ch = head(@s); %digit2;
                if @f == "1" { @w = @w . @ch; @s = tail(@s); } else { @m = ""; }
            }
            @k = "n";
            if head(@w) == "0" { if tail(@w) != "" { @k = "?"; } }
            @ch = "";
        }
        if @ch == "\"" {
            @s = tail(@s); @k = "s"; @m = "1";
            while @m == "1" {
                @ch = head(@s); @s = tail(@s);
                if @ch == "\"" { @m = ""; }
                else {
                    if @ch == "" { @m = ""; @k = "?"; }
                    if @ch == "\\" {
                        @ch = head(@s); @s = tail(@s);
                        if @ch != "\"" { if @ch != "\\" { @m = ""; @k = "?"; } }
                    }
                    @w = @w . "." . @ch;
                }
            }
            @ch = "";
        }
        %punct;
        if @f == "1" { @k = @ch; @s = tail(@s); }
        if @ch == "=" {
            @s = tail(@s); @k = "=";
            if head(@s) == "=" { @k = "e"; @s = tail(@s); }
        }
        if @ch == "!" {
            @s = tail(@s);
            if head(@s) == "=" { @k = "x"; @s = tail(@s); }
        }"#,
        &[("s", s), ("k", k), ("w", w), ("ch", &ch), ("f", &f)],
        vec![("lower", is_lower), ("word", is_word), ("digit", is_digit), ("digit2", is_digit2), ("punct", is_punct)],
    )
}

/// Inserts `x` into the sorted name store `names` unless present.
fn register(g: &mut Gen, x: &str, names: &str) -> Vec<Stmt> {
    g.code(
        &format!(
            r#"@r = @names; @pre = ""; @m = "1";
            while @m == "1" {{
                if @r == "" {{ @m = ""; @pre = @pre . @x . "=;"; }}
                else {{
                    @y = ""; while head(@r) != "=" {{ @y = @y . head(@r); @r = tail(@r); }}
                    if @y == @x {{ @m = ""; @pre = @names; @r = ""; }}
                    else {{
                        @a = @x; @b = @y; @o = "";
                        while @o == "" {{
                            if @a == "" {{ @o = "<"; }}
                            else {{
                                if @b == "" {{ @o = ">"; }}
                                else {{
                                    if head(@a) != head(@b) {{
                                        @z = {order};
                                        while @o == "" {{
                                            if head(@z) == head(@a) {{ @o = "<"; }}
                                            if head(@z) == head(@b) {{ @o = ">"; }}
                                            @z = tail(@z);
                                        }}
                                    }}
                                    @a = tail(@a); @b = tail(@b);
                                }}
                            }}
                        }}
                        if @o == "<" {{ @m = ""; @pre = @pre . @x . "=;" . @y; }}
                        else {{ @pre = @pre . @y; }}
                        @pre = @pre . "=;"; @r = tail(tail(@r));
                    }}
                }}
            }}
            @names = @pre . @r;"#,
            order = lit(ORDER)
        ),
        &[("x", x), ("names", names)],
    )
}

/// Validates the program text `src` and emits its N-code.
///
/// Sets `ok = "1"` and fills `code` (N-code), `end` (its final `E` record)
/// and `arity` when `src` is a valid program; otherwise `ok = ""`. With
/// `names` given, also collects the sorted empty store of every identifier
/// mentioned.
pub fn parse(g: &mut Gen, src: &str, code: &str, end: &str, arity: &str, ok: &str, names: Option<&str>) -> Vec<Stmt> {
    let k = g.fresh("k");
    let w = g.fresh("w");
    let s = g.fresh("s");
    let idx = g.fresh("idx");
    let lex = lex(g, &s, &k, &w);
    let inc = arith::inc(g, &idx);
    let rn = g.fresh("rn");
    let (mut body, reg_site) = match names {
        Some(n) => {
            let reg = register(g, &rn, n);
            let site = g.splice(r#"if @rn != "" { %reg; @rn = ""; }"#, &[("rn", &rn)], vec![("reg", reg)]);
            (g.code("@names = \"\";", &[("names", n)]), site)
        }
        None => (Vec::new(), Vec::new()),
    };
    body.extend(g.splice(
        r#"@s = @src; @code = ""; @ok = "1"; @st = ""; @q = "0"; @pfx = ""; @idx = "0";
        @fl = ""; @re = ""; @ip = ""; @rn = "";
        while @q != "D" {
            if @ip != "" { %inc; @ip = ""; }
            %reg;
            if @re == "" { %lex; }
            @re = ""; @t = @q; @q = "?";
            if @t == "0" { if @k == "A" { @q = "1"; } }
            if @t == "1" { if @k == "n" { @q = "2"; @arity = @w; } }
            if @t == "2" { if @k == ";" { @q = "S"; } }
            if @t == "=" { if @k == "=" { @q = "X"; @cx = "a"; } }
            if @t == ";" { if @k == ";" { @q = "S"; @ip = "1"; } }
            if @t == "B" { if @k == "{" {
                @code = @code . "["; @st = "E" . @pfx . "/" . @idx . "/" . @st;
                @pfx = @lp . "."; @idx = @ti; @q = "S";
            } }
            if @t == "T" {
                @q = "S";
                if @k == "L" { @q = "B"; } else { @ip = "1"; @re = "1"; }
            }
            if @t == "S" {
                if @k == "w" {
                    @q = "=";
                    if head(@w) == "a" { if head(tail(@w)) == "r" { if head(tail(tail(@w))) == "g" {
                        @r = tail(tail(tail(@w)));
                        if @r != "" { if head(@r) != "0" {
                            @p = "1";
                            while @r != "" {
                                @z = "0123456789" . head(@r); while head(@z) != head(@r) { @z = tail(@z); }
                                if @z == head(@r) { @p = ""; }
                                @r = tail(@r);
                            }
                            if @p == "1" { @q = "?"; }
                        } }
                    } } }
                    @code = @code . "A" . @pfx . @idx . ":" . @w . ","; @rn = @w;
                }
                if @k == "I" { @q = "X"; @cx = "l"; @sk = "I"; }
                if @k == "W" { @q = "X"; @cx = "l"; @sk = "W"; }
                if @q == "X" { @code = @code . @sk . @pfx . @idx . ":"; }
                if @k == "H" { @q = ";"; @code = @code . "H" . @pfx . @idx . ":"; }
                if @k == "z" { if @st == "" { @q = "D"; @end = "E" . @idx . ":"; @code = @code . @end; } }
                if @k == "}" {
                    @b = head(@st);
                    if @b == "I" { @q = "T"; @cl = "}"; }
                    if @b == "E" { @q = "S"; @cl = "]"; @ip = "1"; }
                    if @b == "W" { @q = "S"; @cl = ")"; @ip = "1"; }
                    if @q != "?" {
                        @ti = @idx; @st = tail(@st); @pfx = "";
                        while head(@st) != "/" { @pfx = @pfx . head(@st); @st = tail(@st); }
                        @st = tail(@st); @idx = "";
                        while head(@st) != "/" { @idx = @idx . head(@st); @st = tail(@st); }
                        @st = tail(@st); @lp = @pfx . @idx;
                        @code = @code . @cl . @lp . ":";
                    }
                }
            }
            if @t == "X" {
                @a = "";
                if @k == "s" { @code = @code . "l" . @w . ","; @a = "1"; }
                if @k == "w" { @code = @code . "v" . @w . ","; @a = "1"; @rn = @w; }
                if @a == "1" { @q = "Y"; if @fl != "" { @code = @code . "c"; @fl = ""; } }
                if @k == "h" { @q = "X"; @st = @fl . "h" . @st; @fl = ""; }
                if @k == "t" { @q = "X"; @st = @fl . "t" . @st; @fl = ""; }
            }
            if @t == "Y" {
                @b = head(@st);
                if @b == "c" { @b = head(tail(@st)); }
                if @k == "." { @q = "X"; @fl = "c"; }
                else {
                    if @k == ")" {
                        if @b == "h" { @q = "Y"; }
                        if @b == "t" { @q = "Y"; }
                        if @q == "Y" {
                            if head(@st) == "c" { @code = @code . @b . "c"; @st = tail(tail(@st)); }
                            else { @code = @code . @b; @st = tail(@st); }
                        }
                    }
                    else {
                        if @b != "h" { if @b != "t" {
                            if @cx == "a" { if @k == ";" { @q = "S"; @code = @code . ";"; @ip = "1"; } }
                            if @cx == "r" { if @k == "{" {
                                @q = "S"; @code = @code . ";";
                                @st = @sk . @pfx . "/" . @idx . "/" . @st; @pfx = @pfx . @idx . "."; @idx = "0";
                            } }
                            if @cx == "l" {
                                if @k == "e" { @q = "X"; @code = @code . "="; }
                                if @k == "x" { @q = "X"; @code = @code . "!"; }
                                @cx = "r";
                            }
                        } }
                    }
                }
            }
            if @q == "?" { @q = "D"; @ok = ""; }
        }"#,
        &[
            ("src", src),
            ("code", code),
            ("end", end),
            ("arity", arity),
            ("ok", ok),
            ("k", &k),
            ("w", &w),
            ("s", &s),
            ("idx", &idx),
            ("rn", &rn),
        ],
        vec![("inc", inc), ("reg", reg_site), ("lex", lex)],
    ));
    body
}
