//! Unranking in ℒ: the i-th relation program in shortlex order.
//!
//! Candidates of each length are walked depth first in symbol order. A
//! small automaton for the header `' '* args ' '+ <numeral> ' '* ;` prunes
//! prefixes that cannot start a program; complete candidates are handed to
//! the ℒ-level parser, which has the final word on validity. Cost grows
//! quickly with the index; it is meant for small indices.

use super::{arith, lit, ncode, Gen};
use crate::lcore::Stmt;

/// Header automaton: state letter to the symbols it accepts, in order.
const VIABLE: &[(char, &str)] = &[
    ('a', " a"),
    ('b', "r"),
    ('c', "g"),
    ('d', "s"),
    ('e', " "),
    ('f', " 123456789"),
    ('g', " 0123456789;"),
    ('h', " ;"),
];

fn all_symbols() -> String {
    (32u8..127).map(|b| b as char).collect()
}

/// `nq` = the state after reading `ch` in state `q`.
fn transition(g: &mut Gen, q: &str, ch: &str, nq: &str) -> Vec<Stmt> {
    g.code(
        r#"@nq = "i";
        if @q == "a" { if @ch == "a" { @nq = "b"; } else { @nq = "a"; } }
        if @q == "b" { @nq = "c"; }
        if @q == "c" { @nq = "d"; }
        if @q == "d" { @nq = "e"; }
        if @q == "e" { @nq = "f"; }
        if @q == "f" { if @ch == " " { @nq = "f"; } else { @nq = "g"; } }
        if @q == "g" { if @ch == " " { @nq = "h"; } else { if @ch == ";" { @nq = "i"; } else { @nq = "g"; } } }
        if @q == "h" { if @ch == " " { @nq = "h"; } }"#,
        &[("q", q), ("ch", ch), ("nq", nq)],
    )
}

/// `v` = the symbols accepted in state `q`.
fn viable(g: &mut Gen, q: &str, v: &str) -> Vec<Stmt> {
    let cases = VIABLE
        .iter()
        .map(|(s, chars)| (s.to_string(), g.code(&format!("@v = {};", lit(chars)), &[("v", v)])))
        .collect();
    super::chain(q, cases, g.code(&format!("@v = {};", lit(&all_symbols())), &[("v", v)]))
}

/// `t` = text of relation program number `i` (a canonical numeral); `code`,
/// `end` and `arity` receive the parser's output for it.
pub fn unrank(g: &mut Gen, i: &str, t: &str, code: &str, end: &str, arity: &str) -> Vec<Stmt> {
    let q = g.fresh("q");
    let ch = g.fresh("ch");
    let nq = g.fresh("nq");
    let v = g.fresh("v");
    let cnt = g.fresh("cnt");
    let ok = g.fresh("ok");
    let cand = g.fresh("cand");
    let trans = transition(g, &q, &ch, &nq);
    let trans2 = transition(g, &q, &ch, &nq);
    let first = viable(g, &q, &v);
    let next = viable(g, &q, &v);
    let bump = arith::inc(g, &cnt);
    let check = ncode::parse(g, &cand, code, end, arity, &ok, None);
    // rp: prefix reversed; qs: states, innermost first; d and ln: depth and
    // length in unary.
    g.splice(
        r#"@cnt = ""; @ln = ""; @t = "";
        while @t == "" {
            @ln = @ln . "1";
            @rp = ""; @qs = "a"; @d = ""; @dir = "down";
            while @dir != "done" {
                if @dir == "down" {
                    if @d == @ln {
                        if head(@qs) == "i" {
                            @cand = ""; @x = @rp;
                            while @x != "" { @cand = head(@x) . @cand; @x = tail(@x); }
                            %check;
                            if @ok == "1" {
                                if @cnt == "" { @cnt = "0"; } else { %bump; }
                                if @cnt == @i { @t = @cand; @dir = "done"; }
                            }
                        }
                        if @dir == "down" { @dir = "up"; }
                    } else {
                        @q = head(@qs); %first;
                        @ch = head(@v);
                        %trans;
                        @rp = @ch . @rp; @qs = @nq . @qs; @d = @d . "1";
                    }
                } else {
                    if @d == "" { @dir = "done"; }
                    else {
                        @ch = head(@rp); @rp = tail(@rp); @qs = tail(@qs); @d = tail(@d);
                        @q = head(@qs); %next;
                        while head(@v) != @ch { @v = tail(@v); }
                        @v = tail(@v);
                        if @v != "" {
                            @ch = head(@v);
                            %trans2;
                            @rp = @ch . @rp; @qs = @nq . @qs; @d = @d . "1";
                            @dir = "down";
                        }
                    }
                }
            }
        }"#,
        &[("i", i), ("t", t), ("q", &q), ("ch", &ch), ("nq", &nq), ("v", &v), ("cnt", &cnt), ("ok", &ok), ("cand", &cand)],
        vec![("first", first), ("trans", trans), ("trans2", trans2), ("next", next), ("bump", bump), ("check", check)],
    )
}
