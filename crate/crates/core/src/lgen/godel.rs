//! Gödel decoding in ℒ: decimal numeral to text, bijective base 95.
//!
//! Each output symbol costs two passes over the decimal digits: division by
//! 5 (remainder kept as a pair of cursors into "02468"/"13579") and by 19
//! (remainder kept as a letter, one row of quotient/next-state pairs per
//! remainder).

use super::{arith, chain, lit, Gen};
use crate::lcore::Stmt;

const STATES: &[u8] = b"abcdefghijklmnopqrs";

/// Symbols by digit value mod 95: value 0 stands for digit 95.
fn ruler() -> String {
    let mut s = String::from("~");
    s.extend((32u8..126).map(|b| b as char));
    s
}

fn div5(g: &mut Gen, m: &str, e: &str) -> Vec<Stmt> {
    let d = g.fresh("d");
    let q = g.fresh("q");
    let o = g.fresh("o");
    let cases = (0..10)
        .map(|k| {
            let pick = if k < 5 { e } else { o.as_str() };
            let r = k % 5;
            let body = format!("@q = @q . head({pick}); @e = \"{}\"; @o = \"{}\";", &"02468"[r..], &"13579"[r..]);
            (k.to_string(), g.code(&body, &[("q", &q), ("e", e), ("o", &o)]))
        })
        .collect();
    let step = chain(&d, cases, vec![]);
    g.splice(
        r#"@q = ""; @e = "02468"; @o = "13579";
        while @m != "" { @d = head(@m); @m = tail(@m); %step; }
        if head(@q) == "0" { @q = tail(@q); }
        if @q == "" { @q = "0"; }
        @m = @q;"#,
        &[("m", m), ("e", e), ("d", &d), ("q", &q), ("o", &o)],
        vec![("step", step)],
    )
}

fn div19(g: &mut Gen, m: &str, r: &str) -> Vec<Stmt> {
    let d = g.fresh("d");
    let q = g.fresh("q");
    let row = g.fresh("row");
    let rows = (0..19)
        .map(|s| {
            let mut text = String::new();
            for k in 0..10 {
                let v = 10 * s + k;
                text.push(char::from(b'0' + (v / 19) as u8));
                text.push(STATES[v % 19] as char);
            }
            let body = format!("@row = \"{text}\";");
            ((STATES[s] as char).to_string(), g.code(&body, &[("row", &row)]))
        })
        .collect();
    let pick_row = chain(r, rows, vec![]);
    // Walk two cells along the row per unit of the digit, then read.
    let mut step = Vec::new();
    for k in (0..9).rev() {
        let t = format!("if @d != \"{k}\" {{ @row = tail(tail(@row)); %inner; }}");
        step = g.splice(&t, &[("d", &d), ("row", &row)], vec![("inner", step)]);
    }
    step.extend(g.code("@q = @q . head(@row); @r = head(tail(@row));", &[("q", &q), ("r", r), ("row", &row)]));
    g.splice(
        r#"@q = ""; @r = "a";
        while @m != "" { @d = head(@m); @m = tail(@m); %row; %step; }
        while head(@q) == "0" { @q = tail(@q); }
        if @q == "" { @q = "0"; }
        @m = @q;"#,
        &[("m", m), ("r", r), ("d", &d), ("q", &q)],
        vec![("row", pick_row), ("step", step)],
    )
}

/// `t` = the text whose Gödel number is the canonical numeral `n`.
pub fn decode(g: &mut Gen, n: &str, t: &str) -> Vec<Stmt> {
    let m = g.fresh("m");
    let e = g.fresh("e");
    let r = g.fresh("r");
    let p5 = div5(g, &m, &e);
    let p19 = div19(g, &m, &r);
    let fix = arith::dec(g, &m);
    let ruler = lit(&ruler());
    let states = lit(std::str::from_utf8(STATES).unwrap());
    let five = arith::tails("@p", 5);
    g.splice(
        &format!(
            r#"@m = @n; @t = "";
            while @m != "0" {{
                %p5; %p19;
                @p = {ruler}; @z = {states};
                while head(@z) != @r {{ @z = tail(@z); @p = {five}; }}
                @z = "02468";
                while @z != @e {{ @z = tail(@z); @p = tail(@p); }}
                if @r == "a" {{ if @e == "02468" {{ %fix; }} }}
                @t = head(@p) . @t;
            }}"#
        ),
        &[("n", n), ("t", t), ("m", &m), ("e", &e), ("r", &r)],
        vec![("p5", p5), ("p19", p19), ("fix", fix)],
    )
}
