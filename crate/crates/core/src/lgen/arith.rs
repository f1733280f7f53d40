//! Decimal arithmetic on canonical numerals, as ℒ routines.
//!
//! Numbers are canonical decimal strings ("0", "17"; no leading zeros).
//! Digit sums use a ruler string: start at the first digit's offset, move
//! right by the second, and read the digit under the cursor.

use super::{chain, Gen};
use crate::lcore::Stmt;

const DIGITS: [&str; 10] = ["0", "1", "2", "3", "4", "5", "6", "7", "8", "9"];

/// ℒ text for `tail` applied `k` times to `var`.
pub fn tails(var: &str, k: usize) -> String {
    let mut s = var.to_string();
    for _ in 0..k {
        s = format!("tail({s})");
    }
    s
}

/// Moves `p` right by the digit in `d` (empty counts as 0).
fn advance_by_digit(g: &mut Gen, d: &str, p: &str) -> Vec<Stmt> {
    let cases = (1..10)
        .map(|k| (DIGITS[k].to_string(), g.code(&format!("@p = {};", tails("@p", k)), &[("p", p)])))
        .collect();
    chain(d, cases, vec![])
}

/// Sets `f` to "1" if `c` is a decimal digit, else "".
fn digit_flag(g: &mut Gen, c: &str, f: &str) -> Vec<Stmt> {
    let cases = DIGITS.iter().map(|d| (d.to_string(), g.code("@f = \"1\";", &[("f", f)]))).collect();
    let mut out = g.code("@f = \"\";", &[("f", f)]);
    out.extend(chain(c, cases, vec![]));
    out
}

/// `f = "1"` iff `x` is a canonical numeral, else `f = ""`.
pub fn is_numeral(g: &mut Gen, x: &str, f: &str) -> Vec<Stmt> {
    let c = g.fresh("c");
    let s = g.fresh("s");
    let ok = g.fresh("ok");
    let check = digit_flag(g, &c, &ok);
    let b = [("x", x), ("f", f), ("c", c.as_str()), ("s", s.as_str()), ("ok", ok.as_str())];
    g.splice(
        r#"@f = ""; @s = @x;
        if @s != "" {
            if head(@s) == "0" { if tail(@s) == "" { @f = "1"; } }
            else {
                @f = "1";
                while @s != "" {
                    @c = head(@s); @s = tail(@s);
                    %check;
                    if @ok == "" { @f = ""; @s = ""; }
                }
            }
        }"#,
        &b,
        vec![("check", check)],
    )
}

/// `f = "1"` iff `x` is an R-name `R<numeral>`.
pub fn is_rname(g: &mut Gen, x: &str, f: &str) -> Vec<Stmt> {
    let rest = g.fresh("rest");
    let num = is_numeral(g, &rest, f);
    g.splice(
        r#"@f = "";
        if head(@x) == "R" { @rest = tail(@x); %num; }"#,
        &[("x", x), ("f", f), ("rest", &rest)],
        vec![("num", num)],
    )
}

/// `n = n + 1` in place.
pub fn inc(g: &mut Gen, n: &str) -> Vec<Stmt> {
    let ln = g.fresh("ln");
    let mut cases = vec![(String::new(), g.code("@ln = \"1\";", &[("ln", &ln)]))];
    for k in 0..9 {
        cases.push((DIGITS[k].to_string(), g.code(&format!("@ln = \"{}\";", k + 1), &[("ln", &ln)])));
    }
    let succ = chain(&ln, cases, vec![]);
    g.splice(
        r#"@pre = ""; @ln = ""; @run = ""; @zr = ""; @s = @n;
        while @s != "" {
            @c = head(@s); @s = tail(@s);
            if @c == "9" { @run = @run . "9"; @zr = @zr . "0"; }
            else { @pre = @pre . @ln . @run; @ln = @c; @run = ""; @zr = ""; }
        }
        %succ;
        @n = @pre . @ln . @zr;"#,
        &[("n", n), ("ln", &ln)],
        vec![("succ", succ)],
    )
}

/// `n = n - 1` in place; `n` must be a positive numeral.
pub fn dec(g: &mut Gen, n: &str) -> Vec<Stmt> {
    let ln = g.fresh("ln");
    let cases = (1..10)
        .map(|k| (DIGITS[k].to_string(), g.code(&format!("@ln = \"{}\";", k - 1), &[("ln", &ln)])))
        .collect();
    let pred = chain(&ln, cases, vec![]);
    g.splice(
        r#"@pre = ""; @ln = ""; @run = ""; @nn = ""; @s = @n;
        while @s != "" {
            @c = head(@s); @s = tail(@s);
            if @c == "0" { @run = @run . "0"; @nn = @nn . "9"; }
            else { @pre = @pre . @ln . @run; @ln = @c; @run = ""; @nn = ""; }
        }
        %pred;
        @n = @pre . @ln . @nn;
        if head(@n) == "0" { if tail(@n) != "" { @n = tail(@n); } }"#,
        &[("n", n), ("ln", &ln)],
        vec![("pred", pred)],
    )
}

/// `c = a + b`.
pub fn add(g: &mut Gen, a: &str, b: &str, c: &str) -> Vec<Stmt> {
    let d = g.fresh("d");
    let e = g.fresh("e");
    let p = g.fresh("p");
    let by_d = advance_by_digit(g, &d, &p);
    let by_e = advance_by_digit(g, &e, &p);
    let b = [("a", a), ("b", b), ("c", c), ("d", d.as_str()), ("e", e.as_str()), ("p", p.as_str())];
    let carry = tails("@p", 10);
    g.splice(
        &format!(
            r#"@x = ""; @s = @a; while @s != "" {{ @x = head(@s) . @x; @s = tail(@s); }}
            @y = ""; @s = @b; while @s != "" {{ @y = head(@s) . @y; @s = tail(@s); }}
            @r = ""; @k = "";
            while @x . @y != "" {{
                @d = head(@x); @e = head(@y); @x = tail(@x); @y = tail(@y);
                @p = "01234567890123456789";
                %byd;
                if @k != "" {{ @p = tail(@p); }}
                %bye;
                @r = head(@p) . @r;
                if {carry} == "" {{ @k = "1"; }} else {{ @k = ""; }}
            }}
            if @k != "" {{ @r = "1" . @r; }}
            @c = @r;"#
        ),
        &b,
        vec![("byd", by_d), ("bye", by_e)],
    )
}

/// `r` = "<", "=" or ">" comparing numerals `a` and `b`.
pub fn cmp(g: &mut Gen, a: &str, b: &str, r: &str) -> Vec<Stmt> {
    g.code(
        r#"@l = "="; @dd = "="; @x = @a; @y = @b;
        while @x . @y != "" {
            if @x == "" { @l = "<"; @y = ""; }
            else {
                if @y == "" { @l = ">"; @x = ""; }
                else {
                    if @dd == "=" {
                        if head(@x) != head(@y) {
                            @o = "0123456789";
                            while @dd == "=" {
                                if head(@o) == head(@x) { @dd = "<"; }
                                else { if head(@o) == head(@y) { @dd = ">"; } }
                                @o = tail(@o);
                            }
                        }
                    }
                    @x = tail(@x); @y = tail(@y);
                }
            }
        }
        @r = @dd; if @l != "=" { @r = @l; }"#,
        &[("a", a), ("b", b), ("r", r)],
    )
}

/// `c = a * b`.
pub fn mul(g: &mut Gen, a: &str, b: &str, c: &str) -> Vec<Stmt> {
    let acc = g.fresh("acc");
    let step = add(g, &acc, a, &acc);
    g.splice(
        r#"@acc = "0"; @s = @b;
        while @s != "" {
            @d = head(@s); @s = tail(@s);
            if @acc != "0" { @acc = @acc . "0"; }
            @o = "0123456789";
            while head(@o) != @d { %step; @o = tail(@o); }
        }
        @c = @acc;"#,
        &[("a", a), ("b", b), ("c", c), ("acc", &acc)],
        vec![("step", step)],
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lcore::{parse_program, Compiled, MachineState};
    use crate::lgen::finish;
    use std::sync::Arc;

    /// Runs `body` (reading arg1..argN) and returns the final value of `out`.
    fn eval(body: Vec<Stmt>, arity: usize, inputs: &[&str]) -> String {
        let p = parse_program(&crate::lcore::render(arity, &body)).unwrap();
        let mut m = MachineState::new(Arc::new(Compiled::new(p)), inputs).unwrap();
        assert!(m.run_for(1_000_000), "did not finish");
        String::from_utf8(m.value("out").to_vec()).unwrap()
    }

    #[test]
    fn numeral_flags() {
        for (x, want) in [("0", "1"), ("7", "1"), ("120", "1"), ("", ""), ("007", ""), ("1a", ""), ("R1", "")] {
            let mut g = Gen::new();
            assert_eq!(eval(is_numeral(&mut g, "arg1", "out"), 1, &[x]), want, "{x}");
        }
        for (x, want) in [("R0", "1"), ("R12", "1"), ("R", ""), ("R01", ""), ("5", "")] {
            let mut g = Gen::new();
            assert_eq!(eval(is_rname(&mut g, "arg1", "out"), 1, &[x]), want, "{x}");
        }
    }

    #[test]
    fn inc_dec_match_native() {
        for n in (0u64..1200).chain([9999, 10_000, 99_999_999]) {
            let mut g = Gen::new();
            let mut body = g.code("out = arg1;", &[]);
            body.extend(inc(&mut g, "out"));
            assert_eq!(eval(body, 1, &[&n.to_string()]), (n + 1).to_string());
            if n > 0 {
                let mut g = Gen::new();
                let mut body = g.code("out = arg1;", &[]);
                body.extend(dec(&mut g, "out"));
                assert_eq!(eval(body, 1, &[&n.to_string()]), (n - 1).to_string());
            }
        }
    }

    #[test]
    fn add_cmp_mul_match_native() {
        let mut g = Gen::new();
        let add_body = add(&mut g, "arg1", "arg2", "out");
        let cmp_body = cmp(&mut g, "arg1", "arg2", "out");
        let mul_body = mul(&mut g, "arg1", "arg2", "out");
        let samples: Vec<u64> = (0..40).chain([99, 100, 999, 1000, 12345, 987_654_321]).collect();
        for &a in &samples {
            for &b in &samples {
                let (sa, sb) = (a.to_string(), b.to_string());
                assert_eq!(eval(add_body.clone(), 2, &[&sa, &sb]), (a + b).to_string());
                let want = match a.cmp(&b) {
                    std::cmp::Ordering::Less => "<",
                    std::cmp::Ordering::Equal => "=",
                    std::cmp::Ordering::Greater => ">",
                };
                assert_eq!(eval(cmp_body.clone(), 2, &[&sa, &sb]), want);
                if a < 1000 && b < 1000 {
                    assert_eq!(eval(mul_body.clone(), 2, &[&sa, &sb]), (a * b).to_string());
                }
            }
        }
    }

    #[test]
    fn finished_routines_still_work() {
        let mut g = Gen::new();
        let body = add(&mut g, "arg1", "arg2", "out");
        let src = finish(2, &body);
        assert!(parse_program(&src).is_ok());
    }
}
