//! Generators for the shipped `stdlib/*.l` sources.

use crate::lcore::Stmt;
use crate::lgen::interp::Machine;
use crate::lgen::{arith, finish, godel, ncode, unrank, Gen};

fn require_numeral(g: &mut Gen, x: &str) -> Vec<Stmt> {
    let f = g.fresh("f");
    let check = arith::is_numeral(g, x, &f);
    g.splice(r#"%check; if @f != "1" { while "" == "" {} }"#, &[("f", &f)], vec![("check", check)])
}

pub fn number_source() -> String {
    let mut g = Gen::new();
    finish(1, &require_numeral(&mut g, "arg1"))
}

pub fn add_source() -> String {
    let mut g = Gen::new();
    let mut body = Vec::new();
    for x in ["arg1", "arg2", "arg3"] {
        body.extend(require_numeral(&mut g, x));
    }
    let sum = arith::add(&mut g, "arg1", "arg2", "s");
    body.extend(g.splice(r#"%sum; if s != arg3 { while "" == "" {} }"#, &[], vec![("sum", sum)]));
    finish(3, &body)
}

pub fn dim_source() -> String {
    let mut g = Gen::new();
    let mut body = require_numeral(&mut g, "arg2");
    let num = arith::is_numeral(&mut g, "arg1", "f");
    let rel = arith::is_rname(&mut g, "arg1", "f");
    let un = unrank::unrank(&mut g, "i", "t", "n", "e", "ar");
    body.extend(g.splice(
        r#"%num;
        if f == "1" { if arg2 != "0" { while "" == "" {} } }
        else {
            %rel;
            if f != "1" { while "" == "" {} }
            i = tail(arg1);
            %un;
            if ar != arg2 { while "" == "" {} }
        }"#,
        &[],
        vec![("num", num), ("rel", rel), ("un", un)],
    ));
    finish(2, &body)
}

/// Replays the decoded program once, matching each frame against the
/// decoded trace text.
pub fn exec_seq_source() -> String {
    let mut g = Gen::new();
    let mut body = require_numeral(&mut g, "arg1");
    body.extend(require_numeral(&mut g, "arg2"));
    body.extend(godel::decode(&mut g, "arg2", "w"));
    // every accepted trace starts at path 0 and ends halted
    body.extend(g.code(
        r##"if head(w) != "0" { while "" == "" {} }
        if head(tail(w)) != ":" { while "" == "" {} }
        @v = w; while @v != "#HALT" { if @v == "" { while "" == "" {} } @v = tail(@v); }"##,
        &[],
    ));
    body.extend(godel::decode(&mut g, "arg1", "t"));
    let m = Machine::new(&mut g);
    body.extend(ncode::parse(&mut g, "t", &m.n, &m.e, "ar", "ok", Some("names")));
    let start = m.start(&mut g);
    let path = m.path(&mut g, "f");
    let store = m.render_store(&mut g, "fs");
    let step = m.step(&mut g);
    body.extend(g.splice(
        r##"if ok != "1" { while "" == "" {} }
        if ar != "0" { while "" == "" {} }
        @st = names; %start;
        go = "1";
        while go == "1" {
            %path; %store;
            f = f . ":" . fs;
            while f != "" {
                if head(w) != head(f) { while "" == "" {} }
                w = tail(w); f = tail(f);
            }
            if head(w) == "|" {
                if head(@c) == "E" { while "" == "" {} }
                w = tail(w);
                %step;
            } else {
                if w != "#HALT" { while "" == "" {} }
                if head(@c) != "E" { while "" == "" {} }
                go = "";
            }
        }"##,
        &[("st", &m.st), ("c", &m.c)],
        vec![("start", start), ("path", path), ("store", store), ("step", step)],
    ));
    finish(2, &body)
}

/// Decode, validate as a closed program, then interpret until it halts.
pub fn true_source() -> String {
    let mut g = Gen::new();
    let mut body = require_numeral(&mut g, "arg1");
    body.extend(godel::decode(&mut g, "arg1", "t"));
    let m = Machine::new(&mut g);
    body.extend(ncode::parse(&mut g, "t", &m.n, &m.e, "ar", "ok", None));
    let start = m.start(&mut g);
    let step = m.step(&mut g);
    body.extend(g.splice(
        r#"if ok != "1" { while "" == "" {} }
        if ar != "0" { while "" == "" {} }
        @st = ""; %start;
        while head(@c) != "E" { %step; }"#,
        &[("st", &m.st), ("c", &m.c)],
        vec![("start", start), ("step", step)],
    ));
    finish(1, &body)
}

/// `(file, source)` for every generated catalog program.
pub fn generated() -> Vec<(&'static str, String)> {
    vec![
        ("number.l", number_source()),
        ("add.l", add_source()),
        ("true.l", true_source()),
        ("dim.l", dim_source()),
        ("exec_seq.l", exec_seq_source()),
        ("corpus/prime.l", prime_source()),
        ("corpus/nonprime.l", nonprime_source()),
        ("corpus/fact1.l", fact1_source()),
        ("corpus/goldbach.l", goldbach_source()),
    ]
}

/// `f = "1"` iff the numeral `x` is prime, by trial division up to √x.
fn prime_test(g: &mut Gen, x: &str, f: &str) -> Vec<Stmt> {
    let lo = arith::cmp(g, x, "two", "r");
    let sq = arith::mul(g, "d", "d", "q");
    let cq = arith::cmp(g, "q", x, "r");
    let cm = arith::cmp(g, "m", x, "rm");
    let cm2 = arith::cmp(g, "m", x, "rm");
    let ad = arith::add(g, "m", "d", "m");
    let inc = arith::inc(g, "d");
    g.splice(
        r#"two = "2"; @f = ""; %lo;
        if r != "<" {
            @f = "1"; d = "2"; go = "1";
            while go == "1" {
                %sq; %cq;
                if r == ">" { go = ""; }
                else {
                    m = d; %cm;
                    while rm == "<" { %ad; %cm2; }
                    if rm == "=" { @f = ""; go = ""; }
                    %inc;
                }
            }
        }"#,
        &[("f", f)],
        vec![("lo", lo), ("sq", sq), ("cq", cq), ("cm", cm), ("ad", ad), ("cm2", cm2), ("inc", inc)],
    )
}

/// Halts iff the input is a prime numeral.
pub fn prime_source() -> String {
    let mut g = Gen::new();
    let mut body = require_numeral(&mut g, "arg1");
    let t = prime_test(&mut g, "arg1", "p");
    body.extend(g.splice(r#"%t; if p != "1" { while "" == "" {} }"#, &[], vec![("t", t)]));
    finish(1, &body)
}

/// Halts iff the input is not a prime numeral (R-names included).
pub fn nonprime_source() -> String {
    let mut g = Gen::new();
    let num = arith::is_numeral(&mut g, "arg1", "n");
    let t = prime_test(&mut g, "arg1", "p");
    let body = g.splice(r#"%num; if n == "1" { %t; if p == "1" { while "" == "" {} } }"#, &[], vec![("num", num), ("t", t)]);
    finish(1, &body)
}

/// Halts iff both inputs are numerals and arg2 = arg1! + 1.
pub fn fact1_source() -> String {
    let mut g = Gen::new();
    let mut body = require_numeral(&mut g, "arg1");
    body.extend(require_numeral(&mut g, "arg2"));
    let inc = arith::inc(&mut g, "k");
    let mul = arith::mul(&mut g, "acc", "k", "acc");
    let one = arith::inc(&mut g, "acc");
    body.extend(g.splice(
        r#"k = "0"; acc = "1";
        while k != arg1 { %inc; %mul; }
        %one;
        if acc != arg2 { while "" == "" {} }"#,
        &[],
        vec![("inc", inc), ("mul", mul), ("one", one)],
    ));
    finish(2, &body)
}

fn odd_primes_below(n: usize) -> Vec<usize> {
    (3..n).filter(|&k| k % 2 == 1 && (3..k).step_by(2).take_while(|d| d * d <= k).all(|d| k % d != 0)).collect()
}

/// Searches for an even number that is not a sum of two primes and halts
/// on the first one.
///
/// `t` is the primality table of 0..=m ('p' or 'c'), `b` the same table
/// reversed. An even n = m + 1 is checked by walking `t` forwards and
/// `b` backwards in lockstep until both heads are 'p'. Odd m are
/// classified by one rotating wheel per odd prime below `limit`; from the
/// first prime p0 >= `limit` on, primes are also kept in unary in `pl`,
/// and from p0² on they are used for trial division.
pub fn goldbach_with(limit: usize) -> String {
    let wheels = odd_primes_below(limit);
    let p0 = (limit..).find(|&k| k % 2 == 1 && odd_primes_below(k + 1).last() == Some(&k)).unwrap();
    let mut s = String::from("args 0;\n");
    s.push_str("m = \"111\";\nt = \"ccpp\";\nb = \"ppcc\";\n");
    for &q in &wheels {
        let w = if q == 3 { "c..".to_string() } else { ".".to_string() };
        s.push_str(&format!("w{q} = \"{w}\";\n"));
    }
    s.push_str(&format!("h = \"\";\ne = \"{}\";\nwhile e != \"\" {{ h = h . \"1\"; e = tail(e); }}\n", ".".repeat(p0)));
    s.push_str("sq = \"\";\ne = h;\nwhile e != \"\" { sq = sq . h; e = tail(e); }\n");
    s.push_str("while go == \"\" {\n");
    s.push_str("  x = t . \"pp\";\n  y = \"c\" . b . \"p\";\n");
    s.push_str("  while head(x) . head(y) != \"pp\" { x = tail(x); y = tail(y); }\n");
    s.push_str("  if y == \"p\" { halt; }\n");
    s.push_str("  m = m . \"11\";\n  if m == h { big = \"1\"; }\n  if m == sq { deep = \"1\"; }\n");
    for &q in &wheels {
        s.push_str(&format!("  w{q} = tail(tail(w{q})) . head(w{q}) . head(tail(w{q}));\n"));
    }
    let heads: Vec<String> = wheels.iter().map(|q| format!("head(w{q})")).collect();
    s.push_str(&format!(
        "  if {} == \"{}\" {{ pm = \"p\"; }} else {{ pm = \"c\"; }}\n",
        heads.join(" . "),
        ".".repeat(wheels.len())
    ));
    s.push_str(
        r#"  if deep != "" {
    if pm == "p" {
      ps = pl;
      while ps != "" {
        q = "";
        while head(ps) != ";" { q = q . head(ps); ps = tail(ps); }
        ps = tail(ps);
        qq = "";
        e = q;
        while e != "" { qq = qq . q; e = tail(e); }
        over = "";
        d = m;
        e = qq;
        while e != "" { if d == "" { over = "1"; e = ""; } else { d = tail(d); e = tail(e); } }
        if over != "" { ps = ""; } else {
          d = m;
          r = "x";
          while d != "" {
            e = q;
            while e != "" { if d == "" { e = ""; r = "y"; } else { d = tail(d); e = tail(e); } }
          }
          if r == "x" { pm = "c"; ps = ""; }
        }
      }
    }
  }
  if pm == "p" {
    if big == "" {
"#,
    );
    for &q in wheels.iter().skip(1) {
        s.push_str(&format!("      if m == \"{}\" {{ w{q} = \"c{}\"; }}\n", "1".repeat(q), ".".repeat(q - 1)));
    }
    s.push_str("    } else { pl = pl . m . \";\"; }\n  }\n");
    s.push_str("  t = t . \"c\" . pm;\n  b = pm . \"c\" . b;\n}\n");
    s
}

pub fn goldbach_source() -> String {
    goldbach_with(100)
}
