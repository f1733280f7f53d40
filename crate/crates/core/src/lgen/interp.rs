//! The ℒ-level interpreter over N-code (see [`super::ncode`]).
//!
//! Machine state lives in four ℒ variables: the cursor `c` (a suffix of the
//! N-code, always at a record after settling), the whole N-code `n` (for
//! jumping back to loop heads), its final record `e`, and the store `st`
//! (`name=dotted;` entries). The last loop head entered is cached.

use super::{lit, Gen};
use crate::lcore::Stmt;

/// Variable names of one interpreted machine.
#[derive(Debug, Clone)]
pub struct Machine {
    pub c: String,
    pub n: String,
    pub e: String,
    pub st: String,
    wl: String,
    wc: String,
}

impl Machine {
    pub fn new(g: &mut Gen) -> Self {
        Machine {
            c: g.fresh("c"),
            n: g.fresh("n"),
            e: g.fresh("e"),
            st: g.fresh("st"),
            wl: g.fresh("wl"),
            wc: g.fresh("wc"),
        }
    }

    fn binds(&self) -> Vec<(&str, &str)> {
        vec![("c", &self.c), ("n", &self.n), ("e", &self.e), ("st", &self.st), ("wl", &self.wl), ("wc", &self.wc)]
    }

    /// Points the machine at the start of its N-code; the store is left as is.
    pub fn start(&self, g: &mut Gen) -> Vec<Stmt> {
        g.code(r#"@c = @n; @wl = "";"#, &self.binds())
    }

    /// Reads the label after the record kind at `c` into `lb` and moves past
    /// the closing `:`.
    fn label(g: &mut Gen, c: &str, lb: &str) -> Vec<Stmt> {
        g.code(
            r#"@lb = ""; while head(@c) != ":" { @lb = @lb . head(@c); @c = tail(@c); } @c = tail(@c);"#,
            &[("c", c), ("lb", lb)],
        )
    }

    /// Moves `c` past the marker `mk` carrying label `lb`; `at` is left at the marker.
    fn skip_to(g: &mut Gen, c: &str, mk: &str, lb: &str, at: &str) -> Vec<Stmt> {
        let y = g.fresh("y");
        let read = Self::label(g, c, &y);
        g.splice(
            r#"@f = "";
            while @f == "" {
                @h = head(@c);
                if @h == "." { @c = tail(tail(@c)); }
                else {
                    if @h == @mk { @at = @c; @c = tail(@c); %read; if @y == @lb { @f = "1"; } }
                    else { @c = tail(@c); }
                }
            }"#,
            &[("c", c), ("mk", mk), ("lb", lb), ("at", at), ("y", &y)],
            vec![("read", read)],
        )
    }

    /// Evaluates postfix ops at `c` into `a`; the terminator is left in `o`.
    fn eval(&self, g: &mut Gen, a: &str, o: &str) -> Vec<Stmt> {
        let nm = g.fresh("nm");
        let v = g.fresh("v");
        let lookup = self.lookup(g, &nm, &v);
        let mut b = self.binds();
        b.extend([("a", a), ("o", o), ("nm", &nm), ("v", &v)]);
        g.splice(
            r#"@a = ""; @b = ""; @k = ""; @go = "1";
            while @go == "1" {
                @o = head(@c); @c = tail(@c); @go = "";
                if @o == "v" {
                    @nm = ""; while head(@c) != "," { @nm = @nm . head(@c); @c = tail(@c); }
                    %lookup; @go = "p";
                }
                if @o == "l" {
                    @v = ""; while head(@c) == "." { @v = @v . head(@c) . head(tail(@c)); @c = tail(tail(@c)); }
                    @go = "p";
                }
                if @go == "p" { @c = tail(@c); @k = @b . ";" . @k; @b = @a; @a = @v; @go = "1"; }
                if @o == "h" { @a = head(@a) . head(tail(@a)); @go = "1"; }
                if @o == "t" { @a = tail(tail(@a)); @go = "1"; }
                if @o == "c" {
                    @a = @b . @a; @b = "";
                    while head(@k) == "." { @b = @b . head(@k) . head(tail(@k)); @k = tail(tail(@k)); }
                    @k = tail(@k); @go = "1";
                }
            }"#,
            &b,
            vec![("lookup", lookup)],
        )
    }

    /// `v` = value of variable `nm` in the store (empty if absent).
    fn lookup(&self, g: &mut Gen, nm: &str, v: &str) -> Vec<Stmt> {
        let mut b = self.binds();
        b.extend([("nm", nm), ("v", v)]);
        g.code(
            r#"@s = @st; @v = "";
            while @s != "" {
                @y = ""; while head(@s) != "=" { @y = @y . head(@s); @s = tail(@s); }
                @s = tail(@s);
                if @y == @nm {
                    while head(@s) == "." { @v = @v . head(@s) . head(tail(@s)); @s = tail(tail(@s)); }
                    @s = "";
                }
                else { while head(@s) == "." { @s = tail(tail(@s)); } @s = tail(@s); }
            }"#,
            &b,
        )
    }

    /// Sets variable `nm` to the dotted value `v`; new names are appended.
    pub fn assign(&self, g: &mut Gen, nm: &str, v: &str) -> Vec<Stmt> {
        let mut b = self.binds();
        b.extend([("nm", nm), ("v", v)]);
        g.code(
            r#"@s = @st; @pre = "";
            while @s != "" {
                @y = ""; while head(@s) != "=" { @y = @y . head(@s); @s = tail(@s); }
                @s = tail(@s);
                if @y == @nm {
                    while head(@s) == "." { @s = tail(tail(@s)); }
                    @st = @pre . @nm . "=" . @v . @s; @s = ""; @pre = "1";
                }
                else {
                    @pre = @pre . @y . "=";
                    while head(@s) == "." { @pre = @pre . head(@s) . head(tail(@s)); @s = tail(tail(@s)); }
                    @pre = @pre . ";"; @s = tail(@s);
                }
            }
            if @pre != "1" { @st = @st . @nm . "=" . @v . ";"; }"#,
            &b,
        )
    }

    /// Moves `c` over block-end markers until it rests on a statement or
    /// the final record.
    pub fn settle(&self, g: &mut Gen) -> Vec<Stmt> {
        let lb = g.fresh("lb");
        let at = g.fresh("at");
        let read = Self::label(g, &self.c, &lb);
        let read2 = Self::label(g, &self.c, &lb);
        let skip_else = Self::skip_to(g, &self.c, "\"]\"", &lb, &at);
        let rescan = Self::skip_to(g, &self.c, "\"W\"", &lb, &at);
        let mut b = self.binds();
        b.extend([("lb", lb.as_str()), ("at", at.as_str())]);
        g.splice(
            r#"@m = "1";
            while @m == "1" {
                @x = head(@c); @m = "";
                if @x == "}" { @c = tail(@c); %read; if head(@c) == "[" { %skipelse; } @m = "1"; }
                if @x == "]" { @c = tail(@c); while head(@c) != ":" { @c = tail(@c); } @c = tail(@c); @m = "1"; }
                if @x == ")" {
                    @c = tail(@c); %read2;
                    if @lb == @wl { @c = @wc; } else { @c = @n; %rescan; @c = @at; }
                }
            }"#,
            &b,
            vec![("read", read), ("read2", read2), ("skipelse", skip_else), ("rescan", rescan)],
        )
    }

    /// Executes the statement at `c` (which must not be the final record),
    /// then settles.
    pub fn step(&self, g: &mut Gen) -> Vec<Stmt> {
        let lb = g.fresh("lb");
        let at = g.fresh("at");
        let a = g.fresh("a");
        let o = g.fresh("o");
        let tg = g.fresh("tg");
        let read = Self::label(g, &self.c, &lb);
        let eval = self.eval(g, &a, &o);
        let assign = self.assign(g, &tg, &a);
        let skip_then = Self::skip_to(g, &self.c, "\"}\"", &lb, &at);
        let skip_body = Self::skip_to(g, &self.c, "\")\"", &lb, &at);
        let settle = self.settle(g);
        let mut b = self.binds();
        b.extend([("lb", lb.as_str()), ("at", at.as_str()), ("a", &a), ("o", &o), ("tg", &tg)]);
        g.splice(
            r#"@c0 = @c; @x = head(@c); @c = tail(@c);
            if @x == "H" { @c = @e; }
            else {
                %read;
                if @x == "A" { @tg = ""; while head(@c) != "," { @tg = @tg . head(@c); @c = tail(@c); } @c = tail(@c); }
                @g = "1";
                while @g == "1" { %eval; @g = ""; if @o != ";" { @l = @a; @cm = @o; @g = "1"; } }
                if @x == "A" { %assign; }
                else {
                    @tv = ""; if @l == @a { @tv = "1"; }
                    if @cm == "!" { if @tv == "1" { @tv = ""; } else { @tv = "1"; } }
                    if @tv == "1" { if @x == "W" { @wl = @lb; @wc = @c0; } }
                    else {
                        if @x == "W" { %skipbody; }
                        else { %skipthen; if head(@c) == "[" { @c = tail(@c); } }
                    }
                }
            }
            %settle;"#,
            &b,
            vec![
                ("read", read),
                ("eval", eval),
                ("assign", assign),
                ("skipbody", skip_body),
                ("skipthen", skip_then),
                ("settle", settle),
            ],
        )
    }

    /// `p` = pc-path of the record at `c`.
    pub fn path(&self, g: &mut Gen, p: &str) -> Vec<Stmt> {
        g.code(
            r#"@s = tail(@c); @p = ""; while head(@s) != ":" { @p = @p . head(@s); @s = tail(@s); }"#,
            &[("c", &self.c), ("p", p)],
        )
    }

    /// `out` = the store as frame text: non-empty bindings `name="quoted"`
    /// joined by `;` (entries are kept in ascending name order).
    pub fn render_store(&self, g: &mut Gen, out: &str) -> Vec<Stmt> {
        let q = lit("\"");
        let bs = lit("\\");
        g.code(
            &format!(
                r#"@s = @st; @out = ""; @sep = "";
                while @s != "" {{
                    @y = ""; while head(@s) != "=" {{ @y = @y . head(@s); @s = tail(@s); }}
                    @s = tail(@s);
                    if head(@s) == "." {{
                        @out = @out . @sep . @y . "=" . {q}; @sep = ";";
                        while head(@s) == "." {{
                            @h = head(tail(@s));
                            if @h == {q} {{ @out = @out . {bs}; }}
                            if @h == {bs} {{ @out = @out . {bs}; }}
                            @out = @out . @h; @s = tail(tail(@s));
                        }}
                        @out = @out . {q};
                    }}
                    @s = tail(@s);
                }}"#
            ),
            &[("st", &self.st), ("out", out)],
        )
    }
}

/// `d` = dotted form of `x`.
pub fn to_dotted(g: &mut Gen, x: &str, d: &str) -> Vec<Stmt> {
    g.code(r#"@s = @x; @d = ""; while @s != "" { @d = @d . "." . head(@s); @s = tail(@s); }"#, &[("x", x), ("d", d)])
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::lcore::{parse_program, render, Compiled, MachineState};
    use crate::lgen::ncode::{host_names, host_ncode};
    use std::sync::Arc;

    /// ℒ program over (ncode, end, store, fuel-in-unary): runs up to fuel
    /// steps, recording each frame; `done` is "1" when the final record is reached.
    fn stepper() -> Arc<Compiled> {
        let mut g = Gen::new();
        let m = Machine::new(&mut g);
        let start = m.start(&mut g);
        let step = m.step(&mut g);
        let path = m.path(&mut g, "pth");
        let rnd = m.render_store(&mut g, "fr");
        let path0 = m.path(&mut g, "pth");
        let render0 = m.render_store(&mut g, "fr");
        let body = g.splice(
            r#"@n = arg1; @e = arg2; @st = arg3; @fuel = arg4; %start;
            %path0; %render0; frames = pth . ":" . fr;
            done = "";
            while @fuel != "" {
                if head(@c) == "E" { done = "1"; @fuel = ""; }
                else {
                    %step; %path; %render; frames = frames . "|" . pth . ":" . fr;
                    @fuel = tail(@fuel);
                }
            }
            if head(@c) == "E" { done = "1"; }"#,
            &[("n", &m.n), ("e", &m.e), ("st", &m.st), ("c", &m.c)],
            vec![("start", start), ("step", step), ("path", path), ("render", rnd), ("path0", path0), ("render0", render0)],
        );
        Arc::new(Compiled::new(parse_program(&render(4, &body)).unwrap()))
    }

    fn native_frames(src: &str, fuel: u64) -> (String, bool) {
        let p = parse_program(src).unwrap();
        let code = Arc::new(Compiled::new(p));
        let mut m = MachineState::new(code, &[]).unwrap();
        let mut frames = vec![m.frame_text()];
        for _ in 0..fuel {
            if m.is_halted() {
                break;
            }
            m.step();
            frames.push(m.frame_text());
        }
        (frames.join("|"), m.is_halted())
    }

    fn check(code: &Arc<Compiled>, src: &str, fuel: u64) {
        let p = parse_program(src).unwrap();
        let n = host_ncode(&p);
        let e = format!("E{}:", p.body.len());
        let unary = "1".repeat(fuel as usize);
        let mut m = MachineState::new(Arc::clone(code), &[&n, &e, &host_names(&p), &unary]).unwrap();
        assert!(m.run_for(200_000_000));
        let got = String::from_utf8(m.value("frames").to_vec()).unwrap();
        let (want, halted) = native_frames(src, fuel);
        assert_eq!(got, want, "{src}");
        assert_eq!(m.value("done") == b"1", halted, "{src}");
    }

    pub(crate) const PROGRAMS: &[&str] = &[
        "args 0; halt;",
        "args 0;",
        "args 0; x = \"a\"; halt;",
        "args 0; x = \"ab\" . \"c\"; y = head(x) . tail(tail(x)); z = y . x . y; x = \"\";",
        "args 0; if x == \"\" { y = \"1\"; } else { y = \"2\"; } if y != \"1\" { halt; } z = \"q\\\"\\\\\";",
        "args 0; if x != \"\" { y = \"1\"; } else { y = \"2\"; if y == \"2\" { } else { } } w = y;",
        "args 0; if x != \"\" { } z = \"1\"; if z == \"1\" { } if z == \"\" { } else { }",
        "args 0; while x != \"aaaa\" { x = x . \"a\"; } halt;",
        "args 0; while x != \"aaa\" { x = x . \"a\"; y = \"\"; while y != x { y = y . \"a\"; } } z = y . x;",
        "args 0; while \"\" == \"\" { }",
        "args 0; while x != \"bb\" { if x == \"b\" { x = \"bb\"; } else { x = \"b\"; while y == \"\" { y = \"1\"; } } }",
        "args 0; x = head(tail(head(\"ab\" . \"cd\") . tail(\"ef\" . head(\"gh\")))) . \"z\";",
        "args 0; b = \"1\"; a = \"2\"; a_ = \"3\"; a0 = \"4\"; b = \"\"; a = a . a0;",
        "args 0; while x != \"11\" { x = x . \"1\"; if x == \"1\" { halt; } } y = \"n\";",
        "args 0; x = \"=;.:,\"; y = x . \".\"; if y == \"=;.:,.\" { z = \"ok\"; }",
    ];

    #[test]
    fn frames_match_native_vm() {
        let code = stepper();
        for src in PROGRAMS {
            check(&code, src, 60);
        }
    }

    #[test]
    fn dotted_conversion() {
        let mut g = Gen::new();
        let body = to_dotted(&mut g, "arg1", "out");
        let p = parse_program(&render(1, &body)).unwrap();
        let mut m = MachineState::new(Arc::new(Compiled::new(p)), &["a\"b"]).unwrap();
        assert!(m.run_for(100));
        assert_eq!(m.value("out"), b".a.\".b");
    }
}
