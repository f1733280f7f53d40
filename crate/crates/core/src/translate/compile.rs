//! ℒ* to ℒ. Each statement becomes a block of ℒ code that runs to its end
//! when the statement is true and never finishes otherwise; the compiled
//! program is that block with one input per free variable.

use std::collections::HashMap;

use super::TranslateError;
use crate::lcore::ast::Stmt;
use crate::lcore::{parse_program, Program};
use crate::lgen::flatten::{flatten, Flat, DEAD, DONE};
use crate::lgen::interp::{to_dotted, Machine};
use crate::lgen::{arith, diverge, finish, lit, rename_stmts, unrank, Gen};
use crate::lstar::{AExpr, AliasTable, CmpOp, Statement, Term};
use crate::naming::{nth_program_with_cap, ObjectName, DEFAULT_LENGTH_CAP};

#[derive(Debug, Clone)]
pub struct CompiledUnit {
    pub statement: Statement,
    pub program: Program,
    /// `free_var_order[i]` is bound to input `arg{i+1}`.
    pub free_var_order: Vec<String>,
    pub aliases_used: Vec<String>,
}

/// Compiles with one input per free variable, in order of first occurrence.
pub fn compile(s: &Statement, aliases: &AliasTable) -> Result<CompiledUnit, TranslateError> {
    compile_with_order(s, &s.free_vars(), aliases)
}

pub fn compile_with_order(s: &Statement, order: &[String], aliases: &AliasTable) -> Result<CompiledUnit, TranslateError> {
    if let Some(v) = s.free_vars().into_iter().find(|v| !order.contains(v)) {
        return Err(TranslateError::UnboundVariable(v));
    }
    let used: Vec<String> = s.aliases().into_iter().collect();
    if let Some(a) = used.iter().find(|a| aliases.get(a).is_none()) {
        return Err(TranslateError::AliasUnknown(a.clone()));
    }
    let mut c = Compiler { g: Gen::new(), aliases, env: Vec::new() };
    for (i, v) in order.iter().enumerate() {
        c.env.push((v.clone(), format!("arg{}", i + 1)));
    }
    let body = c.block(s);
    let program = parse_program(&finish(order.len(), &body)).expect("generated code parses");
    Ok(CompiledUnit { statement: s.clone(), program, free_var_order: order.to_vec(), aliases_used: used })
}

struct Compiler<'a> {
    g: Gen,
    aliases: &'a AliasTable,
    /// ℒ* variable to the ℒ variable holding it; innermost last.
    env: Vec<(String, String)>,
}

impl Compiler<'_> {
    /// ℒ expression text for a term.
    fn term(&self, t: &Term) -> String {
        match t {
            Term::Name(n) => lit(&n.to_string()),
            Term::Var(v) => self.env.iter().rev().find(|(k, _)| k == v).map(|(_, x)| x.clone()).expect("bound"),
            Term::Alias(a) => unreachable!("alias {a} outside relation position"),
        }
    }

    fn require_numeral(&mut self, x: &str) -> Vec<Stmt> {
        let f = self.g.fresh("f");
        let check = arith::is_numeral(&mut self.g, x, &f);
        self.g.splice(r#"%check; if @f != "1" { while "" == "" {} }"#, &[("f", &f)], vec![("check", check)])
    }

    fn block(&mut self, s: &Statement) -> Vec<Stmt> {
        match s {
            Statement::Eq(a, b) | Statement::Neq(a, b) => {
                let op = if matches!(s, Statement::Eq(..)) { "!=" } else { "==" };
                let text = format!(r#"if {} {op} {} {{ while "" == "" {{}} }}"#, self.term(a), self.term(b));
                self.g.code(&text, &[])
            }
            Statement::Arith(l, op, r) => {
                let (lv, rv) = (self.g.fresh("l"), self.g.fresh("r"));
                let mut out = self.aexpr(l, &lv);
                out.extend(self.aexpr(r, &rv));
                let c = self.g.fresh("cmp");
                out.extend(arith::cmp(&mut self.g, &lv, &rv, &c));
                let (neg, want) = match op {
                    CmpOp::Eq => ("!=", "="),
                    CmpOp::Ne => ("==", "="),
                    CmpOp::Lt => ("!=", "<"),
                    CmpOp::Le => ("==", ">"),
                    CmpOp::Gt => ("!=", ">"),
                    CmpOp::Ge => ("==", "<"),
                };
                out.extend(self.g.code(&format!(r#"if {c} {neg} "{want}" {{ while "" == "" {{}} }}"#), &[]));
                out
            }
            Statement::Rel(t0, args) => self.relation(t0, args),
            Statement::And(a, b) => {
                let mut out = self.block(a);
                out.extend(self.block(b));
                out
            }
            Statement::Or(a, b) => {
                let (a, b) = (self.block(a), self.block(b));
                self.race(a, b)
            }
            Statement::BoundedAll(v, bound, body) => self.bounded_all(v, bound, body),
            Statement::Exists(v, body) => self.exists(v, body),
        }
    }

    fn aexpr(&mut self, e: &AExpr, out: &str) -> Vec<Stmt> {
        match e {
            AExpr::Term(t) => {
                let x = self.term(t);
                let mut code = match t {
                    Term::Name(ObjectName::Numeral(_)) => Vec::new(),
                    Term::Name(_) => diverge(),
                    _ => self.require_numeral(&x),
                };
                code.extend(self.g.code(&format!("{out} = {x};"), &[]));
                code
            }
            AExpr::Add(a, b) | AExpr::Mul(a, b) => {
                let (av, bv) = (self.g.fresh("a"), self.g.fresh("b"));
                let mut code = self.aexpr(a, &av);
                code.extend(self.aexpr(b, &bv));
                code.extend(if matches!(e, AExpr::Add(..)) {
                    arith::add(&mut self.g, &av, &bv, out)
                } else {
                    arith::mul(&mut self.g, &av, &bv, out)
                });
                code
            }
        }
    }

    fn relation(&mut self, t0: &Term, args: &[Term]) -> Vec<Stmt> {
        let program = match t0 {
            Term::Alias(a) => Some(self.aliases.get(a).expect("checked alias").code.program.clone()),
            Term::Name(ObjectName::Numeral(_)) => None,
            Term::Name(ObjectName::RName(i)) => {
                nth_program_with_cap(i, DEFAULT_LENGTH_CAP).ok().map(|src| parse_program(&src).expect("enumerated programs parse"))
            }
            Term::Var(_) => return self.dynamic_relation(t0, args),
        };
        match program {
            Some(p) if p.arity == args.len() => self.inline(&p, args),
            _ => diverge(),
        }
    }

    /// The relation's own code, renamed apart, with `halt` turned into a
    /// jump to its end.
    fn inline(&mut self, p: &Program, args: &[Term]) -> Vec<Stmt> {
        let mut names = Vec::new();
        collect_names(&p.body, &mut names);
        let mut map: HashMap<String, String> = HashMap::new();
        let mut prologue = String::new();
        for (i, a) in args.iter().enumerate() {
            let x = self.g.fresh("in");
            prologue.push_str(&format!("{x} = {}; ", self.term(a)));
            map.insert(format!("arg{}", i + 1), x);
        }
        for n in names {
            if !map.contains_key(&n) {
                let x = self.g.fresh("v");
                prologue.push_str(&format!("{x} = \"\"; "));
                map.insert(n, x);
            }
        }
        let hf = self.g.fresh("hf");
        prologue.push_str(&format!("{hf} = \"\";"));
        let renamed = rename_stmts(&p.body, &|n| map.get(n).cloned().unwrap_or_else(|| n.to_string()));
        let mut out = self.g.code(&prologue, &[]);
        out.extend(self.unhalt(&renamed, &hf).0);
        out
    }

    fn unhalt(&mut self, body: &[Stmt], hf: &str) -> (Vec<Stmt>, bool) {
        let mut out = Vec::with_capacity(body.len());
        for (i, s) in body.iter().enumerate() {
            let (s, may_halt) = self.unhalt_stmt(s, hf);
            out.extend(s);
            if may_halt {
                let (rest, _) = self.unhalt(&body[i + 1..], hf);
                if !rest.is_empty() {
                    out.extend(self.g.splice(&format!(r#"if {hf} == "" {{ %rest; }}"#), &[], vec![("rest", rest)]));
                }
                return (out, true);
            }
        }
        (out, false)
    }

    fn unhalt_stmt(&mut self, s: &Stmt, hf: &str) -> (Vec<Stmt>, bool) {
        match s {
            Stmt::Halt => (self.g.code(&format!(r#"{hf} = "1";"#), &[]), true),
            Stmt::Assign { .. } => (vec![s.clone()], false),
            Stmt::If { cond, then_body, else_body } => {
                let (t, th) = self.unhalt(then_body, hf);
                let (e, eh) = match else_body {
                    Some(e) => {
                        let (e, h) = self.unhalt(e, hf);
                        (Some(e), h)
                    }
                    None => (None, false),
                };
                (vec![Stmt::If { cond: cond.clone(), then_body: t, else_body: e }], th || eh)
            }
            Stmt::While { cond, body } => {
                let (b, h) = self.unhalt(body, hf);
                if !h {
                    return (vec![Stmt::While { cond: cond.clone(), body: b }], false);
                }
                let lw = self.g.fresh("lw");
                let mut then_body = b;
                then_body.extend(self.g.code(&format!(r#"if {hf} != "" {{ {lw} = "1"; }}"#), &[]));
                let guarded = Stmt::If {
                    cond: cond.clone(),
                    then_body,
                    else_body: Some(self.g.code(&format!(r#"{lw} = "1";"#), &[])),
                };
                let out = self.g.splice(&format!(r#"{lw} = ""; while {lw} == "" {{ %g; }}"#), &[], vec![("g", vec![guarded])]);
                (out, true)
            }
        }
    }

    /// Relation named by a variable: unrank and parse it in ℒ, then run it
    /// under the ℒ-level interpreter with the arguments in its store.
    fn dynamic_relation(&mut self, t0: &Term, args: &[Term]) -> Vec<Stmt> {
        let g = &mut self.g;
        let (val, f, i, t, ar) = (g.fresh("rv"), g.fresh("f"), g.fresh("i"), g.fresh("t"), g.fresh("ar"));
        let is_r = arith::is_rname(g, &val, &f);
        let m = Machine::new(g);
        let un = unrank::unrank(g, &i, &t, &m.n, &m.e, &ar);
        let mut bind = Vec::new();
        let dv = g.fresh("dv");
        for (k, a) in args.iter().enumerate() {
            let x = self.term(a);
            let g = &mut self.g;
            bind.extend(to_dotted(g, &x, &dv));
            bind.extend(m.assign(g, &lit(&format!("arg{}", k + 1)), &dv));
        }
        let g = &mut self.g;
        let start = m.start(g);
        let step = m.step(g);
        let text = format!(
            r#"@val = {};
            %isr; if @f != "1" {{ while "" == "" {{}} }}
            @i = tail(@val); %un;
            if @ar != {} {{ while "" == "" {{}} }}
            @st = ""; %bind; %start;
            while head(@c) != "E" {{ %step; }}"#,
            self.term(t0),
            lit(&args.len().to_string())
        );
        self.g.splice(
            &text,
            &[("val", &val), ("f", &f), ("i", &i), ("ar", &ar), ("st", &m.st), ("c", &m.c)],
            vec![("isr", is_r), ("un", un), ("bind", bind), ("start", start), ("step", step)],
        )
    }

    /// Both blocks as machines stepped alternately, one statement each.
    fn race(&mut self, a: Vec<Stmt>, b: Vec<Stmt>) -> Vec<Stmt> {
        let fa = flatten(&mut self.g, &a);
        let fb = flatten(&mut self.g, &b);
        let mut out = fa.reset(&mut self.g);
        out.extend(fb.reset(&mut self.g));
        let (pa, pb) = (fa.pc.clone(), fb.pc.clone());
        out.extend(self.g.splice(
            &format!(
                r#"@go = "1";
                while @go == "1" {{
                    if @pa == "{DONE}" {{ @go = ""; }}
                    else {{
                        if @pa != "{DEAD}" {{ %sa; }}
                        if @pa == "{DONE}" {{ @go = ""; }}
                        else {{
                            if @pb == "{DONE}" {{ @go = ""; }}
                            else {{
                                if @pb != "{DEAD}" {{ %sb; }}
                                if @pb == "{DONE}" {{ @go = ""; }}
                            }}
                        }}
                    }}
                }}"#
            ),
            &[("pa", &pa), ("pb", &pb)],
            vec![("sa", fa.step), ("sb", fb.step)],
        ));
        out
    }

    fn bounded_all(&mut self, v: &str, bound: &Term, body: &Statement) -> Vec<Stmt> {
        let bv = self.g.fresh("bound");
        let x = self.g.fresh(v);
        let k = self.g.fresh("k");
        let b = self.term(bound);
        let mut out = self.g.code(&format!("{bv} = {b};"), &[]);
        out.extend(self.require_numeral(&bv));
        self.env.push((v.to_string(), x.clone()));
        let inner = self.block(body);
        self.env.pop();
        let inc = arith::inc(&mut self.g, &k);
        out.extend(self.g.splice(
            r#"@k = "0"; @lp = "1";
            while @lp == "1" {
                @j = "";
                while @j != "RR" { @x = @j . @k; %body; @j = @j . "R"; }
                if @k == @bv { @lp = ""; } else { %inc; }
            }"#,
            &[("k", &k), ("x", &x), ("bv", &bv)],
            vec![("body", inner), ("inc", inc)],
        ));
        out
    }

    /// Growing pool over the stream 0, R0, 1, R1, ...: each round admits
    /// one candidate, then steps every live machine once in admission order.
    /// A machine's state is its counter and variables, packed dotted and
    /// `;`-terminated; machines at the canonical dead end are dropped.
    fn exists(&mut self, v: &str, body: &Statement) -> Vec<Stmt> {
        let x = self.g.fresh(v);
        self.env.push((v.to_string(), x.clone()));
        let inner = self.block(body);
        self.env.pop();
        let flat = flatten(&mut self.g, &inner);
        let mut state: Vec<String> = vec![flat.pc.clone()];
        state.extend(flat.vars.iter().filter(|n| **n != x).cloned());
        state.push(x.clone());
        let fresh_record = {
            let mut r = crate::lgen::ncode::dotted(flat.start.as_bytes());
            r.push(';');
            r.push_str(&";".repeat(state.len() - 2));
            r
        };
        let (rest, np) = (self.g.fresh("rest"), self.g.fresh("np"));
        let mut clear = String::new();
        let mut unpack = Vec::new();
        let mut pack = Vec::new();
        for s in &state {
            // Packing empties each variable, so unpacking can append.
            unpack.extend(self.g.code(
                r#"while head(@r) != ";" { @s = @s . head(tail(@r)); @r = tail(tail(@r)); } @r = tail(@r);"#,
                &[("s", s), ("r", &rest)],
            ));
            pack.extend(self.g.code(
                r#"while @s != "" { @np = @np . "." . head(@s); @s = tail(@s); } @np = @np . ";";"#,
                &[("s", s), ("np", &np)],
            ));
            clear.push_str(&format!("{s} = \"\"; "));
        }
        let (cn, nm, dn) = (self.g.fresh("cn"), self.g.fresh("nm"), self.g.fresh("dn"));
        let inc = arith::inc(&mut self.g, &cn);
        let dot = to_dotted(&mut self.g, &nm, &dn);
        let Flat { pc, step, .. } = flat;
        self.g.splice(
            &format!(
                r#"{clear}@pool = ""; @cn = "0"; @tg = ""; @go = "1";
                while @go == "1" {{
                    if @tg == "" {{ @nm = @cn; @tg = "R"; }} else {{ @nm = "R" . @cn; @tg = ""; %inc; }}
                    %dot;
                    @pool = @pool . {rec} . @dn . ";";
                    @rest = @pool; @np = "";
                    while @rest != "" {{
                        %unpack;
                        if @pc == "{DONE}" {{ @go = ""; @rest = ""; }}
                        else {{
                            %step;
                            if @pc == "{DONE}" {{ @go = ""; @rest = ""; }}
                            else {{ @keep = @np; @dd = @pc; %pack; if @dd == "{DEAD}" {{ @np = @keep; }} }}
                        }}
                    }}
                    @pool = @np;
                }}"#,
                rec = lit(&fresh_record)
            ),
            &[("rest", &rest), ("np", &np), ("cn", &cn), ("nm", &nm), ("dn", &dn), ("pc", &pc)],
            vec![("inc", inc), ("dot", dot), ("unpack", unpack), ("step", step), ("pack", pack)],
        )
    }
}

fn collect_names(body: &[Stmt], out: &mut Vec<String>) {
    fn expr(e: &crate::lcore::Expr, out: &mut Vec<String>) {
        use crate::lcore::Expr;
        match e {
            Expr::Lit(_) => {}
            Expr::Var(n) => {
                if !out.contains(n) {
                    out.push(n.clone());
                }
            }
            Expr::Head(a) | Expr::Tail(a) => expr(a, out),
            Expr::Concat(a, b) => {
                expr(a, out);
                expr(b, out);
            }
        }
    }
    for s in body {
        match s {
            Stmt::Assign { target, expr: e } => {
                if !out.contains(target) {
                    out.push(target.clone());
                }
                expr(e, out);
            }
            Stmt::If { cond, then_body, else_body } => {
                expr(&cond.lhs, out);
                expr(&cond.rhs, out);
                collect_names(then_body, out);
                if let Some(e) = else_body {
                    collect_names(e, out);
                }
            }
            Stmt::While { cond, body } => {
                expr(&cond.lhs, out);
                expr(&cond.rhs, out);
                collect_names(body, out);
            }
            Stmt::Halt => {}
        }
    }
}
