//! The named relations NUMBER, ADD, DIM, EXEC_SEQ and TRUE as ℒ programs.
//!
//! The shipped sources live in `stdlib/*.l` at the repository root and are
//! produced by [`crate::lgen`]; a test checks they are current.

use once_cell::sync::Lazy;

use crate::lcore::{parse_program, Program};
use crate::lstar::AliasTable;

#[derive(Debug, Clone)]
pub struct CatalogEntry {
    pub alias: &'static str,
    pub file: &'static str,
    pub source: &'static str,
    pub declared_arity: usize,
    pub doc: &'static str,
}

impl CatalogEntry {
    pub fn program(&self) -> Program {
        parse_program(self.source).expect("catalog sources parse")
    }
}

pub mod corpus;
pub mod gen;

const MANIFEST: &str = include_str!("../../../../stdlib/manifest.txt");

fn shipped(file: &str) -> &'static str {
    match file {
        "number.l" => include_str!("../../../../stdlib/number.l"),
        "add.l" => include_str!("../../../../stdlib/add.l"),
        "dim.l" => include_str!("../../../../stdlib/dim.l"),
        "exec_seq.l" => include_str!("../../../../stdlib/exec_seq.l"),
        "true.l" => include_str!("../../../../stdlib/true.l"),
        "corpus/prime.l" => include_str!("../../../../stdlib/corpus/prime.l"),
        "corpus/nonprime.l" => include_str!("../../../../stdlib/corpus/nonprime.l"),
        "corpus/fact1.l" => include_str!("../../../../stdlib/corpus/fact1.l"),
        "corpus/goldbach.l" => include_str!("../../../../stdlib/corpus/goldbach.l"),
        other => panic!("manifest names unknown file {other}"),
    }
}

static CATALOG: Lazy<Vec<CatalogEntry>> = Lazy::new(|| {
    MANIFEST
        .lines()
        .filter(|l| !l.trim().is_empty() && !l.starts_with('#'))
        .map(|line| {
            let f: Vec<&'static str> = line.splitn(4, '|').map(str::trim).collect();
            assert_eq!(f.len(), 4, "bad manifest line {line}");
            CatalogEntry {
                alias: f[0],
                file: f[1],
                source: shipped(f[1]),
                declared_arity: f[2].parse().expect("manifest arity"),
                doc: f[3],
            }
        })
        .collect()
});

pub fn catalog() -> &'static [CatalogEntry] {
    &CATALOG
}

pub fn lookup(alias: &str) -> Option<&'static CatalogEntry> {
    CATALOG.iter().find(|e| e.alias == alias)
}

pub fn number_rel() -> Program {
    lookup("NUMBER").unwrap().program()
}

pub fn add_rel() -> Program {
    lookup("ADD").unwrap().program()
}

pub fn dim_rel() -> Program {
    lookup("DIM").unwrap().program()
}

pub fn exec_seq_rel() -> Program {
    lookup("EXEC_SEQ").unwrap().program()
}

pub fn true_rel() -> Program {
    lookup("TRUE").unwrap().program()
}

/// Alias table holding every catalog relation.
pub fn alias_table() -> AliasTable {
    let mut t = AliasTable::new();
    for e in catalog() {
        t.insert(e.alias, e.program(), e.doc);
    }
    t
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lcore::{run, Verdict};

    #[test]
    fn catalog_is_valid() {
        let mut seen = std::collections::HashSet::new();
        for e in catalog() {
            assert!(seen.insert(e.alias));
            assert_eq!(e.program().arity, e.declared_arity, "{}", e.alias);
            assert!(crate::naming::check_relation_program(e.source.trim_end()).is_ok(), "{}", e.alias);
        }
        assert_eq!(seen.len(), 5);
    }

    #[test]
    fn shipped_sources_are_current() {
        for (file, source) in gen::generated() {
            assert_eq!(shipped(file).trim_end(), source.trim_end(), "{file} is stale; run the regen_stdlib example");
        }
    }

    fn halts(p: &Program, inputs: &[&str]) -> bool {
        matches!(run(p, inputs, 1_000_000).unwrap(), Verdict::Halted(_))
    }

    #[test]
    fn number_and_add_examples() {
        let number = number_rel();
        assert!(halts(&number, &["5"]));
        assert!(!halts(&number, &["R0"]));
        assert!(!halts(&number, &["007"]));
        let add = add_rel();
        assert!(halts(&add, &["2", "3", "5"]));
        assert!(!halts(&add, &["2", "3", "6"]));
        assert!(!halts(&add, &["R1", "3", "4"]));
    }

    #[test]
    fn dim_examples() {
        let dim = dim_rel();
        assert!(halts(&dim, &["5", "0"]));
        assert!(halts(&dim, &["R0", "1"]));
        assert!(halts(&dim, &["R9", "1"]));
        assert!(!halts(&dim, &["R9", "2"]));
        assert!(!halts(&dim, &["5", "R2"]));
        assert!(!halts(&dim, &["5", "1"]));
        assert!(!halts(&dim, &["x", "0"]));
    }

    #[test]
    fn exec_seq_matches_checker() {
        use crate::lcore::{emit_trace, parse_program, TraceOutcome};
        use crate::naming::godel_encode;
        use crate::translate::{check_trace, CheckResult, TraceCertificate};
        let es = exec_seq_rel();
        let halting = |g: &str, x: &str, fuel| matches!(run(&es, &[g, x], fuel).unwrap(), Verdict::Halted(_));
        let agree = |src: &str, w: &str, fuel| {
            let g = godel_encode(src).unwrap();
            let want = check_trace(&TraceCertificate { program_godel: g.clone(), witness: w.to_string() }) == CheckResult::Accepted;
            assert_eq!(halting(&g.to_string(), &godel_encode(w).unwrap().to_string(), fuel), want, "{src} / {w}");
            want
        };
        let mut accepted = 0;
        for src in crate::lgen::interp::tests::PROGRAMS {
            let p = parse_program(src).unwrap();
            let TraceOutcome::Trace(t) = emit_trace(&p, &[], 40).unwrap() else { continue };
            let w = t.serialize();
            if w.len() > 300 {
                continue;
            }
            let g = godel_encode(src).unwrap().to_string();
            let crate::lcore::Verdict::Halted(cost) = run(&es, &[&g, &godel_encode(&w).unwrap().to_string()], 20_000_000).unwrap() else {
                panic!("{src}")
            };
            accepted += agree(src, &w, 2 * cost) as usize;
            // Mutants are no longer than the original plus a few symbols.
            for bad in [w.replace("#HALT", ""), w.replacen('|', "|0:|", 1), format!("{w}|"), w.replacen("\"a\"", "\"b\"", 1)] {
                agree(src, &bad, 3 * cost);
            }
        }
        agree("args 1; halt;", "0:|1:#HALT", 1_000_000);
        agree("args 0; halt", "0:|1:#HALT", 1_000_000);
        assert!(accepted >= 5);
    }

    fn true_steps(source: &str, fuel: u64) -> Option<u64> {
        use crate::lcore::{Compiled, MachineState};
        let code = std::sync::Arc::new(Compiled::new(true_rel()));
        let n = crate::naming::godel_encode(source).unwrap().to_string();
        let mut m = MachineState::new(code, &[&n]).unwrap();
        m.run_for(fuel).then(|| m.steps())
    }

    #[test]
    fn true_cohalts_with_closed_programs() {
        for src in crate::lgen::interp::tests::PROGRAMS {
            let p = crate::lcore::parse_program(src).unwrap();
            let native = matches!(run(&p, &[], 10_000).unwrap(), Verdict::Halted(_));
            let got = true_steps(src, 50_000_000);
            assert_eq!(got.is_some(), native, "{src}");
        }
    }

    #[test]
    fn true_rejects_non_closed_inputs() {
        for src in ["not a program", "args 1; halt;", "args 0; x = 1;", ""] {
            assert!(true_steps(src, 20_000_000).is_none(), "{src}");
        }
        assert!(!halts(&true_rel(), &["R1"]));
        assert!(!halts(&true_rel(), &["01"]));
    }
}
