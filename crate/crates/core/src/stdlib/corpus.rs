//! Example corpus: closed statements, closed programs, the Goldbach
//! counterexample search and the Euclid statement.

use once_cell::sync::Lazy;

use crate::lcore::{parse_program, Program};
use crate::lstar::{parse_lstar, parse_lstar_open, AliasTable, Statement};

const STATEMENTS: &str = include_str!("../../../../stdlib/corpus/statements.txt");
const PROGRAMS: &str = include_str!("../../../../stdlib/corpus/programs.txt");
const GOLDBACH: &str = include_str!("../../../../stdlib/corpus/goldbach.l");
const EUCLID: &str = include_str!("../../../../stdlib/corpus/euclid.ls");
const EUCLID_INNER: &str = include_str!("../../../../stdlib/corpus/euclid_inner.ls");

#[derive(Debug, Clone)]
pub enum CorpusItem {
    Statement(Statement),
    Program(Program),
}

#[derive(Debug, Clone)]
pub struct CorpusEntry {
    pub name: String,
    pub text: String,
    pub item: CorpusItem,
}

fn strip_comments(text: &str) -> String {
    text.lines().filter(|l| !l.trim_start().starts_with('#')).collect::<Vec<_>>().join("\n")
}

fn table(text: &str) -> Vec<(String, String)> {
    text.lines()
        .filter(|l| !l.trim().is_empty() && !l.starts_with('#'))
        .map(|l| {
            let (name, body) = l.split_once('|').expect("corpus line has a name");
            (name.trim().to_string(), body.trim().to_string())
        })
        .collect()
}

static STATEMENT_LIST: Lazy<Vec<(String, String, Statement)>> = Lazy::new(|| {
    table(STATEMENTS)
        .into_iter()
        .map(|(n, t)| {
            let s = parse_lstar(&t).unwrap_or_else(|e| panic!("corpus statement {n}: {e}"));
            (n, t, s)
        })
        .collect()
});

static PROGRAM_LIST: Lazy<Vec<(String, String, Program)>> = Lazy::new(|| {
    table(PROGRAMS)
        .into_iter()
        .map(|(n, t)| {
            let p = parse_program(&t).unwrap_or_else(|e| panic!("corpus program {n}: {e}"));
            (n, t, p)
        })
        .collect()
});

/// The small closed statements, in file order.
pub fn statements() -> Vec<(&'static str, &'static Statement)> {
    STATEMENT_LIST.iter().map(|(n, _, s)| (n.as_str(), s)).collect()
}

/// The closed programs, in file order.
pub fn programs() -> Vec<(&'static str, &'static Program)> {
    PROGRAM_LIST.iter().map(|(n, _, p)| (n.as_str(), p)).collect()
}

/// Halts on the first even number > 2 that is not a sum of two primes.
pub fn goldbach() -> Program {
    parse_program(GOLDBACH).expect("shipped program parses")
}

/// ∃ a prime p with no prime in (p, p! + 1].
pub fn euclid() -> Statement {
    parse_lstar(&strip_comments(EUCLID)).expect("shipped statement parses")
}

/// The search for a prime in (p, f], with p and f free.
pub fn euclid_inner() -> Statement {
    parse_lstar_open(&strip_comments(EUCLID_INNER), &["p", "f"]).expect("shipped statement parses")
}

/// Catalog relations plus PRIME, NONPRIME and FACT1.
pub fn corpus_aliases() -> AliasTable {
    let mut t = super::alias_table();
    for (alias, file, doc) in [
        ("PRIME", "corpus/prime.l", "halts iff the input is a prime numeral"),
        ("NONPRIME", "corpus/nonprime.l", "halts iff the input is not a prime numeral"),
        ("FACT1", "corpus/fact1.l", "halts iff arg2 = arg1! + 1 on numerals"),
    ] {
        t.insert(alias, parse_program(super::shipped(file)).expect("shipped program parses"), doc);
    }
    t
}

/// Every corpus item with its name.
pub fn example_corpus() -> Vec<CorpusEntry> {
    let mut out: Vec<CorpusEntry> = STATEMENT_LIST
        .iter()
        .map(|(n, t, s)| CorpusEntry { name: n.clone(), text: t.clone(), item: CorpusItem::Statement(s.clone()) })
        .collect();
    out.extend(
        PROGRAM_LIST
            .iter()
            .map(|(n, t, p)| CorpusEntry { name: n.clone(), text: t.clone(), item: CorpusItem::Program(p.clone()) }),
    );
    out.push(CorpusEntry { name: "goldbach".into(), text: GOLDBACH.into(), item: CorpusItem::Program(goldbach()) });
    out.push(CorpusEntry { name: "euclid".into(), text: strip_comments(EUCLID), item: CorpusItem::Statement(euclid()) });
    out
}
