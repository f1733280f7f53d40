//! Command-line front end.
//!
//! Exit codes: 0 true/accepted, 1 false/rejected, 2 budget exhausted,
//! 3 usage, file or parse errors.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use thiserror::Error;

use crate::lcore::{emit_trace, parse_program, Program, TraceOutcome, Verdict};
use crate::lstar::{eval_ref_with, parse_lstar, AliasTable, EvalOptions, LStarError, RefVerdict, Statement};
use crate::naming::{classify_name, nth_program_with_cap, rank_program, Classified, NamingError};
use crate::translate::{check_trace, compile, reverse, CheckResult, TraceCertificate, TranslateError};

pub const EXIT_TRUE: i32 = 0;
pub const EXIT_FALSE: i32 = 1;
pub const EXIT_BUDGET: i32 = 2;
pub const EXIT_ERROR: i32 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Human,
    Structured,
}

#[derive(Debug, Parser)]
#[command(name = "tvl", version, about = "Statements are true when their programs halt")]
pub struct Cli {
    #[arg(long, global = true, default_value_t = 1_000_000, value_parser = clap::value_parser!(u64).range(1..))]
    pub fuel: u64,
    #[arg(long, global = true, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    pub quantum: u64,
    #[arg(long, global = true, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    pub admission: u64,
    #[arg(long = "enum-cap", global = true, default_value_t = 64, value_parser = clap::value_parser!(u64).range(7..))]
    pub enum_cap: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Human)]
    pub format: Format,
    /// Extra alias manifest (`ALIAS = path | arity | doc` lines).
    #[arg(long, global = true)]
    pub aliases: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate a closed program (.l) or statement (.ls).
    Eval { path: PathBuf },
    /// Translate a statement (.ls) into an ℒ program.
    Compile { path: PathBuf },
    /// Translate a closed program (.l) into a statement.
    Reverse { path: PathBuf },
    /// Write the execution trace of a closed program.
    Trace {
        path: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Check a trace against a closed program.
    Verify { program: PathBuf, trace: PathBuf },
    /// Print relation program number i, or the rank of a program.
    Enum {
        #[arg(required_unless_present = "rank")]
        index: Option<BigUint>,
        #[arg(long, conflicts_with = "index")]
        rank: Option<PathBuf>,
    },
    /// Classify an object name; R-names print their program.
    Name { name: String },
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{path}: {message}")]
    Parse { path: String, message: String },
    #[error("{0}: expected a .l or .ls file")]
    Extension(String),
    #[error(transparent)]
    LStar(#[from] LStarError),
    #[error(transparent)]
    Translate(#[from] TranslateError),
    #[error(transparent)]
    Naming(#[from] NamingError),
    #[error("program has arity {0}; only closed programs can be run here")]
    NotClosed(usize),
}

/// A finished command: text for stdout and the exit code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub text: String,
    pub code: i32,
}

struct Report {
    format: Format,
    fields: Vec<(&'static str, String)>,
}

impl Report {
    fn new(format: Format) -> Self {
        Report { format, fields: Vec::new() }
    }

    fn add(&mut self, key: &'static str, value: impl ToString) {
        self.fields.push((key, value.to_string()));
    }

    fn render(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.fields {
            match self.format {
                Format::Structured => writeln!(out, "{k}={v}").unwrap(),
                Format::Human => writeln!(out, "{:<10} {v}", format!("{k}:")).unwrap(),
            }
        }
        out
    }
}

enum Input {
    Program(Program),
    Statement(Statement),
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.display().to_string(), source })
}

fn load_program(path: &Path) -> Result<Program, CliError> {
    let text = read(path)?;
    parse_program(&text).map_err(|e| CliError::Parse { path: path.display().to_string(), message: e.to_string() })
}

fn load(path: &Path) -> Result<Input, CliError> {
    match path.extension().and_then(|e| e.to_str()) {
        Some("l") => Ok(Input::Program(load_program(path)?)),
        Some("ls") => {
            let text = read(path)?;
            parse_lstar(&text)
                .map(Input::Statement)
                .map_err(|e| CliError::Parse { path: path.display().to_string(), message: e.to_string() })
        }
        _ => Err(CliError::Extension(path.display().to_string())),
    }
}

impl Cli {
    fn alias_table(&self) -> Result<AliasTable, CliError> {
        let mut t = crate::stdlib::alias_table();
        if let Some(p) = &self.aliases {
            t.merge(&AliasTable::from_manifest(p)?);
        }
        Ok(t)
    }

    fn config(&self, r: &mut Report) {
        r.add("fuel", self.fuel);
        r.add("quantum", self.quantum);
        r.add("admission", self.admission);
        r.add("enum-cap", self.enum_cap);
    }

    pub fn run(&self) -> Result<Outcome, CliError> {
        let mut r = Report::new(self.format);
        let code = match &self.command {
            Command::Eval { path } => self.eval(path, &mut r)?,
            Command::Compile { path } => {
                let Input::Statement(s) = load(path)? else { return Err(CliError::Extension(path.display().to_string())) };
                let unit = compile(&s, &self.alias_table()?)?;
                return Ok(Outcome { text: format!("{}\n", unit.program.source), code: EXIT_TRUE });
            }
            Command::Reverse { path } => {
                let p = load_program(path)?;
                return Ok(Outcome { text: format!("{}\n", reverse(&p)?), code: EXIT_TRUE });
            }
            Command::Trace { path, output } => {
                let p = load_program(path)?;
                if p.arity != 0 {
                    return Err(CliError::NotClosed(p.arity));
                }
                match emit_trace(&p, &[], self.fuel).expect("arity 0") {
                    TraceOutcome::Trace(t) => {
                        let text = t.serialize();
                        match output {
                            Some(o) => {
                                std::fs::write(o, format!("{text}\n"))
                                    .map_err(|source| CliError::Io { path: o.display().to_string(), source })?;
                                r.add("trace", o.display());
                                r.add("frames", t.frames.len());
                            }
                            None => return Ok(Outcome { text: format!("{text}\n"), code: EXIT_TRUE }),
                        }
                        EXIT_TRUE
                    }
                    TraceOutcome::OutOfFuel(f) => {
                        r.add("verdict", "NO-HALT-WITHIN-BUDGET");
                        r.add("steps", f);
                        self.config(&mut r);
                        EXIT_BUDGET
                    }
                }
            }
            Command::Verify { program, trace } => {
                let p = load_program(program)?;
                let witness = read(trace)?;
                let witness = witness.strip_suffix('\n').unwrap_or(&witness).to_string();
                match check_trace(&TraceCertificate::new(&p, witness)) {
                    CheckResult::Accepted => {
                        r.add("result", "accepted");
                        EXIT_TRUE
                    }
                    CheckResult::Rejected(why) => {
                        r.add("result", "rejected");
                        r.add("reason", format!("{why:?}"));
                        EXIT_FALSE
                    }
                }
            }
            Command::Enum { index, rank } => {
                let text = match (index, rank) {
                    (_, Some(p)) => {
                        let src = read(p)?;
                        let src = src.strip_suffix('\n').unwrap_or(&src);
                        rank_program(src)?.to_string()
                    }
                    (Some(i), None) => nth_program_with_cap(i, self.enum_cap as usize)?,
                    (None, None) => unreachable!("clap requires one"),
                };
                return Ok(Outcome { text: format!("{text}\n"), code: EXIT_TRUE });
            }
            Command::Name { name } => {
                match classify_name(name) {
                    Classified::Numeral(n) => {
                        r.add("kind", "numeral");
                        r.add("value", n);
                        r.add("dimension", 0);
                    }
                    Classified::RName(i) => {
                        let src = nth_program_with_cap(&i, self.enum_cap as usize)?;
                        let arity = parse_program(&src).map(|p| p.arity).expect("enumerated programs parse");
                        r.add("kind", "relation");
                        r.add("index", i);
                        r.add("dimension", arity);
                        r.add("program", format!("{src:?}"));
                    }
                    Classified::Invalid => {
                        r.add("kind", "invalid");
                        return Ok(Outcome { text: r.render(), code: EXIT_FALSE });
                    }
                }
                EXIT_TRUE
            }
        };
        Ok(Outcome { text: r.render(), code })
    }

    fn eval(&self, path: &Path, r: &mut Report) -> Result<i32, CliError> {
        let code = match load(path)? {
            Input::Program(p) => {
                if p.arity != 0 {
                    return Err(CliError::NotClosed(p.arity));
                }
                r.add("kind", "program");
                match crate::lcore::run(&p, &[], self.fuel).expect("arity 0") {
                    Verdict::Halted(s) => {
                        r.add("verdict", "TRUE");
                        r.add("steps", s);
                        EXIT_TRUE
                    }
                    Verdict::OutOfFuel(f) => {
                        r.add("verdict", "NO-HALT-WITHIN-BUDGET");
                        r.add("steps", f);
                        EXIT_BUDGET
                    }
                }
            }
            Input::Statement(s) => {
                r.add("kind", "statement");
                let opts = EvalOptions::with_fuel(self.fuel);
                let res = eval_ref_with(&s, &BTreeMap::new(), &self.alias_table()?, &opts)?;
                let (verdict, code) = match res.verdict {
                    RefVerdict::True => ("TRUE", EXIT_TRUE),
                    RefVerdict::False => ("FALSE", EXIT_FALSE),
                    RefVerdict::Unknown(_) => ("NO-HALT-WITHIN-BUDGET", EXIT_BUDGET),
                };
                r.add("verdict", verdict);
                r.add("steps", res.spent);
                if let Some(w) = res.witness {
                    r.add("witness", w);
                }
                code
            }
        };
        self.config(r);
        Ok(code)
    }
}

/// Parses `args` (program name first) and runs the command.
pub fn main_with<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_ERROR } else { EXIT_TRUE };
            return Outcome { text: e.render().to_string(), code };
        }
    };
    match cli.run() {
        Ok(o) => o,
        Err(e) => Outcome { text: format!("error: {e}\n"), code: EXIT_ERROR },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::naming::godel_encode;

    fn file(dir: &tempfile::TempDir, name: &str, text: &str) -> String {
        let p = dir.path().join(name);
        std::fs::write(&p, text).unwrap();
        p.display().to_string()
    }

    fn cli(args: &[&str]) -> Outcome {
        main_with(std::iter::once("tvl").chain(args.iter().copied()))
    }

    #[test]
    fn eval_examples() {
        let d = tempfile::tempdir().unwrap();
        let halt = file(&d, "halt.l", "args 0; halt;");
        let o = cli(&["eval", &halt]);
        assert_eq!(o.code, EXIT_TRUE);
        assert!(o.text.contains("TRUE") && o.text.contains("steps:     1"), "{}", o.text);
        let ex = file(&d, "ex.ls", "# witness 3\nexists x : x + 2 = 5\n");
        let o = cli(&["eval", "--format", "structured", &ex]);
        assert_eq!(o.code, EXIT_TRUE);
        assert!(o.text.contains("verdict=TRUE\n") && o.text.contains("witness=3\n"), "{}", o.text);
        let f = file(&d, "f.ls", "1 = 2");
        assert_eq!(cli(&["eval", &f]).code, EXIT_FALSE);
        let u = file(&d, "u.ls", "NUMBER(R0)");
        let o = cli(&["eval", "--fuel", "1000", "--format", "structured", &u]);
        assert_eq!(o.code, EXIT_BUDGET);
        assert!(o.text.contains("verdict=NO-HALT-WITHIN-BUDGET\n") && o.text.contains("fuel=1000\n"));
    }

    #[test]
    fn structured_output_is_stable() {
        let d = tempfile::tempdir().unwrap();
        let ex = file(&d, "ex.ls", "exists x : x = R1 or x = 2");
        let a = cli(&["eval", "--format", "structured", &ex]);
        let b = cli(&["eval", "--format", "structured", &ex]);
        assert_eq!(a, b);
    }

    #[test]
    fn compile_and_reverse() {
        let d = tempfile::tempdir().unwrap();
        let s = file(&d, "s.ls", "2 + 2 = 4");
        let o = cli(&["compile", &s]);
        assert_eq!(o.code, EXIT_TRUE);
        let p = parse_program(o.text.trim_end()).unwrap();
        assert!(crate::lcore::run(&p, &[], 10_000).unwrap().halted());
        let neg = file(&d, "n.ls", "!(x = x)");
        let o = cli(&["compile", &neg]);
        assert_eq!(o.code, EXIT_ERROR);
        assert!(o.text.contains("forbidden connective"), "{}", o.text);
        let h = file(&d, "h.l", "args 0; halt;");
        let g = godel_encode("args 0; halt;").unwrap();
        assert_eq!(cli(&["reverse", &h]).text, format!("exists x : EXEC_SEQ({g}, x)\n"));
        let open = file(&d, "o.l", "args 1; halt;");
        assert_eq!(cli(&["reverse", &open]).code, EXIT_ERROR);
    }

    #[test]
    fn trace_and_verify() {
        let d = tempfile::tempdir().unwrap();
        let h = file(&d, "h.l", "args 0; x = \"a\"; halt;");
        let t = d.path().join("h.trace").display().to_string();
        assert_eq!(cli(&["trace", &h, "-o", &t]).code, EXIT_TRUE);
        let o = cli(&["verify", &h, &t]);
        assert_eq!(o.code, EXIT_TRUE, "{}", o.text);
        let text = std::fs::read_to_string(&t).unwrap().replace("x=\"a\"|", "x=\"b\"|");
        let bad = file(&d, "bad.trace", &text);
        let o = cli(&["verify", "--format", "structured", &h, &bad]);
        assert_eq!(o.code, EXIT_FALSE);
        assert!(o.text.contains("reason=InvalidStep(1)"), "{}", o.text);
        let l = file(&d, "l.l", "args 0; while \"\" == \"\" {}");
        assert_eq!(cli(&["trace", "--fuel", "100", &l]).code, EXIT_BUDGET);
    }

    #[test]
    fn enum_examples() {
        let d = tempfile::tempdir().unwrap();
        assert_eq!(cli(&["enum", "0"]).text, "args 1;\n");
        let a = file(&d, "a.l", "args 1;");
        assert_eq!(cli(&["enum", "--rank", &a]).text, "0\n");
        let h = file(&d, "h.l", "args 0; halt;");
        let o = cli(&["enum", "--rank", &h]);
        assert_eq!(o.code, EXIT_ERROR);
        assert!(o.text.contains("not a relation program"));
        assert_eq!(cli(&["enum", "--enum-cap", "7", "9"]).code, EXIT_ERROR);
    }

    #[test]
    fn names_and_usage() {
        let o = cli(&["name", "--format", "structured", "R0"]);
        assert!(o.text.contains("program=\"args 1;\"") && o.text.contains("dimension=1"), "{}", o.text);
        assert_eq!(cli(&["name", "007"]).code, EXIT_FALSE);
        assert_eq!(cli(&["bogus"]).code, EXIT_ERROR);
        assert_eq!(cli(&["eval", "--fuel", "0", "x.l"]).code, EXIT_ERROR);
        assert_eq!(cli(&["eval", "missing.l"]).code, EXIT_ERROR);
        assert_eq!(cli(&["eval", "x.txt"]).code, EXIT_ERROR);
    }

    #[test]
    fn aliases_manifest_extends_the_table() {
        let d = tempfile::tempdir().unwrap();
        file(&d, "one.l", "args 1; if arg1 != \"1\" { while \"\" == \"\" {} }");
        let m = file(&d, "m.txt", "ONE = one.l | 1 | halts on 1\n");
        let s = file(&d, "s.ls", "ONE(1)");
        assert_eq!(cli(&["eval", "--aliases", &m, &s]).code, EXIT_TRUE);
        assert_eq!(cli(&["eval", &s]).code, EXIT_ERROR);
    }
}
