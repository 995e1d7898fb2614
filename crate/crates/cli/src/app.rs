//! Command-line front end. [`run`] returns the process exit code so tests
//! can drive it without spawning a process.

use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use annih_core::annihilator::{annihilate, determination, AnnihilateOptions, Engine};
use annih_core::oracle::{verify_seeded, PrecisionConfig};
use annih_core::resultants::{leading_coefficient_check, discriminant};
use annih_core::shape::Equation;
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::corpus::{format_table, load_corpus, run_corpus, CaseStatus};
use crate::document::{terms_of, OperatorDocument, VerificationDoc};
use crate::parse::parse_equation;

pub const EXIT_PARSE: i32 = 2;
pub const EXIT_COMPUTE: i32 = 3;
pub const EXIT_VERIFY: i32 = 4;

/// Environment variable overriding the default oracle precision.
pub const PRECISION_ENV: &str = "ANNIH_PRECISION_BITS";

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "annih", version, about = "Minimal annihilating operators for branches of y^m + ... + x = 0")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Debug, Subcommand)]
enum Cmd {
    /// Number of independent branch germs at a generic point.
    Determination { equation: String },
    /// Compute the minimal-order annihilating operator.
    Annihilate {
        equation: String,
        /// Gröbner basis construction: buchberger or cauchy.
        #[arg(long, default_value = "cauchy")]
        gb: Engine,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        /// Check the operator numerically on every branch.
        #[arg(long)]
        verify: bool,
        /// Working precision in bits for --verify.
        #[arg(long)]
        precision: Option<u32>,
        /// Number of random points for --verify.
        #[arg(long, default_value_t = 3)]
        draws: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Discriminant of the equation in y.
    Discriminant {
        equation: String,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Divisibility of the leading coefficient by the discriminant, and the
    /// support of the cofactor against the lowest coefficient.
    Conjecture {
        equation: String,
        #[arg(long, default_value = "cauchy")]
        gb: Engine,
    },
    /// Golden corpus operations.
    Corpus {
        #[command(subcommand)]
        cmd: CorpusCmd,
    },
}

#[derive(Debug, Subcommand)]
enum CorpusCmd {
    /// Run every case under DIR and print a pass/fail table.
    Run {
        dir: PathBuf,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        /// Also run cases marked slow.
        #[arg(long)]
        include_slow: bool,
    },
}

fn precision(flag: Option<u32>) -> Result<u32, String> {
    if let Some(bits) = flag {
        return Ok(bits);
    }
    match std::env::var(PRECISION_ENV) {
        Ok(v) => v.trim().parse().map_err(|_| format!("{PRECISION_ENV}={v} is not a bit count")),
        Err(_) => Ok(PrecisionConfig::default().bits),
    }
}

fn parse_or_report(text: &str, err: &mut dyn Write) -> Result<Equation, i32> {
    parse_equation(text).map_err(|e| {
        let _ = writeln!(err, "error: {e}\n  {text}\n  {:>w$}", "^", w = e.pos + 1);
        EXIT_PARSE
    })
}

macro_rules! compute {
    ($err:expr, $e:expr) => {
        match $e {
            Ok(v) => v,
            Err(e) => {
                let _ = writeln!($err, "error: {e}");
                return EXIT_COMPUTE;
            }
        }
    };
}

/// Runs the CLI on `args` (including the program name).
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_PARSE } else { 0 };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { write!(err, "{text}") } else { write!(out, "{text}") };
            return code;
        }
    };
    match cli.cmd {
        Cmd::Determination { equation } => {
            let eq = match parse_or_report(&equation, err) {
                Ok(eq) => eq,
                Err(code) => return code,
            };
            let _ = writeln!(out, "{}", determination(&eq.shape));
            0
        }
        Cmd::Annihilate { equation, gb, format, verify, precision: bits, draws, seed } => {
            let eq = match parse_or_report(&equation, err) {
                Ok(eq) => eq,
                Err(code) => return code,
            };
            let cfg = PrecisionConfig::with_bits(compute!(err, precision(bits)));
            if verify {
                compute!(err, cfg.validate());
            }
            let start = Instant::now();
            let (op, report) = compute!(err, annihilate(&eq, &AnnihilateOptions { engine: gb }));
            let ms = start.elapsed().as_millis() as u64;
            let mut doc = OperatorDocument::new(&eq.to_text(), &op, Some(&report), ms);
            let mut failed = false;
            if verify {
                let reports = compute!(err, verify_seeded(&op, &eq, draws, seed, &cfg));
                failed = reports.iter().any(|r| !r.passed);
                doc.verification = reports.iter().map(VerificationDoc::from).collect();
            }
            match format {
                Format::Json => {
                    let _ = writeln!(out, "{}", doc.to_json());
                }
                Format::Text => {
                    let _ = writeln!(out, "{op}");
                    for w in &report.warnings {
                        let _ = writeln!(err, "warning: {w}");
                    }
                    for v in &doc.verification {
                        let point: Vec<String> = v.point.iter().map(|(n, q)| format!("{n}={q}")).collect();
                        let _ = writeln!(
                            out,
                            "verify {}: max residual {:.3e} (tol {:.0e}, {} bits{}) {}",
                            point.join(", "),
                            v.max_residual,
                            v.tolerance,
                            v.bits,
                            if v.retried { ", retried" } else { "" },
                            if v.passed { "PASS" } else { "FAIL" }
                        );
                    }
                }
            }
            if failed {
                EXIT_VERIFY
            } else {
                0
            }
        }
        Cmd::Discriminant { equation, format } => {
            let eq = match parse_or_report(&equation, err) {
                Ok(eq) => eq,
                Err(code) => return code,
            };
            let d = compute!(err, discriminant(&eq));
            match format {
                Format::Text => {
                    let _ = writeln!(out, "{d}");
                }
                Format::Json => {
                    let doc = json!({
                        "equation": eq.to_text(),
                        "vars": d.context().names(),
                        "discriminant": terms_of(&d),
                    });
                    let _ = writeln!(out, "{}", serde_json::to_string_pretty(&doc).unwrap());
                }
            }
            0
        }
        Cmd::Conjecture { equation, gb } => {
            let eq = match parse_or_report(&equation, err) {
                Ok(eq) => eq,
                Err(code) => return code,
            };
            let (op, _) = compute!(err, annihilate(&eq, &AnnihilateOptions { engine: gb }));
            let d = compute!(err, discriminant(&eq));
            let rep = compute!(err, leading_coefficient_check(&op, &d));
            let _ = writeln!(out, "order: {}", op.order());
            let _ = writeln!(out, "lowest coefficient: p_{} ({} terms)", op.low(), rep.low_terms);
            let _ = writeln!(out, "leading coefficient divisible by discriminant: {}", rep.divisible);
            if let Some(c) = &rep.cofactor {
                let _ = writeln!(out, "cofactor: {} terms, total degree {}", rep.cofactor_terms, c.total_degree());
            }
            let _ = writeln!(out, "cofactor support equals lowest coefficient support: {}", rep.support_equal);
            0
        }
        Cmd::Corpus { cmd: CorpusCmd::Run { dir, jobs, include_slow } } => {
            let cases = compute!(err, load_corpus(&dir));
            let results = run_corpus(&cases, jobs, include_slow);
            let _ = write!(out, "{}", format_table(&results));
            if results.iter().any(|r| matches!(r.status, CaseStatus::Fail(_))) {
                EXIT_VERIFY
            } else {
                0
            }
        }
    }
}
