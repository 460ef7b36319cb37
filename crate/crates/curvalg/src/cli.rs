//! Command-line front end. JSON goes to stdout or `--out`; diagnostics go
//! to stderr.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use curvalg_core::combinatorics::{all_matrices, IntMatrix};
use curvalg_core::convolution::{compose, is_associative, schur_structure_constants};
use curvalg_core::Error;
use serde::Serialize;

use crate::format::{parse_operator, write_operator, FormatError};
use crate::report::{now, Report};
use crate::suites::{self, RunConfig, SuiteError};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_CONSISTENCY: i32 = 3;
pub const EXIT_USAGE: i32 = 4;

#[derive(Parser, Debug)]
#[command(name = "curvalg", version, about = "Convolution operators, Schur algebras and elliptic r-matrices")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Structure constants of the Schur algebra S(n, d) with an associativity verdict.
    Schur {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compose two operator files; the first is applied first.
    Compose {
        first: PathBuf,
        second: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a verification suite and print its report.
    Verify {
        /// One of tau, express, bruhat, orbits, heisenberg, w, cybe, automorphy, en.
        suite: String,
        #[command(flatten)]
        params: Params,
    },
}

#[derive(Args, Debug)]
struct Params {
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    d: Option<u32>,
    #[arg(long, allow_hyphen_values = true)]
    c: Option<i64>,
    /// Period as "re,im".
    #[arg(long, value_parser = parse_pair, allow_hyphen_values = true)]
    tau: Option<[f64; 2]>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    tol: Option<f64>,
    /// Relative cutoff for theta series.
    #[arg(long)]
    trunc: Option<f64>,
    /// JSON run configuration; flags override its fields.
    #[arg(long = "in")]
    input: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_pair(s: &str) -> Result<[f64; 2], String> {
    let (re, im) = s.split_once(',').ok_or_else(|| format!("expected \"re,im\", got {s:?}"))?;
    let part = |x: &str| x.trim().parse::<f64>().map_err(|e| format!("{x:?}: {e}"));
    Ok([part(re)?, part(im)?])
}

/// A failure with its exit code.
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn new(code: i32, message: impl Into<String>) -> Self {
        Self { code, message: message.into() }
    }
}

fn core_failure(e: Error) -> Failure {
    Failure::new(EXIT_CONSISTENCY, e.to_string())
}

fn emit(text: &str, out: Option<&Path>) -> Result<(), Failure> {
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| Failure::new(EXIT_CONSISTENCY, format!("cannot write {}: {e}", p.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes()).and_then(|_| stdout.flush()).map_err(|e| Failure::new(EXIT_CONSISTENCY, e.to_string()))
        }
    }
}

/// Runs the command line and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_PASS };
        }
    };
    let result = match cli.command {
        Command::Schur { n, d, out } => schur(n, d, out.as_deref()),
        Command::Compose { first, second, out } => compose_files(&first, &second, out.as_deref()),
        Command::Verify { suite, params } => verify(&suite, params),
    };
    match result {
        Ok(code) => code,
        Err(f) => {
            eprintln!("curvalg: {}", f.message);
            f.code
        }
    }
}

#[derive(Serialize)]
struct SchurEntry {
    a: Vec<Vec<u32>>,
    b: Vec<Vec<u32>>,
    c: Vec<Vec<u32>>,
    value: String,
}

#[derive(Serialize)]
struct SchurTable {
    n: usize,
    d: u32,
    basis_size: usize,
    basis: Vec<Vec<Vec<u32>>>,
    /// Nonzero `c^C_AB` with `Delta(A) Delta(B) = sum_C c^C_AB Delta(C)`, `A` applied first.
    constants: Vec<SchurEntry>,
    associative: bool,
}

fn rows(a: &IntMatrix) -> Vec<Vec<u32>> {
    a.rows().map(<[u32]>::to_vec).collect()
}

fn schur(n: usize, d: u32, out: Option<&Path>) -> Result<i32, Failure> {
    if !(1..=3).contains(&n) || d > 4 {
        return Err(Failure::new(EXIT_CONSISTENCY, format!("schur supports 1 <= n <= 3 and d <= 4, got n = {n}, d = {d}")));
    }
    let table = schur_structure_constants(n, d).map_err(core_failure)?;
    let associative = is_associative(n, d, &table);
    let basis: Vec<_> = all_matrices(n, d).iter().map(rows).collect();
    let constants = table
        .iter()
        .map(|((a, b, c), v)| SchurEntry { a: rows(a), b: rows(b), c: rows(c), value: v.to_string() })
        .collect();
    let doc = SchurTable { n, d, basis_size: basis.len(), basis, constants, associative };
    let mut text = serde_json::to_string_pretty(&doc).expect("plain data serializes");
    text.push('\n');
    emit(&text, out)?;
    Ok(if associative { EXIT_PASS } else { EXIT_FAIL })
}

fn read_operator(path: &Path) -> Result<curvalg_core::convolution::ConvOperator, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::new(EXIT_PARSE, format!("cannot read {}: {e}", path.display())))?;
    parse_operator(&text).map_err(|e| {
        let code = match e {
            FormatError::Syntax(_) => EXIT_PARSE,
            FormatError::Content(_) => EXIT_CONSISTENCY,
        };
        Failure::new(code, format!("{}: {e}", path.display()))
    })
}

fn compose_files(first: &Path, second: &Path, out: Option<&Path>) -> Result<i32, Failure> {
    let x = read_operator(first)?;
    let y = read_operator(second)?;
    if x.ground() != y.ground() {
        return Err(Failure::new(
            EXIT_CONSISTENCY,
            format!("ground mismatch: {} is on {}, {} is on {}", first.display(), x.ground().name(), second.display(), y.ground().name()),
        ));
    }
    let z = compose(&x, &y).map_err(core_failure)?;
    let text = write_operator(&z).map_err(|e| Failure::new(EXIT_CONSISTENCY, e.to_string()))?;
    emit(&text, out)?;
    Ok(EXIT_PASS)
}

fn verify(suite: &str, p: Params) -> Result<i32, Failure> {
    let flags = RunConfig { n: p.n, d: p.d, c: p.c, tau: p.tau, seed: p.seed, tol: p.tol, trunc: p.trunc };
    let cfg = match &p.input {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| Failure::new(EXIT_PARSE, format!("cannot read {}: {e}", path.display())))?;
            let base: RunConfig =
                serde_json::from_str(&text).map_err(|e| Failure::new(EXIT_PARSE, format!("{}: malformed run configuration: {e}", path.display())))?;
            base.overlay(&flags)
        }
        None => flags,
    };
    let outcome = suites::run(suite, &cfg).map_err(|e| match e {
        SuiteError::Usage(m) => Failure::new(EXIT_USAGE, m),
        SuiteError::Consistency(m) => Failure::new(EXIT_CONSISTENCY, m),
    })?;
    let report = Report::new(suite, outcome.parameters, outcome.tolerances, outcome.truncation, outcome.checks, now());
    for c in report.checks.iter().filter(|c| !c.pass) {
        eprintln!("curvalg: {suite}: {} failed (residual {:e}, tolerance {:e})", c.name, c.residual, c.tolerance);
    }
    emit(&report.to_json(), p.out.as_deref())?;
    Ok(if report.pass { EXIT_PASS } else { EXIT_FAIL })
}
