mod scenario;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::Serialize;

use crorbit::congruence::{moduli_space, theorem_b_congruent};
use crorbit::exec::Exec;
use crorbit::verify::{run, Suite, VerifyConfig};
use crorbit::Error;

use scenario::{load, LoadError, Resolved};

const EX_NOT_CR: u8 = 3;
const EX_USAGE: u8 = 64;
const EX_DATAERR: u8 = 65;
const EX_INVALID: u8 = 66;
const EX_SOFTWARE: u8 = 70;

/// Homogeneous CR orbits in complex hyperbolic space.
#[derive(Debug, Parser)]
#[command(name = "crorbit", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Classify the orbit described by a scenario file.
    Classify { file: PathBuf },
    /// Decide whether two CR orbits are congruent.
    Congruent { first: PathBuf, second: PathBuf },
    /// Print the moduli space of congruence classes in CH^n.
    Moduli {
        #[arg(long, allow_negative_numbers = true)]
        n: i64,
    },
    /// Run a verification suite.
    Verify {
        #[arg(long)]
        suite: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        trials: Option<u64>,
        /// Run trials on one thread.
        #[arg(long)]
        sequential: bool,
    },
}

fn emit<T: Serialize>(value: &T) {
    let mut out = std::io::stdout().lock();
    // a closed stdout is not worth a panic
    let _ = serde_json::to_writer_pretty(&mut out, value).map(|_| writeln!(out));
}

fn fail(code: u8, msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(code)
}

fn error_code(e: &Error) -> u8 {
    match e {
        Error::Inconsistent(_) => EX_SOFTWARE,
        _ => EX_INVALID,
    }
}

fn load_or_exit(path: &Path) -> Result<Resolved, ExitCode> {
    load(path).map_err(|e| {
        let code = match &e {
            LoadError::Syntax(_) => EX_DATAERR,
            LoadError::Invalid(inner) => error_code(inner),
            LoadError::Read(_) | LoadError::Shape(_) => EX_INVALID,
        };
        fail(code, format!("{}: {e}", path.display()))
    })
}

fn classify(path: &Path) -> ExitCode {
    let resolved = match load_or_exit(path) {
        Ok(r) => r,
        Err(code) => return code,
    };
    match scenario::classify(resolved) {
        Ok(report) => {
            for d in &report.diagnostics {
                eprintln!("note: {d}");
            }
            emit(&report);
            if report.orbit.is_cr {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(EX_NOT_CR)
            }
        }
        Err(e) => fail(error_code(&e), e),
    }
}

fn congruent(first: &Path, second: &Path) -> ExitCode {
    let (q1, q2) = match (load_or_exit(first), load_or_exit(second)) {
        (Ok(a), Ok(b)) => (a.query, b.query),
        (Err(code), _) | (_, Err(code)) => return code,
    };
    match theorem_b_congruent(&q1, &q2) {
        Ok(verdict) => {
            eprintln!("note: {}", verdict.reason);
            emit(&verdict);
            ExitCode::from(u8::from(!verdict.congruent))
        }
        Err(e) => fail(error_code(&e), e),
    }
}

fn moduli(n: i64) -> ExitCode {
    let n = match usize::try_from(n) {
        Ok(n) => n,
        Err(_) => return fail(EX_INVALID, format!("n = {n} must be at least 2")),
    };
    match moduli_space(n) {
        Ok(components) => {
            emit(&components);
            ExitCode::SUCCESS
        }
        Err(e) => fail(EX_INVALID, e),
    }
}

fn verify(suite: &str, seed: u64, trials: Option<u64>, sequential: bool) -> ExitCode {
    let suite: Suite = match suite.parse() {
        Ok(s) => s,
        Err(e) => return fail(EX_USAGE, e),
    };
    let config = VerifyConfig {
        seed,
        trials,
        exec: if sequential {
            Exec::Sequential
        } else {
            Exec::Parallel
        },
    };
    let report = run(suite, &config);
    for p in report.properties.iter().filter(|p| !p.pass) {
        eprintln!(
            "FAIL {}/{}: {} of {} trials, max residual {:.3e} (tolerance {:.0e}){}",
            p.suite,
            p.property,
            p.failed,
            p.trials,
            p.max_residual,
            p.tolerance,
            p.note
                .as_ref()
                .map(|n| format!(": {n}"))
                .unwrap_or_default()
        );
    }
    emit(&report);
    ExitCode::from(u8::from(!report.all_pass))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EX_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match cli.command {
        Command::Classify { file } => classify(&file),
        Command::Congruent { first, second } => congruent(&first, &second),
        Command::Moduli { n } => moduli(n),
        Command::Verify {
            suite,
            seed,
            trials,
            sequential,
        } => verify(&suite, seed, trials, sequential),
    }
}
