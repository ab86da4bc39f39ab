//! `feqlab`: catalog, solve, audit, perturb and stability runs from the
//! command line.
//!
//! Exit codes: 0 every check passed, 2 a check failed (completeness
//! mismatch, audit or bound violation), 3 numerically ambiguous rank,
//! 4 invalid configuration.

mod commands;
mod config;
mod select;

use std::fmt::Display;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, CommandFactory, FromArgMatches, Parser, Subcommand};
use feqlab::report::{CsvTable, Record};

#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    pub fn invalid(e: impl Display) -> Self {
        Self { code: 4, message: e.to_string() }
    }

    pub fn ambiguous(e: impl Display) -> Self {
        Self { code: 3, message: e.to_string() }
    }
}

#[derive(Parser, Debug)]
#[command(name = "feqlab", version, about = "Wilson and d'Alembert type functional equations with an involution")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// List supported groups, or the involutions and characters of one group.
    Catalog(commands::CatalogArgs),
    /// Solve the Wilson variant by linear algebra and compare with the
    /// closed-form families (σ an automorphism).
    Solve(commands::SolveArgs),
    /// Check the structural identities of exact solutions for an
    /// anti-automorphism σ.
    Audit(commands::AuditArgs),
    /// Perturb an exact pair with seeded noise and report the residual.
    Perturb(commands::PerturbArgs),
    /// Audit the δ-inequalities on perturbed pairs, or run a growth
    /// experiment on balls.
    Stability(commands::StabilityArgs),
}

#[derive(Args, Debug, Clone)]
pub struct OutputArgs {
    /// Flat `key = value` file; every flag has a twin key, flags win.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// JSON-lines report, one record per check (default: stdout).
    #[arg(long)]
    pub report: Option<PathBuf>,
    /// CSV tables (default: stdout, after the report).
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

/// Everything a command emits, written once at the end.
#[derive(Default)]
pub struct Output {
    pub records: Vec<Record>,
    pub tables: Vec<CsvTable>,
}

impl Output {
    fn write(&self, args: &OutputArgs) -> Result<(), CliError> {
        let report: String = self.records.iter().map(|r| r.render() + "\n").collect();
        let csv = self.tables.iter().map(CsvTable::render).collect::<Vec<_>>().join("\n");
        let save = |path: &PathBuf, body: &str| {
            std::fs::write(path, body).map_err(|e| CliError::invalid(format!("cannot write {}: {e}", path.display())))
        };
        let mut stdout = String::new();
        match &args.report {
            Some(p) => save(p, &report)?,
            None => stdout.push_str(&report),
        }
        match &args.csv {
            Some(p) => save(p, &csv)?,
            None if !csv.is_empty() => {
                if !stdout.is_empty() {
                    stdout.push('\n');
                }
                stdout.push_str(&csv);
            }
            None => {}
        }
        let mut lock = std::io::stdout().lock();
        lock.write_all(stdout.as_bytes()).and_then(|_| lock.flush()).map_err(CliError::invalid)
    }
}

fn threads_from_env() -> Result<(), CliError> {
    if let Ok(v) = std::env::var("FEQLAB_THREADS") {
        let n: usize = v
            .trim()
            .parse()
            .ok()
            .filter(|&n| n > 0)
            .ok_or_else(|| CliError::invalid(format!("FEQLAB_THREADS must be a positive integer, got `{v}`")))?;
        feqlab::configure_threads(n);
    }
    Ok(())
}

fn run() -> Result<u8, CliError> {
    threads_from_env()?;
    let cmd = Cli::command().mut_subcommands(|s| s.args_override_self(true));
    let args = config::merge(&cmd, std::env::args_os().collect())?;
    let matches = match cmd.try_get_matches_from(args) {
        Ok(m) => m,
        Err(e) if e.use_stderr() => {
            let _ = e.print();
            return Err(CliError { code: 4, message: String::new() });
        }
        Err(e) => {
            let _ = e.print();
            return Ok(0);
        }
    };
    let cli = Cli::from_arg_matches(&matches).map_err(CliError::invalid)?;
    let mut out = Output::default();
    let (status, output_args) = match &cli.command {
        Command::Catalog(a) => (commands::catalog(a, &mut out)?, &a.output),
        Command::Solve(a) => (commands::solve(a, &mut out)?, &a.output),
        Command::Audit(a) => (commands::audit(a, &mut out)?, &a.output),
        Command::Perturb(a) => (commands::perturb(a, &mut out)?, &a.output),
        Command::Stability(a) => (commands::stability(a, &mut out)?, &a.output),
    };
    out.write(output_args)?;
    Ok(status)
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            if !e.message.is_empty() {
                eprintln!("error: {}", e.message);
            }
            ExitCode::from(e.code)
        }
    }
}
