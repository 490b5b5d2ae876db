use std::io::{self, Write};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use sumprod_cli::{bench, extremal, oracle, sweep, verify, EXIT_USAGE};

/// Sum-product experiments over prime fields.
#[derive(Parser)]
#[command(name = "sumprod", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the certified argument on one set and print its JSON trace.
    Verify(verify::VerifyArgs),
    /// Tabulate sum-product exponents across families and sizes as CSV.
    Sweep(sweep::SweepArgs),
    /// Check kernels and exact inequalities on seeded random instances.
    OracleSuite(oracle::OracleArgs),
    /// Local search for sets with small max(|A+A|, |AA|).
    Extremal(extremal::ExtremalArgs),
    /// Time the fast kernels against direct enumeration.
    Bench(bench::BenchArgs),
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE as u8 } else { 0 });
        }
    };
    let stdout = io::stdout();
    let mut out = stdout.lock();
    let result = match &cli.command {
        Command::Verify(a) => verify::run(a, &mut out),
        Command::Sweep(a) => sweep::run(a, &mut out),
        Command::OracleSuite(a) => oracle::run(a, &mut out),
        Command::Extremal(a) => extremal::run(a, &mut out),
        Command::Bench(a) => bench::run(a, &mut out),
    };
    let _ = out.flush();
    match result {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_USAGE as u8)
        }
    }
}
