//! Command-line front end: JSON documents, reports, and the subcommands.
//!
//! Exit codes: 0 every check passed, 1 a check failed, 2 usage or format
//! error, 3 nothing failed but some check was inconclusive.

pub mod commands;
pub mod formats;
pub mod report;

use clap::Parser;
use commands::{execute, Cli, Failure};
use report::{Check, ReportDocument, Status};
use std::io::Write;

/// Environment variable setting the worker thread count.
pub const THREADS_VAR: &str = "BIPENCIL_THREADS";

pub const EXIT_USAGE: i32 = 2;

fn configure_threads() -> Result<(), String> {
    let Ok(value) = std::env::var(THREADS_VAR) else {
        return Ok(());
    };
    let n: usize = value.trim().parse().map_err(|_| format!("{THREADS_VAR}={value} is not a thread count"))?;
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| e.to_string())
}

/// Parses `argv`, runs the subcommand, writes the report to `out` and the
/// table (or error) to `err`, and returns the exit code.
pub fn run(argv: &[String], out: &mut impl Write, err: &mut impl Write) -> i32 {
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(err, "{}", e.render());
            return if e.use_stderr() { EXIT_USAGE } else { 0 };
        }
    };
    if let Err(msg) = configure_threads() {
        let _ = writeln!(err, "error: {msg}");
        return EXIT_USAGE;
    }
    let name = cli.command.name();
    let mut report = ReportDocument::new(name, &argv[1.min(argv.len())..]);
    match execute(&cli.command, &mut report) {
        Ok(Some(document)) => {
            let _ = writeln!(out, "{document}");
            return 0;
        }
        Ok(None) => {}
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            return EXIT_USAGE;
        }
        Err(Failure::Precondition(e)) => {
            report.check(Check::new(format!("{name} preconditions"), Status::Fail).detail(e.to_string()));
        }
    }
    report.finish();
    let _ = writeln!(out, "{}", report.to_json());
    let _ = write!(err, "{}", report.table());
    report.status.exit_code()
}
