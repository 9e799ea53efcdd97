//! Command-line front end: argument parsing, JSON reports and the reference corpus.

pub mod commands;
pub mod corpus;
pub mod report;

use std::ffi::OsString;
use std::io::Write;
use std::panic::{catch_unwind, AssertUnwindSafe};

use clap::Parser;

use commands::{execute, Cli};
use report::{CliError, ErrorBody, ErrorKind, ErrorReport, SCHEMA_VERSION};

/// Runs the CLI on `argv` and returns the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { ErrorKind::Input.exit_code() } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let outcome = catch_unwind(AssertUnwindSafe(|| execute(&cli)))
        .unwrap_or_else(|_| Err(CliError::internal("internal invariant breach (panic)")));
    match outcome.and_then(|(report, out)| Ok((serde_json::to_string_pretty(&report)?, out))) {
        Ok((json, out)) => match emit(&cli, &json) {
            Ok(()) => {
                eprintln!("{}", out.summary);
                out.exit_code
            }
            Err(e) => fail(&cli, e),
        },
        Err(e) => fail(&cli, e),
    }
}

fn emit(cli: &Cli, json: &str) -> Result<(), CliError> {
    match &cli.output {
        Some(path) => std::fs::write(path, format!("{json}\n"))
            .map_err(|e| CliError::input(format!("cannot write {}: {e}", path.display()))),
        None => {
            let mut out = std::io::stdout().lock();
            writeln!(out, "{json}").map_err(|e| CliError::internal(e.to_string()))
        }
    }
}

fn fail(cli: &Cli, e: CliError) -> i32 {
    let report = ErrorReport {
        schema_version: SCHEMA_VERSION,
        command: cli.command.name().into(),
        error: ErrorBody {
            kind: e.kind,
            message: e.message.clone(),
        },
    };
    if let Ok(json) = serde_json::to_string_pretty(&report) {
        println!("{json}");
    }
    eprintln!("error: {}", e.message);
    e.kind.exit_code()
}
