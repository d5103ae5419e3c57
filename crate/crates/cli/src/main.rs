//! `monenv`: command-line front end for `monenv-core`.
//!
//! Exit codes: 0 success, 1 numerical failure, 2 bad flags or arguments,
//! 3 invalid or unreadable instance. Failures print
//! `{"error": {"kind": ..., "message": ...}}` on standard error.

mod args;
mod commands;
mod output;

use std::io::Write;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;
use serde_json::json;

use crate::args::Cli;
use crate::commands::Failure;

/// Environment variable capping the number of worker threads.
const THREADS_VAR: &str = "MONENV_THREADS";

fn configure_threads() -> Result<(), Failure> {
    let Ok(raw) = std::env::var(THREADS_VAR) else {
        return Ok(());
    };
    let threads: usize = raw.trim().parse().ok().filter(|n| *n > 0).ok_or_else(|| {
        Failure::Usage(format!(
            "{THREADS_VAR} must be a positive integer, got {raw:?}"
        ))
    })?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| Failure::Usage(format!("cannot configure {threads} threads: {e}")))
}

fn fail(failure: &Failure) -> ExitCode {
    let body = json!({"error": {"kind": failure.kind(), "message": failure.message()}});
    eprintln!("{body}");
    ExitCode::from(failure.exit_code() as u8)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => return fail(&Failure::Usage(e.to_string().trim_end().to_owned())),
    };
    if let Err(f) = configure_threads() {
        return fail(&f);
    }
    match commands::run(cli.command) {
        Ok(text) => {
            let mut stdout = std::io::stdout().lock();
            if stdout
                .write_all(text.as_bytes())
                .and_then(|_| stdout.flush())
                .is_err()
            {
                return ExitCode::FAILURE;
            }
            ExitCode::SUCCESS
        }
        Err(f) => fail(&f),
    }
}
