//! Command-line front end for `fiberot`: JSON ingestion, command dispatch and
//! report emission.

pub mod commands;
pub mod error;
pub mod report;
pub mod schema;

use std::io::Write;

pub use commands::{execute, parse_q, Command, Outcome, RunConfig};
pub use error::{CliError, CliResult};
pub use schema::{parse_input, Document};

pub const THREADS_ENV: &str = "FIBEROT_THREADS";

/// Worker count from `--threads`, else from `FIBEROT_THREADS`.
pub fn thread_count(flag: Option<usize>) -> CliResult<Option<usize>> {
    if flag.is_some() {
        return Ok(flag);
    }
    match std::env::var(THREADS_ENV) {
        Ok(text) => text
            .trim()
            .parse::<usize>()
            .map(Some)
            .map_err(|_| CliError::Usage(format!("{THREADS_ENV}={text:?} is not a thread count"))),
        Err(_) => Ok(None),
    }
}

/// Runs `config` and writes its report; returns the exit status.
pub fn run(config: &RunConfig) -> CliResult<u8> {
    if let Some(n) = thread_count(config.threads)? {
        if n == 0 {
            return Err(CliError::Usage("--threads must be positive".into()));
        }
        // Fails only if a pool already exists, in which case it is reused.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    let outcome = execute(config)?;
    let mut buffer = Vec::new();
    if config.csv {
        report::write_csv(&outcome.report, &mut buffer)?;
    } else {
        report::write_json(&outcome.report, &mut buffer).expect("writing to memory");
    }
    match &config.output {
        Some(path) => {
            std::fs::write(path, &buffer).map_err(|source| CliError::Io {
                path: path.clone(),
                source,
            })?;
            if outcome.exit == error::EXIT_NOT_CONVERGED {
                println!("not converged: gap bound {}", outcome.report["gap_bound"]);
            }
        }
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(&buffer).map_err(|source| CliError::Io {
                path: "<stdout>".into(),
                source,
            })?;
        }
    }
    Ok(outcome.exit)
}
