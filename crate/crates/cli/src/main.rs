mod args;
mod commands;
mod config;

use std::fs;
use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use rqc_moments::Error;

use args::Cli;
use config::FileConfig;

fn exit_code(err: &Error) -> u8 {
    match err {
        Error::Numerical(_) | Error::CardinalityMismatch { .. } => 1,
        Error::Io(_) | Error::Parse(_) => 2,
        Error::NotUnitary { .. } | Error::InvalidInput(_) => 3,
        Error::Unsupported(_) => 4,
    }
}

fn execute(cli: &Cli) -> Result<i32, Error> {
    let file = match &cli.global.config {
        Some(path) => FileConfig::load(path)?,
        None => FileConfig::default(),
    };
    if let Some(threads) = cli.global.threads.or(file.threads) {
        if threads == 0 {
            return Err(Error::InvalidInput("--threads must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .map_err(|e| Error::InvalidInput(format!("thread pool: {e}")))?;
    }
    let settings = commands::resolve_globals(&cli.global, &file);
    let outcome = commands::run(&cli.command, &settings, &file)?;
    for (path, body) in &outcome.outputs {
        match path {
            Some(path) => fs::write(path, body)?,
            None => std::io::stdout().write_all(body.as_bytes())?,
        }
    }
    Ok(outcome.exit_code)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code(&err))
        }
    }
}
