//! `hall`: command-line front end for hall-core.
//!
//! Exit codes: 0 success, 2 usage error, 3 an integration did not converge
//! (the result is still written), 4 numeric failure or divergence.

mod args;
mod commands;
mod config;
mod manifest;

use std::io::Write;
use std::path::Path;
use std::process::ExitCode;
use std::time::Instant;

use clap::Parser;
use serde::Serialize;

use args::{Cli, Command};
use commands::Outcome;
use manifest::RunManifest;

pub const EXIT_USAGE: u8 = 2;
pub const EXIT_NOT_CONVERGED: u8 = 3;
pub const EXIT_NUMERIC: u8 = 4;

#[derive(Debug)]
pub struct CliError {
    code: u8,
    message: String,
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }

    pub fn numeric(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_NUMERIC,
            message: message.into(),
        }
    }
}

impl From<hall_core::Error> for CliError {
    fn from(e: hall_core::Error) -> Self {
        use hall_core::Error::*;
        match e {
            DimensionMismatch { .. } | InvalidArgument(_) => CliError::usage(e.to_string()),
            _ => CliError::numeric(e.to_string()),
        }
    }
}

fn execute(command: &Command, cache: Option<&Path>) -> Result<Outcome, CliError> {
    match command {
        Command::Hall(a) => commands::hall(a, cache),
        Command::Entropy(a) => commands::entropy(a),
        Command::Spectrum(a) => commands::spectrum(a),
        Command::Density(a) => commands::density(a),
        Command::Recognize(a) => commands::recognize(a),
        Command::Bernoulli(a) => commands::bernoulli(a),
        Command::Redundancy(a) => commands::redundancy(a),
        Command::Replay(_) => Err(CliError::usage("a manifest cannot record a replay")),
    }
}

fn write_out(out: Option<&Path>, text: &str) -> Result<(), CliError> {
    let io = |e: std::io::Error| CliError::numeric(format!("writing output: {e}"));
    match out {
        Some(path) => {
            if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
                std::fs::create_dir_all(parent).map_err(io)?;
            }
            std::fs::write(path, text).map_err(io)
        }
        None => std::io::stdout().write_all(text.as_bytes()).map_err(io),
    }
}

#[derive(Serialize)]
struct ReplayResult<'a> {
    manifest: &'a Path,
    expected_digest: &'a str,
    actual_digest: String,
    matches: bool,
}

fn replay(path: &Path, out: Option<&Path>) -> Result<u8, CliError> {
    let m = manifest::read(path)?;
    let outcome = execute(&m.command, None)?;
    let actual_digest = manifest::digest(&outcome.text);
    let matches = actual_digest == m.result_digest;
    let line = serde_json::to_string(&commands::Envelope {
        schema_version: commands::SCHEMA_VERSION,
        command: "replay".into(),
        result: ReplayResult {
            manifest: path,
            expected_digest: &m.result_digest,
            actual_digest,
            matches,
        },
    })
    .map_err(|e| CliError::numeric(e.to_string()))?;
    write_out(out, &format!("{line}\n"))?;
    Ok(if matches { 0 } else { EXIT_NUMERIC })
}

fn run(cli: Cli, argv: Vec<String>) -> Result<u8, CliError> {
    let (globals, command) = config::resolve(cli)?;
    if let Some(w) = globals.workers {
        if w == 0 {
            return Err(CliError::usage("--workers must be at least 1"));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(w)
            .build_global()
            .map_err(|e| CliError::numeric(e.to_string()))?;
    }
    if let Command::Replay(a) = &command {
        return replay(&a.manifest, globals.out.as_deref());
    }
    let start = Instant::now();
    let outcome = execute(&command, globals.cache.as_deref())?;
    let wall_time_seconds = start.elapsed().as_secs_f64();
    write_out(globals.out.as_deref(), &outcome.text)?;
    let m = RunManifest {
        schema_version: manifest::MANIFEST_SCHEMA_VERSION,
        result_digest: manifest::digest(&outcome.text),
        command,
        argv,
        code_version: env!("CARGO_PKG_VERSION").to_string(),
        workers: globals.workers,
        cache: globals.cache,
        wall_time_seconds,
    };
    let text = serde_json::to_string_pretty(&m).map_err(|e| CliError::numeric(e.to_string()))?;
    match &globals.out {
        Some(out) => std::fs::write(manifest::sidecar_path(out), format!("{text}\n"))
            .map_err(|e| CliError::numeric(format!("writing manifest: {e}")))?,
        None => eprintln!("{}", serde_json::to_string(&m).map_err(|e| CliError::numeric(e.to_string()))?),
    }
    Ok(if outcome.converged { 0 } else { EXIT_NOT_CONVERGED })
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { 0 });
        }
    };
    match run(cli, argv) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("hall: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}
