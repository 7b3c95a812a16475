//! Defaults from a TOML file.
//!
//! Top-level keys apply to every command that has a flag of that name;
//! a table named after a command (`[hall]`, `[entropy]`, ...) applies to that
//! command only and wins over the top level. Keys use the flag names with
//! `_` instead of `-`. Flags given on the command line always win.

use std::path::{Path, PathBuf};

use serde_json::{Map, Value};

use crate::args::{Cli, Command};
use crate::CliError;

pub struct Globals {
    pub workers: Option<usize>,
    pub cache: Option<PathBuf>,
    pub out: Option<PathBuf>,
}

const COMMAND_TABLES: [&str; 7] = ["hall", "entropy", "spectrum", "density", "recognize", "bernoulli", "redundancy"];

fn load(path: &Path) -> Result<toml::Table, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::usage(format!("{}: {e}", path.display())))?;
    text.parse::<toml::Table>()
        .map_err(|e| CliError::usage(format!("{}: {e}", path.display())))
}

fn is_unset(v: &Value) -> bool {
    matches!(v, Value::Null | Value::Bool(false))
}

fn to_json(v: &toml::Value) -> Result<Value, CliError> {
    serde_json::to_value(v).map_err(|e| CliError::usage(e.to_string()))
}

/// Applies the config file (if any) to the parsed command line.
pub fn resolve(cli: Cli) -> Result<(Globals, Command), CliError> {
    let Cli {
        config,
        workers,
        cache,
        out,
        command,
    } = cli;
    let Some(path) = config else {
        return Ok((Globals { workers, cache, out }, command));
    };
    let table = load(&path)?;
    let global = |key: &str| table.get(key).map(to_json).transpose();
    let workers = match (workers, global("workers")?) {
        (Some(w), _) => Some(w),
        (None, Some(v)) => Some(serde_json::from_value(v).map_err(|e| CliError::usage(format!("workers: {e}")))?),
        (None, None) => None,
    };
    let path_key = |cur: Option<PathBuf>, key: &str| -> Result<Option<PathBuf>, CliError> {
        match (cur, global(key)?) {
            (Some(p), _) => Ok(Some(p)),
            (None, Some(v)) => Ok(Some(serde_json::from_value(v).map_err(|e| CliError::usage(format!("{key}: {e}")))?)),
            (None, None) => Ok(None),
        }
    };
    let cache = path_key(cache, "cache")?;
    let out = path_key(out, "out")?;

    if matches!(command, Command::Replay(_)) {
        return Ok((Globals { workers, cache, out }, command));
    }
    let name = command.name();
    let mut value = serde_json::to_value(&command).map_err(|e| CliError::usage(e.to_string()))?;
    let map: &mut Map<String, Value> = value.as_object_mut().expect("commands serialize to objects");
    for (key, v) in &table {
        if COMMAND_TABLES.contains(&key.as_str()) || ["workers", "cache", "out"].contains(&key.as_str()) {
            continue;
        }
        if let Some(slot) = map.get_mut(key) {
            if is_unset(slot) {
                *slot = to_json(v)?;
            }
        }
    }
    if let Some(section) = table.get(name) {
        let section = section
            .as_table()
            .ok_or_else(|| CliError::usage(format!("[{name}] must be a table")))?;
        for (key, v) in section {
            let slot = map
                .get_mut(key)
                .ok_or_else(|| CliError::usage(format!("unknown key {key:?} in [{name}]")))?;
            if is_unset(slot) {
                *slot = to_json(v)?;
            }
        }
    }
    let command = serde_json::from_value(value).map_err(|e| CliError::usage(format!("{}: {e}", path.display())))?;
    Ok((Globals { workers, cache, out }, command))
}
