use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::args::Command;
use crate::CliError;

pub const MANIFEST_SCHEMA_VERSION: u32 = 1;

/// Everything needed to re-run a command and check its output.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub schema_version: u32,
    /// The command with every config-file default applied.
    pub command: Command,
    pub argv: Vec<String>,
    pub code_version: String,
    pub workers: Option<usize>,
    pub cache: Option<PathBuf>,
    pub wall_time_seconds: f64,
    /// SHA-256 of the emitted result text.
    pub result_digest: String,
}

pub fn digest(text: &str) -> String {
    Sha256::digest(text.as_bytes()).iter().map(|b| format!("{b:02x}")).collect()
}

/// `<out>.manifest.json`
pub fn sidecar_path(out: &Path) -> PathBuf {
    let mut name = out.as_os_str().to_owned();
    name.push(".manifest.json");
    PathBuf::from(name)
}

pub fn read(path: &Path) -> Result<RunManifest, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::usage(format!("{}: {e}", path.display())))?;
    let m: RunManifest =
        serde_json::from_str(&text).map_err(|e| CliError::usage(format!("{}: {e}", path.display())))?;
    if m.schema_version != MANIFEST_SCHEMA_VERSION {
        return Err(CliError::usage(format!(
            "{}: unsupported manifest schema {}",
            path.display(),
            m.schema_version
        )));
    }
    Ok(m)
}
