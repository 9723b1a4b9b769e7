//! Subcommand implementations.

pub mod derive;
pub mod eval;
pub mod export;
pub mod parse;

use std::fs;
use std::io::Write;
use std::path::Path;

use serde::Serialize;

use crate::config::RunConfig;
use crate::error::CliError;

pub const CONFIG_FILE: &str = "config.toml";
pub const MANIFEST_FILE: &str = "manifest.json";

/// Replaces `path` with `bytes` via a temporary file in the same directory.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    let dir = path.parent().unwrap_or_else(|| Path::new("."));
    let fail = |e: std::io::Error| CliError::io(format!("{}: {e}", path.display()));
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(fail)?;
    tmp.write_all(bytes).map_err(fail)?;
    tmp.persist(path).map_err(|e| fail(e.error))?;
    Ok(())
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), CliError> {
    let mut bytes = serde_json::to_vec_pretty(value).map_err(|e| CliError::io(e.to_string()))?;
    bytes.push(b'\n');
    write_atomic(path, &bytes)
}

/// Creates the output directory and records the resolved configuration in it.
pub fn prepare_output(cfg: &RunConfig) -> Result<&Path, CliError> {
    let out = cfg.require_output()?;
    fs::create_dir_all(out).map_err(|e| CliError::io(format!("{}: {e}", out.display())))?;
    write_atomic(&out.join(CONFIG_FILE), cfg.to_toml().as_bytes())?;
    Ok(out)
}

/// Refuses file names that would escape the output directory.
pub fn safe_file_stem(id: &str) -> Result<&str, CliError> {
    if id.is_empty() || id.contains(['/', '\\']) || id == "." || id == ".." {
        return Err(CliError::validation(format!(
            "document id `{id}` is not a valid file name"
        )));
    }
    Ok(id)
}
