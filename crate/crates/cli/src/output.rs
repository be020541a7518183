use std::io::Write;
use std::path::Path;

use biflex_core::curve::Table;
use serde::Serialize;

use crate::error::{CliError, CliResult};

/// Writes `bytes` to a temporary file next to `path` and renames it into place.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> CliResult<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let io = |e: std::io::Error| CliError::Input(format!("{}: {e}", path.display()));
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io)?;
    tmp.write_all(bytes).map_err(io)?;
    tmp.flush().map_err(io)?;
    tmp.persist(path).map_err(|e| io(e.error))?;
    log::info!("wrote {}", path.display());
    Ok(())
}

pub fn write_table(path: &Path, table: &Table) -> CliResult<()> {
    write_atomic(path, table.to_csv_string().as_bytes())
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("output serializes")
}

pub fn print_json<T: Serialize>(value: &T) {
    println!("{}", to_json(value));
}
