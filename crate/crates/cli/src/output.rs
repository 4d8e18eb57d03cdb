use std::io::Write;
use std::path::Path;

use serde_json::Value;
use tempfile::NamedTempFile;

use crate::CliError;

pub struct Outcome {
    pub json: Value,
    pub csv: Option<String>,
    pub out: Option<String>,
    pub csv_path: Option<String>,
    pub code: u8,
}

/// Writes `data` to a temporary file next to `path`, then renames it.
pub fn write_atomic(path: &str, data: &[u8]) -> Result<(), CliError> {
    let io = |e: std::io::Error| CliError::Io(format!("{path}: {e}"));
    let dir = match Path::new(path).parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = NamedTempFile::new_in(dir).map_err(io)?;
    tmp.write_all(data).map_err(io)?;
    tmp.as_file().sync_all().map_err(io)?;
    tmp.persist(path).map_err(|e| io(e.error))?;
    Ok(())
}

pub fn emit(o: &Outcome) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(&o.json).map_err(|e| CliError::Io(e.to_string()))? + "\n";
    if let (Some(csv), Some(path)) = (&o.csv, &o.csv_path) {
        write_atomic(path, csv.as_bytes())?;
    }
    match &o.out {
        Some(path) => write_atomic(path, text.as_bytes()),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes()).map_err(|e| CliError::Io(e.to_string()))
        }
    }
}
