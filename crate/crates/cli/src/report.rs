use std::fmt;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::Serialize;

/// Process exit codes.
pub const EXIT_OK: u8 = 0;
pub const EXIT_FAIL: u8 = 1;
pub const EXIT_BAD_INPUT: u8 = 2;
pub const EXIT_BUDGET: u8 = 3;

#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    pub fn bad_input(message: impl Into<String>) -> Self {
        Self { code: EXIT_BAD_INPUT, message: message.into() }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl From<bdom_core::Error> for CliError {
    fn from(e: bdom_core::Error) -> Self {
        Self::bad_input(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        Self::bad_input(e.to_string())
    }
}

pub type CliResult<T> = Result<T, CliError>;

/// What a command produced: a text payload, a JSON payload and an exit code.
/// Exactly one payload is written, chosen by `--json`.
pub struct Report {
    pub inputs: Vec<String>,
    pub text: String,
    pub json: serde_json::Value,
    pub code: u8,
}

impl Report {
    pub fn new(inputs: Vec<String>, text: impl Into<String>, json: impl Serialize) -> CliResult<Self> {
        Ok(Self { inputs, text: text.into(), json: serde_json::to_value(json)?, code: EXIT_OK })
    }

    pub fn with_code(mut self, code: u8) -> Self {
        self.code = code;
        self
    }
}

#[derive(Serialize)]
struct RunManifest<'a> {
    command: &'a str,
    inputs: &'a [String],
    version: &'static str,
    outputs: Vec<String>,
    elapsed_ms: u128,
}

/// Path of the manifest that accompanies `out`.
pub fn manifest_path(out: &Path) -> PathBuf {
    let mut name = out.as_os_str().to_owned();
    name.push(".manifest.json");
    PathBuf::from(name)
}

/// Writes the selected payload to `out` (or stdout) and, with `out`, the run
/// manifest next to it.
pub fn emit(report: &Report, command: &str, json: bool, out: Option<&Path>, started: Instant) -> io::Result<()> {
    let mut payload = if json { serde_json::to_string_pretty(&report.json)? } else { report.text.clone() };
    if !payload.is_empty() && !payload.ends_with('\n') {
        payload.push('\n');
    }
    match out {
        None => io::stdout().lock().write_all(payload.as_bytes()),
        Some(path) => {
            fs::write(path, &payload)?;
            let manifest_file = manifest_path(path);
            let manifest = RunManifest {
                command,
                inputs: &report.inputs,
                version: env!("CARGO_PKG_VERSION"),
                outputs: vec![path.display().to_string(), manifest_file.display().to_string()],
                elapsed_ms: started.elapsed().as_millis(),
            };
            fs::write(&manifest_file, serde_json::to_string_pretty(&manifest)? + "\n")
        }
    }
}
