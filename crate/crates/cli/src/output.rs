use std::fmt;
use std::path::PathBuf;
use std::time::Instant;

use identinet_core::io::{to_canonical_json, RunManifest};
use identinet_core::Error;
use serde::Serialize;

use crate::Format;

#[derive(Debug)]
pub enum CliError {
    Core(Error),
    /// Input was read but is not acceptable; details already printed.
    Rejected(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(e) if e.is_internal() => 2,
            _ => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Rejected(msg) => f.write_str(msg),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Core(Error::Io(e))
    }
}

pub type CliResult<T = ()> = Result<T, CliError>;

/// Collects output files for one command and writes the manifest last.
pub struct Sink {
    dir: PathBuf,
    only: Option<Format>,
    written: Vec<String>,
    started: Instant,
}

impl Sink {
    pub fn new(dir: PathBuf, only: Option<Format>) -> CliResult<Self> {
        std::fs::create_dir_all(&dir)?;
        Ok(Sink { dir, only, written: Vec::new(), started: Instant::now() })
    }

    fn wants(&self, format: Format) -> bool {
        self.only.is_none_or(|f| f == format)
    }

    pub fn text(&mut self, name: &str, format: Format, contents: &str) -> CliResult {
        if self.wants(format) {
            std::fs::write(self.dir.join(name), contents)?;
            self.written.push(name.to_string());
        }
        Ok(())
    }

    pub fn json<T: Serialize + ?Sized>(&mut self, name: &str, value: &T) -> CliResult {
        if self.wants(Format::Json) {
            let text = to_canonical_json(value)?;
            self.text(name, Format::Json, &text)?;
        }
        Ok(())
    }

    /// Writes `manifest.json`; always written regardless of `--format`.
    pub fn finish(mut self, command: &str, config: serde_json::Value, seed: Option<u64>) -> CliResult {
        self.written.sort();
        let manifest = RunManifest {
            command: command.to_string(),
            config,
            seed,
            version: env!("CARGO_PKG_VERSION").to_string(),
            outputs: self.written,
            wall_clock_ms: self.started.elapsed().as_millis() as u64,
        };
        std::fs::write(self.dir.join("manifest.json"), to_canonical_json(&manifest)?)?;
        Ok(())
    }
}
