use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::CliError;

/// Writes report files into one output directory and remembers their paths.
#[derive(Debug)]
pub struct ReportWriter {
    dir: PathBuf,
    written: Vec<PathBuf>,
}

impl ReportWriter {
    /// Creates the output directory if needed.
    pub fn new(dir: impl Into<PathBuf>) -> Result<Self, CliError> {
        let dir = dir.into();
        fs::create_dir_all(&dir).map_err(|e| CliError::Output {
            path: dir.clone(),
            message: e.to_string(),
        })?;
        Ok(ReportWriter {
            dir,
            written: Vec::new(),
        })
    }

    /// The output directory.
    pub fn dir(&self) -> &Path {
        &self.dir
    }

    /// Paths written so far, in order.
    pub fn written(&self) -> &[PathBuf] {
        &self.written
    }

    /// Writes `value` as pretty-printed JSON with a trailing newline.
    pub fn json<T: Serialize>(&mut self, name: &str, value: &T) -> Result<(), CliError> {
        let path = self.dir.join(name);
        let mut text = serde_json::to_string_pretty(value).map_err(|e| self.fail(&path, e))?;
        text.push('\n');
        fs::write(&path, text).map_err(|e| self.fail(&path, e))?;
        self.written.push(path);
        Ok(())
    }

    /// Writes one CSV row per item; the header comes from the field names.
    pub fn csv<T: Serialize>(&mut self, name: &str, rows: &[T]) -> Result<(), CliError> {
        let path = self.dir.join(name);
        let mut w = csv::Writer::from_path(&path).map_err(|e| self.fail(&path, e))?;
        for row in rows {
            w.serialize(row).map_err(|e| self.fail(&path, e))?;
        }
        w.flush().map_err(|e| self.fail(&path, e))?;
        self.written.push(path);
        Ok(())
    }

    fn fail(&self, path: &Path, e: impl std::fmt::Display) -> CliError {
        CliError::Output {
            path: path.to_path_buf(),
            message: e.to_string(),
        }
    }
}
