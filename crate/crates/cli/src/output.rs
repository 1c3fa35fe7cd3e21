//! CSV and metadata writers. Floats are written as `{:.16e}` (17 significant digits).

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use crate::CliError;

pub const CODE_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Column-major-agnostic CSV table of floats.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn new(header: Vec<String>) -> Self {
        Table { header, rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<f64>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::with_capacity(self.rows.len() * self.header.len() * 24);
        s.push_str(&self.header.join(","));
        s.push('\n');
        for row in &self.rows {
            for (i, v) in row.iter().enumerate() {
                if i > 0 {
                    s.push(',');
                }
                write!(s, "{}", format_float(*v)).unwrap();
            }
            s.push('\n');
        }
        s
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let i = self.header.iter().position(|h| h == name)?;
        Some(self.rows.iter().map(|r| r[i]).collect())
    }
}

pub fn format_float(v: f64) -> String {
    // Avoid "-0.0000000000000000e0" noise in otherwise identical columns.
    let v = if v == 0.0 { 0.0 } else { v };
    format!("{v:.16e}")
}

/// Label of `μ` in column names: `-8`, `-7.5`, `0`.
pub fn mu_label(mu: f64) -> String {
    format!("{mu}")
}

pub fn write_file(dir: &Path, file: &str, contents: &str) -> Result<PathBuf, CliError> {
    std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    let path = dir.join(file);
    std::fs::write(&path, contents).map_err(|e| CliError::io(&path, e))?;
    Ok(path)
}
