//! Report envelope, CSV dialect and atomic output.

use std::io::Write;
use std::path::Path;

use num_complex::Complex;
use pyragas::model::Tolerances;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::CliError;

#[derive(Debug, Serialize)]
pub struct Envelope {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: &'static str,
    pub input_digest: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tolerances: Option<Tolerances>,
    pub results: serde_json::Value,
    /// Wall-clock time; the only field allowed to differ between identical runs.
    pub timing_ms: u64,
}

/// SHA-256 of the compact JSON of `value` with object keys sorted.
pub fn digest<T: Serialize>(value: &T) -> String {
    let canonical = serde_json::to_value(value).and_then(|v| serde_json::to_string(&v)).expect("plain data serializes");
    format!("sha256:{}", hex::encode(Sha256::digest(canonical.as_bytes())))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Point {
    pub re: f64,
    pub im: f64,
}

impl From<Complex<f64>> for Point {
    fn from(z: Complex<f64>) -> Self {
        Self { re: z.re, im: z.im }
    }
}

/// Comma-separated, header row, LF endings, floats with 17 significant digits.
#[derive(Debug, Clone, PartialEq)]
pub struct Csv {
    text: String,
}

pub enum Cell {
    Int(i64),
    Num(f64),
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Num(x)
    }
}

impl From<usize> for Cell {
    fn from(x: usize) -> Self {
        Cell::Int(x as i64)
    }
}

impl From<i64> for Cell {
    fn from(x: i64) -> Self {
        Cell::Int(x)
    }
}

impl Csv {
    pub fn new<S: AsRef<str>>(header: impl IntoIterator<Item = S>) -> Self {
        let mut csv = Self { text: String::new() };
        csv.line(header.into_iter().map(|h| h.as_ref().to_string()));
        csv
    }

    pub fn row(&mut self, cells: impl IntoIterator<Item = Cell>) {
        self.line(cells.into_iter().map(|c| match c {
            Cell::Int(i) => i.to_string(),
            Cell::Num(x) => format!("{x:.16e}"),
        }));
    }

    /// Row of preformatted cells; they must not contain commas or line breaks.
    pub fn line_raw(&mut self, cells: &[&str]) {
        self.line(cells.iter().map(|c| c.to_string()));
    }

    fn line(&mut self, cells: impl Iterator<Item = String>) {
        let cells: Vec<String> = cells.collect();
        self.text.push_str(&cells.join(","));
        self.text.push('\n');
    }

    pub fn as_str(&self) -> &str {
        &self.text
    }
}

/// Writes to standard output, or to `path` through a temporary file in the same directory.
pub fn write_output(path: Option<&Path>, bytes: &[u8]) -> Result<(), CliError> {
    let Some(path) = path else {
        let mut out = std::io::stdout().lock();
        return out.write_all(bytes).and_then(|_| out.flush()).map_err(|source| CliError::Write { target: "standard output".into(), source });
    };
    let err = |source| CliError::Write { target: path.display().to_string(), source };
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(err)?;
    tmp.write_all(bytes).and_then(|_| tmp.flush()).map_err(err)?;
    tmp.persist(path).map_err(|e| err(e.error))?;
    Ok(())
}
