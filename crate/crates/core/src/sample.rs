//! Observation batches with cached order statistics, and their ingestion
//! from plain text or CSV.

use std::io::{BufRead, BufReader, Read};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A nonempty batch of finite real observations.
///
/// Keeps the input order (needed by change-point scans) alongside the
/// ascending order statistics.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Sample {
    values: Vec<f64>,
    sorted: Vec<f64>,
}

impl Sample {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::EmptySample);
        }
        if let Some((index, &value)) = values.iter().enumerate().find(|(_, v)| !v.is_finite()) {
            return Err(Error::NonFinite { index, value });
        }
        let mut sorted = values.clone();
        sorted.sort_by(f64::total_cmp);
        Ok(Self { values, sorted })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Observations in input order.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Order statistics `X_(1) <= ... <= X_(n)`.
    pub fn sorted(&self) -> &[f64] {
        &self.sorted
    }

    /// `#{i : X_i <= t}`.
    pub fn count_le(&self, t: f64) -> usize {
        self.sorted.partition_point(|&x| x <= t)
    }

    /// `#{i : X_i < t}`, the count behind left limits.
    pub fn count_lt(&self, t: f64) -> usize {
        self.sorted.partition_point(|&x| x < t)
    }

    /// Applies `f` to every observation, keeping input order.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> Result<Self> {
        Self::new(self.values.iter().map(|&x| f(x)).collect())
    }

    /// Reads one decimal per line. Blank lines and `#` comments are skipped.
    pub fn from_text<R: Read>(reader: R) -> Result<Self> {
        let mut values = Vec::new();
        for (i, line) in BufReader::new(reader).lines().enumerate() {
            let line = line.map_err(|e| Error::Parse {
                line: i + 1,
                message: e.to_string(),
            })?;
            let body = line.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            let v = body.parse::<f64>().map_err(|_| Error::Parse {
                line: i + 1,
                message: format!("not a decimal number: `{body}`"),
            })?;
            values.push(v);
        }
        Self::new(values)
    }

    /// Reads the named column of a headed CSV file.
    pub fn from_csv<R: Read>(reader: R, column: &str) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new()
            .comment(Some(b'#'))
            .trim(csv::Trim::All)
            .from_reader(reader);
        let idx = rdr
            .headers()?
            .iter()
            .position(|h| h == column)
            .ok_or_else(|| Error::MissingColumn(column.to_string()))?;
        let mut values = Vec::new();
        for (i, record) in rdr.records().enumerate() {
            let record = record?;
            let cell = record.get(idx).unwrap_or("");
            let v = cell.parse::<f64>().map_err(|_| Error::Parse {
                line: i + 2,
                message: format!("not a decimal number: `{cell}`"),
            })?;
            values.push(v);
        }
        Self::new(values)
    }

    /// Text file, or CSV column when `column` is given.
    pub fn from_path(path: &Path, column: Option<&str>) -> Result<Self> {
        let file = std::fs::File::open(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        match column {
            Some(col) => Self::from_csv(file, col),
            None => Self::from_text(file),
        }
    }
}
