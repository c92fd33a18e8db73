//! Tabular results, CSV encoding and crash-safe file output.

use std::io::Write;
use std::path::Path;

use serde::Serialize;

use crate::error::{LabError, Result};

/// A long-format result table. `None` marks a column that does not apply to
/// a row and is written as an empty field.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<Option<f64>>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Self {
            header: header.iter().map(|h| h.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Option<f64>>) {
        assert_eq!(row.len(), self.header.len(), "row width must match header");
        self.rows.push(row);
    }

    pub fn push_values(&mut self, row: &[f64]) {
        self.push(row.iter().copied().map(Some).collect());
    }

    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.header.iter().position(|h| h == name)
    }

    pub fn column(&self, name: &str) -> Result<Vec<Option<f64>>> {
        let i = self
            .column_index(name)
            .ok_or_else(|| LabError::config(format!("missing column `{name}`")))?;
        Ok(self.rows.iter().map(|r| r[i]).collect())
    }

    /// Values of a column that must be populated on every row.
    pub fn values(&self, name: &str) -> Result<Vec<f64>> {
        self.column(name)?
            .into_iter()
            .map(|v| v.ok_or_else(|| LabError::config(format!("empty field in column `{name}`"))))
            .collect()
    }

    /// UTF-8 CSV with a header, 17 significant digits and LF line endings.
    /// Refuses non-finite values.
    pub fn to_csv(&self) -> Result<Vec<u8>> {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        w.write_record(&self.header)?;
        for row in &self.rows {
            let mut fields = Vec::with_capacity(row.len());
            for (i, v) in row.iter().enumerate() {
                fields.push(match v {
                    Some(x) if x.is_finite() => format_float(*x),
                    Some(_) => {
                        return Err(LabError::NonFinite {
                            column: self.header[i].clone(),
                        })
                    }
                    None => String::new(),
                });
            }
            w.write_record(&fields)?;
        }
        w.into_inner()
            .map_err(|e| LabError::Csv(e.into_error().into()))
    }

    pub fn from_csv(bytes: &[u8]) -> Result<Self> {
        let mut r = csv::ReaderBuilder::new().from_reader(bytes);
        let header: Vec<String> = r.headers()?.iter().map(str::to_string).collect();
        let mut rows = Vec::new();
        for rec in r.records() {
            let rec = rec?;
            let row = rec
                .iter()
                .map(|f| {
                    if f.is_empty() {
                        Ok(None)
                    } else {
                        f.parse::<f64>()
                            .map(Some)
                            .map_err(|_| LabError::config(format!("bad number `{f}` in CSV")))
                    }
                })
                .collect::<Result<Vec<_>>>()?;
            rows.push(row);
        }
        Ok(Self { header, rows })
    }
}

/// Scientific notation with 17 significant digits, enough to round-trip any
/// `f64`.
pub fn format_float(x: f64) -> String {
    format!("{x:.16e}")
}

/// Writes through a temporary file in the same directory and renames it into
/// place, so readers never see a partial file.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = path
        .parent()
        .filter(|p| !p.as_os_str().is_empty())
        .unwrap_or(Path::new("."));
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| LabError::io(dir, e))?;
    tmp.write_all(bytes)
        .map_err(|e| LabError::io(tmp.path(), e))?;
    tmp.as_file()
        .sync_all()
        .map_err(|e| LabError::io(tmp.path(), e))?;
    tmp.persist(path).map_err(|e| LabError::io(path, e.error))?;
    Ok(())
}

/// Run metadata: every resolved parameter plus bookkeeping, flattened into one
/// JSON object.
#[derive(Debug, Serialize)]
pub struct Metadata<'a, P: Serialize> {
    #[serde(flatten)]
    pub params: &'a P,
    pub tool_version: &'static str,
    pub duration_seconds: f64,
    pub outputs: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub desired_transmitter_placement: Option<&'static str>,
}

impl<P: Serialize> Metadata<'_, P> {
    pub fn to_json(&self) -> Result<Vec<u8>> {
        let mut v = serde_json::to_vec_pretty(self)?;
        v.push(b'\n');
        Ok(v)
    }
}
