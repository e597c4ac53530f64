use std::io::Read;
use std::path::Path;

use crate::error::{Error, Result};

/// Named, equal-length real-valued time series. Rows containing a missing
/// value are dropped across the whole table at ingestion, so the streams
/// quantized from different columns stay aligned.
#[derive(Debug, Clone)]
pub struct SeriesTable {
    names: Vec<String>,
    columns: Vec<Vec<f64>>,
}

impl SeriesTable {
    pub fn new(names: Vec<String>, columns: Vec<Vec<f64>>) -> Result<Self> {
        if names.len() != columns.len() {
            return Err(Error::InvalidInput(format!(
                "{} names for {} columns",
                names.len(),
                columns.len()
            )));
        }
        if let Some(first) = columns.first() {
            if columns.iter().any(|c| c.len() != first.len()) {
                return Err(Error::InvalidInput("columns have unequal lengths".into()));
            }
        }
        Ok(Self { names, columns })
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn n_columns(&self) -> usize {
        self.columns.len()
    }

    pub fn n_rows(&self) -> usize {
        self.columns.first().map_or(0, Vec::len)
    }

    pub fn column(&self, i: usize) -> &[f64] {
        &self.columns[i]
    }

    /// Reads a comma-separated table: header row of names, numeric body with
    /// dot decimals. Empty cells mark the row as missing and drop it
    /// table-wide; any other unparseable cell is an error.
    pub fn from_csv_reader<R: Read>(reader: R) -> Result<Self> {
        let mut csv = csv::ReaderBuilder::new().has_headers(true).from_reader(reader);
        let names: Vec<String> =
            csv.headers()?.iter().map(|h| h.trim().to_string()).collect();
        if names.is_empty() {
            return Err(Error::MalformedFile("csv has no header row".into()));
        }
        let mut columns: Vec<Vec<f64>> = vec![Vec::new(); names.len()];
        for (row_idx, record) in csv.records().enumerate() {
            let record = record?;
            let mut row = Vec::with_capacity(names.len());
            let mut missing = false;
            for cell in record.iter() {
                let cell = cell.trim();
                if cell.is_empty() {
                    missing = true;
                    break;
                }
                match cell.parse::<f64>() {
                    Ok(v) if v.is_finite() => row.push(v),
                    _ => {
                        return Err(Error::MalformedFile(format!(
                            "row {}: cell `{cell}` is not numeric",
                            row_idx + 2
                        )))
                    }
                }
            }
            if missing {
                continue;
            }
            for (col, v) in columns.iter_mut().zip(row) {
                col.push(v);
            }
        }
        Self::new(names, columns)
    }

    pub fn from_csv_path(path: impl AsRef<Path>) -> Result<Self> {
        let file = std::fs::File::open(path)?;
        Self::from_csv_reader(file)
    }
}
