//! Matrix input files.
//!
//! JSON: `{"states": ["a", "b"], "rates": [[-1, 1], [3, -3]], "metadata": {"k": "v"}}`
//! where `states` and `metadata` are optional.
//!
//! CSV: one line per row of comma-separated decimals, optionally preceded by a
//! header line of labels starting with `#`, e.g. `#a,b`.

use std::collections::{BTreeMap, HashSet};
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum InputFormat {
    Json,
    Csv,
}

impl InputFormat {
    /// `.csv` files are CSV, everything else is JSON.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some(ext) if ext.eq_ignore_ascii_case("csv") => InputFormat::Csv,
            _ => InputFormat::Json,
        }
    }
}

#[derive(Debug, Error)]
pub enum DocumentError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("shape error: {0}")]
    Shape(String),
    #[error("invalid labels: {0}")]
    Labels(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixDocument {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub states: Option<Vec<String>>,
    pub rates: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub metadata: BTreeMap<String, String>,
}

impl MatrixDocument {
    pub fn n(&self) -> usize {
        self.rates.len()
    }

    fn checked(self) -> Result<Self, DocumentError> {
        let n = self.rates.len();
        if n == 0 {
            return Err(DocumentError::Shape("rates is empty".into()));
        }
        if let Some((i, row)) = self.rates.iter().enumerate().find(|(_, r)| r.len() != n) {
            return Err(DocumentError::Shape(format!(
                "row {i} has {} entries but the matrix has {n} rows",
                row.len()
            )));
        }
        if let Some(states) = &self.states {
            if states.len() != n {
                return Err(DocumentError::Labels(format!(
                    "{} labels for {n} states",
                    states.len()
                )));
            }
            let mut seen = HashSet::new();
            if let Some(dup) = states.iter().find(|s| !seen.insert(s.as_str())) {
                return Err(DocumentError::Labels(format!("duplicate label {dup:?}")));
            }
        }
        Ok(self)
    }

    pub fn from_json_str(text: &str) -> Result<Self, DocumentError> {
        let doc: MatrixDocument = serde_json::from_str(text).map_err(|e| DocumentError::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;
        doc.checked()
    }

    pub fn from_csv_str(text: &str) -> Result<Self, DocumentError> {
        let mut states = None;
        let mut body = text;
        let mut line_offset = 0;
        if let Some(first) = text.lines().next() {
            if let Some(header) = first.trim_start().strip_prefix('#') {
                states = Some(header.split(',').map(|s| s.trim().to_owned()).collect());
                body = text.split_once('\n').map_or("", |(_, rest)| rest);
                line_offset = 1;
            }
        }
        let mut reader = csv::ReaderBuilder::new()
            .has_headers(false)
            .flexible(true)
            .trim(csv::Trim::All)
            .from_reader(body.as_bytes());
        let mut rates = Vec::new();
        for record in reader.records() {
            let record = record.map_err(|e| DocumentError::Parse {
                line: e.position().map_or(0, |p| p.line() as usize) + line_offset,
                column: 0,
                message: e.to_string(),
            })?;
            let line = record.position().map_or(0, |p| p.line() as usize) + line_offset;
            if record.iter().all(str::is_empty) {
                continue;
            }
            let row = record
                .iter()
                .enumerate()
                .map(|(col, field)| {
                    f64::from_str(field).map_err(|e| DocumentError::Parse {
                        line,
                        column: col + 1,
                        message: format!("{field:?} is not a number: {e}"),
                    })
                })
                .collect::<Result<Vec<f64>, _>>()?;
            rates.push(row);
        }
        MatrixDocument {
            states,
            rates,
            metadata: BTreeMap::new(),
        }
        .checked()
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(self).expect("document serializes")
    }

    /// CSV has no room for metadata; it is dropped.
    pub fn to_csv_string(&self) -> String {
        let mut out = String::new();
        if let Some(states) = &self.states {
            out.push('#');
            out.push_str(&states.join(","));
            out.push('\n');
        }
        for row in &self.rates {
            let fields: Vec<String> = row.iter().map(|x| format!("{x:e}")).collect();
            out.push_str(&fields.join(","));
            out.push('\n');
        }
        out
    }
}

pub fn parse_matrix(path: &Path, format: InputFormat) -> Result<MatrixDocument, DocumentError> {
    let text = std::fs::read_to_string(path).map_err(|source| DocumentError::Io {
        path: path.display().to_string(),
        source,
    })?;
    match format {
        InputFormat::Json => MatrixDocument::from_json_str(&text),
        InputFormat::Csv => MatrixDocument::from_csv_str(&text),
    }
}
