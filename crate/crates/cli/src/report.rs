//! Report values and their two renderings.

use std::fmt::Write as _;

use ctmc_limit::Matrix64;
use serde_json::{json, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum OutputFormat {
    Json,
    Text,
}

/// A finished report: a JSON value and an aligned plain-text rendering.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub json: Value,
    pub text: String,
}

impl Report {
    pub fn render(&self, format: OutputFormat) -> String {
        match format {
            OutputFormat::Json => {
                serde_json::to_string_pretty(&self.json).expect("report serializes")
            }
            OutputFormat::Text => self.text.trim_end().to_owned(),
        }
    }
}

/// Rounds to 15 significant digits. Negative zero becomes zero.
pub fn round15(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x + 0.0;
    }
    format!("{x:.14e}")
        .parse::<f64>()
        .expect("formatted float parses")
        + 0.0
}

pub fn number(x: f64) -> Value {
    json!(round15(x))
}

pub fn vector_json(v: &[f64]) -> Value {
    Value::Array(v.iter().map(|&x| number(x)).collect())
}

pub fn matrix_json(m: &Matrix64) -> Value {
    Value::Array((0..m.rows()).map(|i| vector_json(m.row(i))).collect())
}

pub fn labels_json(labels: &[String], states: &[usize]) -> Value {
    Value::Array(states.iter().map(|&s| json!(labels[s])).collect())
}

/// Number formatting for text output: fixed 9 decimals for probabilities,
/// shortest round-trip for rates.
#[derive(Debug, Clone, Copy)]
pub enum Style {
    Probability,
    Rate,
}

fn cell(x: f64, style: Style) -> String {
    match style {
        Style::Probability => format!("{:.9}", x + 0.0),
        Style::Rate => format!("{}", x + 0.0),
    }
}

/// Right-aligned table with a header row and a label column.
pub fn table_text(header: &[String], rows: &[(String, Vec<String>)]) -> String {
    let label_w = rows
        .iter()
        .map(|(l, _)| l.chars().count())
        .max()
        .unwrap_or(0);
    let mut widths: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
    for (_, cells) in rows {
        for (w, c) in widths.iter_mut().zip(cells) {
            *w = (*w).max(c.chars().count());
        }
    }
    let mut out = String::new();
    let _ = write!(out, "{:label_w$}", "");
    for (h, w) in header.iter().zip(&widths) {
        let _ = write!(out, "  {h:>w$}");
    }
    out.push('\n');
    for (label, cells) in rows {
        let _ = write!(out, "{label:<label_w$}");
        for (c, w) in cells.iter().zip(&widths) {
            let _ = write!(out, "  {c:>w$}");
        }
        out.push('\n');
    }
    out
}

pub fn matrix_text(labels: &[String], m: &Matrix64, style: Style) -> String {
    let rows: Vec<(String, Vec<String>)> = (0..m.rows())
        .map(|i| {
            (
                labels[i].clone(),
                m.row(i).iter().map(|&x| cell(x, style)).collect(),
            )
        })
        .collect();
    table_text(labels, &rows)
}

pub fn set_text(labels: &[String], states: &[usize]) -> String {
    let names: Vec<&str> = states.iter().map(|&s| labels[s].as_str()).collect();
    format!("{{{}}}", names.join(", "))
}

pub fn probability(x: f64) -> String {
    cell(x, Style::Probability)
}
