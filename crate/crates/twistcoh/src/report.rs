//! Deterministic report assembly and serialization for the CLI. Reports are
//! plain tables plus notes; the same `Report` renders as aligned text, CSV,
//! or versioned JSON, byte-for-byte reproducibly.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::fmt;
use std::str::FromStr;

/// Bumped whenever the JSON layout changes.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Section {
    pub title: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl Section {
    pub fn new(title: impl Into<String>, columns: &[&str]) -> Self {
        Section {
            title: title.into(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn row(&mut self, cells: &[String]) {
        debug_assert_eq!(cells.len(), self.columns.len());
        self.rows.push(cells.to_vec());
    }

    pub fn note(&mut self, note: impl Into<String>) {
        self.notes.push(note.into());
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Report {
    pub schema: u32,
    pub command: String,
    /// SHA-256 of the canonical input text (or of the flag string for
    /// input-free commands).
    pub input_digest: String,
    pub sections: Vec<Section>,
}

impl Report {
    pub fn new(command: impl Into<String>, input: &str) -> Self {
        Report {
            schema: SCHEMA_VERSION,
            command: command.into(),
            input_digest: digest(input),
            sections: Vec::new(),
        }
    }

    pub fn push(&mut self, section: Section) {
        self.sections.push(section);
    }
}

pub fn digest(input: &str) -> String {
    let mut h = Sha256::new();
    h.update(input.as_bytes());
    format!("{:x}", h.finalize())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Table,
    Csv,
    Json,
}

#[derive(Debug, thiserror::Error)]
#[error("unknown format `{0}` (expected table, csv, or json)")]
pub struct UnknownFormat(pub String);

impl FromStr for Format {
    type Err = UnknownFormat;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "table" => Ok(Format::Table),
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(UnknownFormat(other.to_string())),
        }
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::Table => "table",
            Format::Csv => "csv",
            Format::Json => "json",
        })
    }
}

pub fn export(report: &Report, format: Format) -> String {
    match format {
        Format::Table => export_table(report),
        Format::Csv => export_csv(report),
        Format::Json => {
            let mut s = serde_json::to_string_pretty(report).expect("report serializes");
            s.push('\n');
            s
        }
    }
}

fn export_table(report: &Report) -> String {
    let mut out = String::new();
    out.push_str(&format!("# {}\n", report.command));
    out.push_str(&format!("# input sha256: {}\n", report.input_digest));
    for section in &report.sections {
        out.push('\n');
        out.push_str(&format!("== {} ==\n", section.title));
        if !section.columns.is_empty() {
            let mut widths: Vec<usize> = section.columns.iter().map(|c| c.len()).collect();
            for row in &section.rows {
                for (i, cell) in row.iter().enumerate() {
                    widths[i] = widths[i].max(cell.len());
                }
            }
            let fmt_row = |cells: &[String]| -> String {
                cells
                    .iter()
                    .enumerate()
                    .map(|(i, c)| format!("{:<width$}", c, width = widths[i]))
                    .collect::<Vec<_>>()
                    .join("  ")
                    .trim_end()
                    .to_string()
            };
            out.push_str(&fmt_row(&section.columns));
            out.push('\n');
            out.push_str(&"-".repeat(widths.iter().sum::<usize>() + 2 * (widths.len() - 1)));
            out.push('\n');
            for row in &section.rows {
                out.push_str(&fmt_row(row));
                out.push('\n');
            }
        }
        for note in &section.notes {
            out.push_str(&format!("note: {}\n", note));
        }
    }
    out
}

fn csv_cell(cell: &str) -> String {
    if cell.contains(',') || cell.contains('"') || cell.contains('\n') {
        format!("\"{}\"", cell.replace('"', "\"\""))
    } else {
        cell.to_string()
    }
}

fn export_csv(report: &Report) -> String {
    let mut out = String::new();
    for (k, section) in report.sections.iter().enumerate() {
        if k > 0 {
            out.push('\n');
        }
        out.push_str(
            &section
                .columns
                .iter()
                .map(|c| csv_cell(c))
                .collect::<Vec<_>>()
                .join(","),
        );
        out.push('\n');
        for row in &section.rows {
            out.push_str(&row.iter().map(|c| csv_cell(c)).collect::<Vec<_>>().join(","));
            out.push('\n');
        }
    }
    out
}
