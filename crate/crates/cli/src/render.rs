use std::fs;
use std::io::Write;
use std::path::Path;

use serde::Serialize;

use crate::commands::CliError;
use crate::Format;

/// Rendered command output plus the exit status it implies
/// (0 = success, 1 = mathematical mismatch).
pub struct Output {
    pub text: String,
    pub status: u8,
}

impl Output {
    pub fn ok(text: String) -> Self {
        Output { text, status: 0 }
    }

    pub fn with_status(text: String, passed: bool) -> Self {
        Output { text, status: if passed { 0 } else { 1 } }
    }

    pub fn write(&self, path: Option<&Path>) -> Result<(), CliError> {
        match path {
            Some(p) => fs::write(p, &self.text)?,
            None => std::io::stdout().write_all(self.text.as_bytes())?,
        }
        Ok(())
    }
}

pub fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("output serializes");
    s.push('\n');
    s
}

pub fn csv_rows<S: AsRef<str>>(header: &[&str], rows: impl IntoIterator<Item = Vec<S>>) -> Result<String, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    if !header.is_empty() {
        w.write_record(header).map_err(|e| CliError::Usage(e.to_string()))?;
    }
    for row in rows {
        w.write_record(row.iter().map(|s| s.as_ref())).map_err(|e| CliError::Usage(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Usage(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

/// Right-aligned columns.
pub fn table(rows: &[Vec<String>]) -> String {
    let width = rows.iter().flatten().map(|s| s.chars().count()).max().unwrap_or(0);
    let mut out = String::new();
    for row in rows {
        let cells: Vec<String> = row.iter().map(|c| format!("{c:>width$}")).collect();
        out.push_str("  ");
        out.push_str(&cells.join("  "));
        out.push('\n');
    }
    out
}

pub fn pick(format: Format, json: impl FnOnce() -> String, csv: impl FnOnce() -> Result<String, CliError>, pretty: impl FnOnce() -> String) -> Result<String, CliError> {
    match format {
        Format::Json => Ok(json()),
        Format::Csv => csv(),
        Format::Pretty => Ok(pretty()),
    }
}
