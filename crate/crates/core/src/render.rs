//! Deterministic table rendering (csv, aligned text, markdown).
//!
//! Layouts follow the routing and connectivity tables: rows are inputs
//! (input groups), columns are outputs (output groups). Output is UTF-8 with
//! LF line endings and does not depend on the locale.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Cell {
    /// A wavelength index; shown as `λk` in text and markdown, `k` in csv.
    Wavelength(usize),
    /// A cell listing zero or several wavelengths (illegitimate tables only).
    WavelengthSet(Vec<usize>),
    /// An `(input channel, output channel)` pair, shown as `in,out`.
    Connection(String, String),
}

impl Cell {
    fn display(&self) -> String {
        match self {
            Cell::Wavelength(i) => format!("λ{i}"),
            Cell::WavelengthSet(v) if v.is_empty() => "-".into(),
            Cell::WavelengthSet(v) => v.iter().map(|i| format!("λ{i}")).collect::<Vec<_>>().join("/"),
            Cell::Connection(a, b) => format!("{a},{b}"),
        }
    }

    fn raw(&self) -> String {
        match self {
            Cell::Wavelength(i) => i.to_string(),
            Cell::WavelengthSet(v) => v.iter().map(|i| i.to_string()).collect::<Vec<_>>().join("/"),
            Cell::Connection(a, b) => format!("{a},{b}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TextTable {
    pub corner: String,
    pub column_labels: Vec<String>,
    pub row_labels: Vec<String>,
    pub cells: Vec<Vec<Cell>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TableFormat {
    Csv,
    Text,
    Markdown,
}

impl FromStr for TableFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(TableFormat::Csv),
            "text" | "txt" => Ok(TableFormat::Text),
            "markdown" | "md" => Ok(TableFormat::Markdown),
            other => Err(Error::Usage(format!(
                "unknown table format {other:?} (expected csv, text or markdown)"
            ))),
        }
    }
}

impl fmt::Display for TableFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TableFormat::Csv => "csv",
            TableFormat::Text => "text",
            TableFormat::Markdown => "markdown",
        })
    }
}

pub fn render_table(table: &TextTable, format: TableFormat) -> Vec<u8> {
    match format {
        TableFormat::Csv => render_csv(table),
        TableFormat::Text => render_text(table).into_bytes(),
        TableFormat::Markdown => render_markdown(table).into_bytes(),
    }
}

/// Column labels as the header, then one record per row. Row labels are
/// implied by record order.
fn render_csv(table: &TextTable) -> Vec<u8> {
    if table.column_labels.is_empty() {
        return b"\n".to_vec();
    }
    let mut writer = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    writer
        .write_record(&table.column_labels)
        .expect("writing to memory");
    for row in &table.cells {
        writer
            .write_record(row.iter().map(Cell::raw))
            .expect("writing to memory");
    }
    writer.into_inner().expect("writing to memory")
}

fn render_text(table: &TextTable) -> String {
    let mut grid: Vec<Vec<String>> = Vec::with_capacity(table.cells.len() + 1);
    grid.push(
        std::iter::once(table.corner.clone())
            .chain(table.column_labels.iter().cloned())
            .collect(),
    );
    for (label, row) in table.row_labels.iter().zip(&table.cells) {
        grid.push(
            std::iter::once(label.clone())
                .chain(row.iter().map(Cell::display))
                .collect(),
        );
    }
    let columns = grid.iter().map(Vec::len).max().unwrap_or(0);
    let widths: Vec<usize> = (0..columns)
        .map(|c| {
            grid.iter()
                .filter_map(|r| r.get(c))
                .map(|s| s.chars().count())
                .max()
                .unwrap_or(0)
        })
        .collect();
    let mut out = String::new();
    for row in &grid {
        let mut line = String::new();
        for (c, text) in row.iter().enumerate() {
            if c > 0 {
                line.push_str("  ");
            }
            line.push_str(text);
            let pad = widths[c] - text.chars().count();
            line.extend(std::iter::repeat_n(' ', pad));
        }
        out.push_str(line.trim_end());
        out.push('\n');
    }
    out
}

fn render_markdown(table: &TextTable) -> String {
    let mut out = String::new();
    let header: Vec<&str> = std::iter::once(table.corner.as_str())
        .chain(table.column_labels.iter().map(String::as_str))
        .collect();
    out.push_str(&format!("| {} |\n", header.join(" | ")));
    out.push_str(&format!("|{}\n", "---|".repeat(header.len())));
    for (label, row) in table.row_labels.iter().zip(&table.cells) {
        let cells: Vec<String> = std::iter::once(label.clone())
            .chain(row.iter().map(Cell::display))
            .collect();
        out.push_str(&format!("| {} |\n", cells.join(" | ")));
    }
    out
}
