//! Tabular reports and their serializations.
//!
//! Every command produces a `Report`: named columns plus rows of cells.
//! The same report renders to CSV, JSON, or Markdown. Floats render
//! through the standard shortest round-trip formatting, so writing a
//! report and parsing it back recovers every value exactly, and a
//! fixed input always produces byte-identical output.

use serde_json::{json, Value};

/// One table cell.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    /// A real value, rendered shortest round-trip.
    Float(f64),
    /// A count or index.
    Int(u64),
    /// A verdict or label.
    Text(String),
    /// An absent value, rendered as an empty field.
    Empty,
}

impl Cell {
    /// Text form used by the CSV and Markdown renderers.
    pub fn render(&self) -> String {
        match self {
            Cell::Float(v) => {
                debug_assert!(v.is_finite(), "reports never contain non-finite values");
                format!("{v}")
            }
            Cell::Int(v) => format!("{v}"),
            Cell::Text(t) => t.clone(),
            Cell::Empty => String::new(),
        }
    }

    fn to_json(&self) -> Value {
        match self {
            Cell::Float(v) => json!(v),
            Cell::Int(v) => json!(v),
            Cell::Text(t) => json!(t),
            Cell::Empty => Value::Null,
        }
    }
}

/// A rendered command result: column names and rows of cells.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    /// Name of the command that produced the table.
    pub command: &'static str,
    /// Column names, in output order.
    pub columns: Vec<&'static str>,
    /// Data rows; every row has one cell per column.
    pub rows: Vec<Vec<Cell>>,
}

impl Report {
    /// Renders the table as CSV with a header row.
    pub fn to_csv(&self) -> String {
        let mut writer = csv::Writer::from_writer(Vec::new());
        writer
            .write_record(&self.columns)
            .expect("writing to a vec cannot fail");
        for row in &self.rows {
            debug_assert_eq!(row.len(), self.columns.len());
            let record: Vec<String> = row.iter().map(Cell::render).collect();
            writer
                .write_record(&record)
                .expect("writing to a vec cannot fail");
        }
        let bytes = writer.into_inner().expect("vec writer never errors");
        String::from_utf8(bytes).expect("CSV output is UTF-8 by construction")
    }

    /// Renders the table as a JSON document with explicit column order.
    pub fn to_json(&self) -> String {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|row| Value::Array(row.iter().map(Cell::to_json).collect()))
            .collect();
        let doc = json!({
            "command": self.command,
            "columns": self.columns,
            "rows": rows,
        });
        let mut text = serde_json::to_string_pretty(&doc).expect("report JSON is serializable");
        text.push('\n');
        text
    }

    /// Renders the table as a Markdown pipe table.
    pub fn to_markdown(&self) -> String {
        let mut out = String::new();
        out.push_str("| ");
        out.push_str(&self.columns.join(" | "));
        out.push_str(" |\n|");
        for _ in &self.columns {
            out.push_str(" --- |");
        }
        out.push('\n');
        for row in &self.rows {
            out.push_str("| ");
            let cells: Vec<String> = row.iter().map(Cell::render).collect();
            out.push_str(&cells.join(" | "));
            out.push_str(" |\n");
        }
        out
    }
}

/// A report read back from CSV text; columns are owned strings and
/// numeric-looking fields come back as floats.
#[derive(Debug, Clone, PartialEq)]
pub struct ParsedCsv {
    /// Header row.
    pub columns: Vec<String>,
    /// Data rows.
    pub rows: Vec<Vec<Cell>>,
}

/// Parses CSV text produced by [`Report::to_csv`].
///
/// Fields that parse as finite floats become [`Cell::Float`], empty
/// fields become [`Cell::Empty`], everything else stays text. Errors
/// are returned as messages, never panics, whatever the input.
pub fn parse_report_csv(text: &str) -> Result<ParsedCsv, String> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(false)
        .from_reader(text.as_bytes());
    let columns: Vec<String> = reader
        .headers()
        .map_err(|e| format!("unreadable header: {e}"))?
        .iter()
        .map(str::to_owned)
        .collect();
    if columns.is_empty() {
        return Err("empty header".to_owned());
    }
    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| format!("unreadable record: {e}"))?;
        let row: Vec<Cell> = record
            .iter()
            .map(|field| {
                if field.is_empty() {
                    Cell::Empty
                } else {
                    match field.parse::<f64>() {
                        Ok(v) if v.is_finite() => Cell::Float(v),
                        _ => Cell::Text(field.to_owned()),
                    }
                }
            })
            .collect();
        rows.push(row);
    }
    Ok(ParsedCsv { columns, rows })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Report {
        Report {
            command: "demo",
            columns: vec!["gamma", "label", "count", "maybe"],
            rows: vec![
                vec![
                    Cell::Float(std::f64::consts::FRAC_1_SQRT_2),
                    Cell::Text("FEASIBLE".to_owned()),
                    Cell::Int(16),
                    Cell::Empty,
                ],
                vec![
                    Cell::Float(-0.125),
                    Cell::Text("INFEASIBLE".to_owned()),
                    Cell::Int(0),
                    Cell::Float(2.8284271247461903),
                ],
            ],
        }
    }

    #[test]
    fn csv_round_trip_preserves_every_value() {
        let report = sample();
        let text = report.to_csv();
        let parsed = parse_report_csv(&text).unwrap();
        assert_eq!(parsed.columns, report.columns);
        assert_eq!(
            parsed.rows[0][0],
            Cell::Float(std::f64::consts::FRAC_1_SQRT_2)
        );
        assert_eq!(parsed.rows[0][3], Cell::Empty);
        assert_eq!(parsed.rows[1][3], Cell::Float(2.8284271247461903));
        // Re-rendering the parsed table reproduces the bytes exactly.
        let rerendered = Report {
            command: "demo",
            columns: report.columns.clone(),
            rows: parsed.rows,
        }
        .to_csv();
        assert_eq!(text, rerendered);
    }

    #[test]
    fn float_rendering_is_shortest_round_trip() {
        let value = 0.1 + 0.2;
        let cell = Cell::Float(value);
        assert_eq!(cell.render(), "0.30000000000000004");
        assert_eq!(cell.render().parse::<f64>().unwrap(), value);
    }

    #[test]
    fn json_lists_rows_in_column_order() {
        let text = sample().to_json();
        let doc: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(doc["command"], "demo");
        assert_eq!(doc["columns"][0], "gamma");
        assert_eq!(doc["rows"][0][2], 16);
        assert!(doc["rows"][0][3].is_null());
        assert_eq!(text, sample().to_json());
    }

    #[test]
    fn markdown_has_header_separator_and_rows() {
        let text = sample().to_markdown();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 4);
        assert!(lines[0].starts_with("| gamma | label |"));
        assert_eq!(lines[1], "| --- | --- | --- | --- |");
        assert!(lines[2].contains("FEASIBLE"));
    }

    #[test]
    fn malformed_csv_is_an_error_not_a_panic() {
        assert!(parse_report_csv("a,b\n1,2,3\n").is_err());
        let empty = parse_report_csv("");
        // An empty document has no header row to speak of.
        assert!(empty.is_err() || empty.unwrap().rows.is_empty());
    }
}
