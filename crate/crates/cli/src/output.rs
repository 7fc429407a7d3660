use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

use clap::ValueEnum;
use serde_json::{Map, Value};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Csv,
    Json,
}

/// Where and how a command's records are written.
#[derive(Debug, Clone)]
pub struct OutputSpec {
    pub format: Format,
    pub destination: Option<PathBuf>,
    pub precision: usize,
}

impl OutputSpec {
    pub fn new(format: Format, destination: Option<PathBuf>, precision: usize) -> Result<Self, CliError> {
        if !(4..=17).contains(&precision) {
            return Err(CliError::Usage(format!("precision must lie in [4, 17], got {precision}")));
        }
        Ok(OutputSpec {
            format,
            destination,
            precision,
        })
    }

    /// Shortest decimal that round-trips the value rounded to `precision` significant digits.
    pub fn number(&self, v: f64) -> String {
        if !v.is_finite() {
            return v.to_string();
        }
        let rounded: f64 = format!("{:.*e}", self.precision - 1, v).parse().unwrap_or(v);
        format!("{rounded:?}")
    }

    pub fn write(&self, doc: &Document) -> Result<(), CliError> {
        let body = match self.format {
            Format::Text => self.text(doc),
            Format::Csv => self.csv(doc)?,
            Format::Json => self.json(doc)?,
        };
        match &self.destination {
            Some(path) => std::fs::write(path, body).map_err(|e| CliError::Io(format!("{}: {e}", path.display()))),
            None => std::io::stdout()
                .write_all(body.as_bytes())
                .map_err(|e| CliError::Io(e.to_string())),
        }
    }

    fn cell(&self, c: &Cell) -> String {
        match c {
            Cell::Num(v) => self.number(*v),
            Cell::Int(i) => i.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Bool(b) => b.to_string(),
        }
    }

    fn json_cell(&self, c: &Cell) -> Value {
        match c {
            Cell::Num(v) => {
                let r: f64 = self.number(*v).parse().unwrap_or(*v);
                serde_json::Number::from_f64(r).map(Value::Number).unwrap_or(Value::Null)
            }
            Cell::Int(i) => Value::from(*i),
            Cell::Text(s) => Value::from(s.as_str()),
            Cell::Bool(b) => Value::from(*b),
        }
    }

    fn text(&self, doc: &Document) -> String {
        let mut out = String::new();
        if let Some(t) = &doc.text {
            out.push_str(t);
        } else if !doc.columns.is_empty() {
            let cells: Vec<Vec<String>> = doc.rows.iter().map(|r| r.iter().map(|c| self.cell(c)).collect()).collect();
            let widths: Vec<usize> = doc
                .columns
                .iter()
                .enumerate()
                .map(|(i, h)| cells.iter().map(|r| r[i].len()).chain([h.len()]).max().unwrap_or(0))
                .collect();
            let line = |parts: Vec<&str>| {
                let padded: Vec<String> = parts.iter().zip(&widths).map(|(p, w)| format!("{p:<w$}")).collect();
                padded.join("  ").trim_end().to_string()
            };
            let _ = writeln!(out, "{}", line(doc.columns.iter().map(String::as_str).collect()));
            for r in &cells {
                let _ = writeln!(out, "{}", line(r.iter().map(String::as_str).collect()));
            }
        }
        for (k, v) in &doc.summary {
            let _ = writeln!(out, "{k}: {}", self.cell(v));
        }
        out
    }

    fn csv(&self, doc: &Document) -> Result<String, CliError> {
        let mut w = csv::Writer::from_writer(Vec::new());
        if !doc.columns.is_empty() {
            w.write_record(&doc.columns).map_err(|e| CliError::Io(e.to_string()))?;
            for r in &doc.rows {
                w.write_record(r.iter().map(|c| self.cell(c))).map_err(|e| CliError::Io(e.to_string()))?;
            }
        }
        let mut out = String::from_utf8(w.into_inner().map_err(|e| CliError::Io(e.to_string()))?)
            .map_err(|e| CliError::Io(e.to_string()))?;
        for (k, v) in &doc.summary {
            let _ = writeln!(out, "# {k},{}", self.cell(v));
        }
        Ok(out)
    }

    fn json(&self, doc: &Document) -> Result<String, CliError> {
        let rows: Vec<Value> = doc
            .rows
            .iter()
            .map(|r| {
                let obj: Map<String, Value> = doc.columns.iter().cloned().zip(r.iter().map(|c| self.json_cell(c))).collect();
                Value::Object(obj)
            })
            .collect();
        let mut top = Map::new();
        let value = if doc.summary.is_empty() && rows.len() == 1 {
            rows.into_iter().next().unwrap_or(Value::Null)
        } else {
            if !doc.columns.is_empty() {
                top.insert("rows".into(), Value::Array(rows));
            }
            for (k, v) in &doc.summary {
                top.insert(k.clone(), self.json_cell(v));
            }
            Value::Object(top)
        };
        let mut s = serde_json::to_string_pretty(&value).map_err(|e| CliError::Io(e.to_string()))?;
        s.push('\n');
        Ok(s)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(i64),
    Text(String),
    Bool(bool),
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<i64> for Cell {
    fn from(v: i64) -> Self {
        Cell::Int(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
    }
}

/// A table of records followed by `key: value` summary lines.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Document {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
    pub summary: Vec<(String, Cell)>,
    /// Replaces the table in text format when set.
    pub text: Option<String>,
}

impl Document {
    pub fn table(columns: &[&str]) -> Self {
        Document {
            columns: columns.iter().map(|c| c.to_string()).collect(),
            ..Default::default()
        }
    }

    /// A single record.
    pub fn record(fields: Vec<(&str, Cell)>) -> Self {
        let (columns, row): (Vec<String>, Vec<Cell>) = fields.into_iter().map(|(k, v)| (k.to_string(), v)).unzip();
        Document {
            columns,
            rows: vec![row],
            ..Default::default()
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn note(&mut self, key: &str, value: impl Into<Cell>) {
        self.summary.push((key.to_string(), value.into()));
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(format: Format, precision: usize) -> OutputSpec {
        OutputSpec::new(format, None, precision).unwrap()
    }

    #[test]
    fn numbers_round_to_precision() {
        let s = spec(Format::Text, 6);
        assert_eq!(s.number(std::f64::consts::PI), "3.14159");
        assert_eq!(s.number(-1.7475645946331822), "-1.74756");
        assert_eq!(s.number(1.234567e-20), "1.23457e-20");
        assert_eq!(s.number(2.0), "2.0");
        assert_eq!(spec(Format::Text, 17).number(0.1), "0.1");
    }

    #[test]
    fn precision_is_bounded() {
        assert!(OutputSpec::new(Format::Csv, None, 3).is_err());
        assert!(OutputSpec::new(Format::Csv, None, 18).is_err());
    }

    #[test]
    fn csv_and_json_layouts() {
        let mut d = Document::table(&["x", "y"]);
        d.push(vec![0.5.into(), 1.0.into()]);
        d.note("argmax", "0.5+1i");
        assert_eq!(spec(Format::Csv, 12).csv(&d).unwrap(), "x,y\n0.5,1.0\n# argmax,0.5+1i\n");
        let j: Value = serde_json::from_str(&spec(Format::Json, 12).json(&d).unwrap()).unwrap();
        assert_eq!(j["rows"][0]["x"], 0.5);
        assert_eq!(j["argmax"], "0.5+1i");
        let r = Document::record(vec![("value", 2.0.into())]);
        let j: Value = serde_json::from_str(&spec(Format::Json, 12).json(&r).unwrap()).unwrap();
        assert_eq!(j["value"], 2.0);
    }
}
