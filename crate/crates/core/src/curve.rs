//! Named tables of sampled series and their CSV representation.
//!
//! A CSV file starts with optional `# key: value` metadata lines, then a
//! header row, then one row per sample. Non-finite values are written as
//! `nan`.

use std::io::{Read, Write};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct Curve {
    pub name: String,
    /// First column is the abscissa.
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
    pub metadata: Vec<(String, String)>,
}

impl Curve {
    pub fn new<S: Into<String>>(name: S, columns: &[&str]) -> Result<Self> {
        if columns.is_empty() {
            return Err(Error::Domain("a curve needs at least one column".into()));
        }
        Ok(Curve {
            name: name.into(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
            metadata: Vec::new(),
        })
    }

    pub fn with_meta<K: Into<String>, V: ToString>(mut self, key: K, value: V) -> Self {
        self.metadata.push((key.into(), value.to_string()));
        self
    }

    /// Appends a row; the abscissa must exceed the previous one.
    pub fn push(&mut self, row: Vec<f64>) -> Result<()> {
        if row.len() != self.columns.len() {
            return Err(Error::Domain(format!(
                "row has {} values, curve {} has {} columns",
                row.len(),
                self.name,
                self.columns.len()
            )));
        }
        if !row[0].is_finite() {
            return Err(Error::Domain(format!("abscissa {} is not finite", row[0])));
        }
        if let Some(last) = self.rows.last() {
            if row[0] <= last[0] {
                return Err(Error::Domain(format!("abscissa {} does not increase past {}", row[0], last[0])));
            }
        }
        self.rows.push(row);
        Ok(())
    }

    pub fn column(&self, label: &str) -> Option<Vec<f64>> {
        let j = self.columns.iter().position(|c| c == label)?;
        Some(self.rows.iter().map(|r| r[j]).collect())
    }

    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "# name: {}", self.name).map_err(io)?;
        for (k, v) in &self.metadata {
            writeln!(out, "# {k}: {v}").map_err(io)?;
        }
        let mut w = csv::Writer::from_writer(out);
        w.write_record(&self.columns).map_err(csv_err)?;
        for row in &self.rows {
            w.write_record(row.iter().map(|&v| format_value(v))).map_err(csv_err)?;
        }
        w.flush().map_err(io)?;
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("csv output is utf-8")
    }

    pub fn read_csv<R: Read>(mut input: R) -> Result<Self> {
        let mut text = String::new();
        input.read_to_string(&mut text).map_err(io)?;
        let mut name = String::new();
        let mut metadata = Vec::new();
        for line in text.lines().take_while(|l| l.starts_with('#')) {
            let body = line.trim_start_matches('#').trim();
            if let Some((k, v)) = body.split_once(':') {
                let (k, v) = (k.trim(), v.trim());
                if k == "name" {
                    name = v.to_string();
                } else {
                    metadata.push((k.to_string(), v.to_string()));
                }
            }
        }
        let mut reader = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(text.as_bytes());
        let columns: Vec<String> = reader.headers().map_err(csv_err)?.iter().map(|s| s.trim().to_string()).collect();
        if columns.is_empty() || columns.iter().all(|c| c.is_empty()) {
            return Err(Error::Parse("missing header row".into()));
        }
        let mut curve = Curve { name, columns, rows: Vec::new(), metadata };
        for record in reader.records() {
            let record = record.map_err(csv_err)?;
            let row = record.iter().map(|s| parse_value(s.trim())).collect::<Result<Vec<f64>>>()?;
            curve.push(row).map_err(|e| Error::Parse(e.to_string()))?;
        }
        Ok(curve)
    }
}

fn format_value(v: f64) -> String {
    if v.is_finite() {
        format!("{v}")
    } else {
        "nan".into()
    }
}

fn parse_value(s: &str) -> Result<f64> {
    if s.eq_ignore_ascii_case("nan") {
        return Ok(f64::NAN);
    }
    s.parse().map_err(|_| Error::Parse(format!("not a number: {s:?}")))
}

fn io(e: std::io::Error) -> Error {
    Error::Io(e.to_string())
}

fn csv_err(e: csv::Error) -> Error {
    Error::Parse(e.to_string())
}
