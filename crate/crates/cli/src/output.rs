//! Tabular output in the three supported encodings.

use std::fmt::Write as _;

use exactprob::Rational;
use serde_json::{Map, Value};

use crate::args::Format;

pub enum Cell {
    Text(String),
    Exact(Rational),
    /// A rounded decimal, kept as the string it was printed as.
    Approx(String),
    Flag(bool),
    Count(usize),
    Empty,
}

impl Cell {
    fn plain(&self) -> String {
        match self {
            Cell::Text(s) | Cell::Approx(s) => s.clone(),
            Cell::Exact(r) => r.to_string(),
            Cell::Flag(b) => if *b { "T" } else { "F" }.to_string(),
            Cell::Count(n) => n.to_string(),
            Cell::Empty => String::new(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Flag(b) => Value::Bool(*b),
            Cell::Count(n) => Value::from(*n),
            Cell::Empty => Value::Null,
            other => Value::String(other.plain()),
        }
    }
}

pub struct Sheet {
    pub header: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
    /// In JSON lines, the first `n` columns go into an object under `key`.
    pub nest: Option<(String, usize)>,
}

impl Sheet {
    pub fn new<S: Into<String>>(header: impl IntoIterator<Item = S>) -> Self {
        Sheet {
            header: header.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
            nest: None,
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Text => self.text(),
            Format::Csv => self.csv(),
            Format::Jsonl => self.jsonl(),
        }
    }

    /// Left-aligned columns two spaces apart, trailing blanks trimmed.
    pub fn text(&self) -> String {
        let cells: Vec<Vec<String>> = self
            .rows
            .iter()
            .map(|r| r.iter().map(Cell::plain).collect())
            .collect();
        let mut widths: Vec<usize> = self.header.iter().map(|h| h.chars().count()).collect();
        for row in &cells {
            for (w, c) in widths.iter_mut().zip(row) {
                *w = (*w).max(c.chars().count());
            }
        }
        let mut out = String::new();
        for row in std::iter::once(&self.header).chain(&cells) {
            let mut line = String::new();
            for (i, (c, w)) in row.iter().zip(&widths).enumerate() {
                if i > 0 {
                    line.push_str("  ");
                }
                let _ = write!(line, "{c:<w$}");
            }
            out.push_str(line.trim_end());
            out.push('\n');
        }
        out
    }

    /// Exact values and text are always quoted, so `"1"` and `"1/2"` read
    /// back as the same kind of field; decimals and counts are bare.
    fn csv(&self) -> String {
        let mut out = String::new();
        let header: Vec<String> = self.header.iter().map(|h| quoted(h)).collect();
        out.push_str(&header.join(","));
        out.push('\n');
        for row in &self.rows {
            let fields: Vec<String> = row
                .iter()
                .map(|c| match c {
                    Cell::Approx(_) | Cell::Count(_) | Cell::Empty => c.plain(),
                    _ => quoted(&c.plain()),
                })
                .collect();
            out.push_str(&fields.join(","));
            out.push('\n');
        }
        out
    }

    fn jsonl(&self) -> String {
        let mut out = String::new();
        for row in &self.rows {
            let mut obj = Map::new();
            let mut cols = self.header.iter().zip(row);
            if let Some((key, n)) = &self.nest {
                let inner: Map<String, Value> = cols
                    .by_ref()
                    .take(*n)
                    .map(|(h, c)| (h.clone(), c.json()))
                    .collect();
                obj.insert(key.clone(), Value::Object(inner));
            }
            for (h, c) in cols {
                obj.insert(h.clone(), c.json());
            }
            out.push_str(&Value::Object(obj).to_string());
            out.push('\n');
        }
        out
    }
}

fn quoted(field: &str) -> String {
    format!("\"{}\"", field.replace('"', "\"\""))
}
