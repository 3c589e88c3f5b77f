use paqs_core::logic::Valuation;
use paqs_core::numfmt::{fmt_sig, round_sig};
use serde_json::{json, Value};

/// A command's result in both output formats.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub text: String,
    pub json: Value,
    /// Verdict contradicts `--expect`, or a checked law failed.
    pub negative: bool,
}

impl Report {
    pub fn new(text: String, json: Value) -> Self {
        Report {
            text,
            json,
            negative: false,
        }
    }

    pub fn negative(mut self, negative: bool) -> Self {
        self.negative = negative;
        self
    }
}

pub fn num(x: f64) -> Value {
    json!(round_sig(x))
}

pub fn valuation_json(v: &Valuation) -> Value {
    Value::Array(
        v.assignments()
            .into_iter()
            .map(|(f, b)| json!({"formula": f, "value": u8::from(b)}))
            .collect(),
    )
}

/// Left-aligned columns separated by two spaces, no trailing blanks.
pub fn table(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = header.iter().map(|h| h.len()).collect();
    for row in rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.len());
        }
    }
    let line = |cells: Vec<&str>| {
        let mut s = String::from("  ");
        for (i, (cell, w)) in cells.iter().zip(&widths).enumerate() {
            if i + 1 == cells.len() {
                s.push_str(cell);
            } else {
                s.push_str(&format!("{cell:<w$}  "));
            }
        }
        s.push('\n');
        s
    };
    let mut out = line(header.to_vec());
    for row in rows {
        out.push_str(&line(row.iter().map(String::as_str).collect()));
    }
    out
}

pub fn sig(x: f64) -> String {
    fmt_sig(x)
}
