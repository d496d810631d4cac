//! Row tables rendered as aligned text, CSV or JSON lines.

use std::fmt::Write as _;

use clap::ValueEnum;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Csv,
    Jsonl,
}

/// One row per `n`; the column order is fixed by `columns`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<(u64, Vec<String>)>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Table {
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Text => self.text(),
            Format::Csv => self.csv(),
            Format::Jsonl => self.jsonl(),
        }
    }

    fn text(&self) -> String {
        let mut widths: Vec<usize> = std::iter::once(1)
            .chain(self.columns.iter().map(|c| c.chars().count()))
            .collect();
        for (n, vals) in &self.rows {
            widths[0] = widths[0].max(n.to_string().len());
            for (w, v) in widths[1..].iter_mut().zip(vals) {
                *w = (*w).max(v.chars().count());
            }
        }
        let mut out = String::new();
        let line = |out: &mut String, first: &str, rest: &[String]| {
            let _ = write!(out, "{first:>w$}", w = widths[0]);
            for (v, w) in rest.iter().zip(&widths[1..]) {
                let pad = w - v.chars().count();
                let _ = write!(out, "  {}{v}", " ".repeat(pad));
            }
            out.push('\n');
        };
        line(&mut out, "n", &self.columns);
        for (n, vals) in &self.rows {
            line(&mut out, &n.to_string(), vals);
        }
        out
    }

    fn csv(&self) -> String {
        let field = |s: &str| {
            if s.contains([',', '"', '\n']) {
                format!("\"{}\"", s.replace('"', "\"\""))
            } else {
                s.to_string()
            }
        };
        let mut out = String::from("n");
        for c in &self.columns {
            out.push(',');
            out.push_str(&field(c));
        }
        out.push('\n');
        for (n, vals) in &self.rows {
            out.push_str(&n.to_string());
            for v in vals {
                out.push(',');
                out.push_str(&field(v));
            }
            out.push('\n');
        }
        out
    }

    fn jsonl(&self) -> String {
        let quote = |s: &str| serde_json::to_string(s).expect("string");
        let mut out = String::new();
        for (n, vals) in &self.rows {
            let _ = write!(out, "{{\"n\":{n}");
            for (c, v) in self.columns.iter().zip(vals) {
                let _ = write!(out, ",{}:{}", quote(c), quote(v));
            }
            out.push_str("}\n");
        }
        out
    }
}
