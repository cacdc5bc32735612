//! Report records and their text, JSON-lines and CSV renderings.
//!
//! Every format is rendered from the same ordered key/value body, so the
//! numbers shown by each format are the same values.

use std::fmt;
use std::io::{self, Write};
use std::str::FromStr;

use serde_json::{Map, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Text,
    Json,
    Csv,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "text" => Ok(Format::Text),
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            other => Err(format!(
                "unknown format {other:?} (expected text, json or csv)"
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Pi,
    Range,
    Prime,
    Verify,
    Bench,
}

impl Kind {
    pub fn as_str(self) -> &'static str {
        match self {
            Kind::Pi => "pi",
            Kind::Range => "range",
            Kind::Prime => "prime",
            Kind::Verify => "verify",
            Kind::Bench => "bench",
        }
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One output line.
#[derive(Debug, Clone, PartialEq)]
pub struct OutputRecord {
    pub kind: Kind,
    pub body: Map<String, Value>,
}

impl OutputRecord {
    pub fn new(kind: Kind) -> Self {
        OutputRecord {
            kind,
            body: Map::new(),
        }
    }

    pub fn field(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.body.insert(key.to_owned(), value.into());
        self
    }

    pub fn to_json(&self) -> Value {
        let mut obj = Map::new();
        obj.insert("kind".into(), Value::String(self.kind.as_str().into()));
        obj.extend(self.body.clone());
        Value::Object(obj)
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn csv_cell(v: &Value) -> String {
    let s = scalar(v);
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s
    }
}

/// Writes records, emitting a CSV header whenever the kind changes.
pub struct Renderer<'w> {
    format: Format,
    out: &'w mut dyn Write,
    last_kind: Option<Kind>,
}

impl<'w> Renderer<'w> {
    pub fn new(format: Format, out: &'w mut dyn Write) -> Self {
        Renderer {
            format,
            out,
            last_kind: None,
        }
    }

    pub fn emit(&mut self, record: &OutputRecord) -> io::Result<()> {
        match self.format {
            Format::Json => writeln!(self.out, "{}", record.to_json()),
            Format::Csv => {
                if self.last_kind != Some(record.kind) {
                    let header: Vec<&str> = std::iter::once("kind")
                        .chain(record.body.keys().map(String::as_str))
                        .collect();
                    writeln!(self.out, "{}", header.join(","))?;
                    self.last_kind = Some(record.kind);
                }
                let row: Vec<String> = std::iter::once(record.kind.to_string())
                    .chain(record.body.values().map(csv_cell))
                    .collect();
                writeln!(self.out, "{}", row.join(","))
            }
            Format::Text => {
                let mut line = record.kind.to_string();
                for (k, v) in &record.body {
                    if v.is_null() {
                        continue;
                    }
                    line.push_str(&format!("  {k}={}", scalar(v)));
                }
                writeln!(self.out, "{line}")
            }
        }
    }
}
