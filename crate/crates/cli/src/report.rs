//! Output plumbing. Handlers push text lines and JSON fields as they go;
//! `finish` prints exactly one of the two views. JSON reports always carry
//! the exact argv for reproducibility.

use clap::ValueEnum;
use forbid_core::{Code, Error, KSetFamily, SubsetFamily, Word};

pub const EXIT_OK: i32 = 0;
pub const EXIT_ABSENT: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Budget(_) | Error::ScanTooLarge { .. } => EXIT_BUDGET,
        Error::Infeasible { .. } => EXIT_ABSENT,
        _ => EXIT_USAGE,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

pub struct Report {
    format: Format,
    lines: Vec<String>,
    json: serde_json::Map<String, serde_json::Value>,
}

impl Report {
    pub fn new(format: Format, argv: Vec<String>) -> Report {
        let mut json = serde_json::Map::new();
        json.insert("argv".into(), serde_json::json!(argv));
        Report {
            format,
            lines: Vec::new(),
            json,
        }
    }

    /// Text-only output line.
    pub fn line(&mut self, s: impl Into<String>) {
        self.lines.push(s.into());
    }

    /// JSON-only field.
    pub fn set(&mut self, key: &str, value: serde_json::Value) {
        self.json.insert(key.into(), value);
    }

    /// Scalar that shows up in both views. Numbers and booleans keep their
    /// JSON types; everything else lands as a string.
    pub fn kv(&mut self, key: &str, value: impl ToString) {
        let v = value.to_string();
        self.lines.push(format!("{key}: {v}"));
        let parsed = if let Ok(n) = v.parse::<u64>() {
            serde_json::Value::from(n)
        } else if let Ok(b) = v.parse::<bool>() {
            serde_json::Value::from(b)
        } else {
            serde_json::Value::String(v)
        };
        self.json.insert(key.into(), parsed);
    }

    pub fn error(&mut self, err: &Error) {
        if self.format == Format::Json {
            self.json
                .insert("error".into(), serde_json::json!(err.to_string()));
        } else {
            eprintln!("error: {err}");
        }
    }

    pub fn finish(self) {
        use std::io::Write;
        // ignore broken pipes (`forbid ... | head` must not panic)
        let stdout = std::io::stdout();
        let mut out = stdout.lock();
        let _ = match self.format {
            Format::Text => self
                .lines
                .iter()
                .try_for_each(|l| writeln!(out, "{l}")),
            Format::Json => writeln!(
                out,
                "{}",
                serde_json::to_string_pretty(&serde_json::Value::Object(self.json))
                    .expect("report is valid JSON")
            ),
        };
    }
}

pub fn word_line(w: &Word) -> String {
    let syms: Vec<String> = w.symbols().iter().map(|s| s.to_string()).collect();
    syms.join(" ")
}

pub fn word_row(w: &Word) -> serde_json::Value {
    serde_json::json!(w.symbols())
}

pub fn code_rows(c: &Code) -> serde_json::Value {
    let rows: Vec<serde_json::Value> = (0..c.len()).map(|i| word_row(c.word(i))).collect();
    serde_json::json!(rows)
}

/// 1-based element lists, matching the text format.
pub fn family_rows(f: &KSetFamily) -> serde_json::Value {
    let rows: Vec<Vec<usize>> = f
        .sets()
        .map(|s| s.iter().map(|e| e + 1).collect())
        .collect();
    serde_json::json!(rows)
}

pub fn subset_family_rows(f: &SubsetFamily) -> serde_json::Value {
    let rows: Vec<Vec<usize>> = f
        .sets()
        .map(|s| s.iter().map(|e| e + 1).collect())
        .collect();
    serde_json::json!(rows)
}
