use std::io::{self, IsTerminal, Write};

use clap::ValueEnum;
use serde_json::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Auto,
    Json,
    Table,
}

impl Format {
    fn resolve(self, stream_is_terminal: bool) -> Format {
        match self {
            Format::Auto if stream_is_terminal => Format::Table,
            Format::Auto => Format::Json,
            other => other,
        }
    }
}

/// A command's result: the report document, the process exit code and, for
/// `construct` without `--out`, the family text that takes stdout.
pub struct Report {
    pub body: Value,
    pub exit: u8,
    pub family_text: Option<String>,
}

impl Report {
    pub fn new(body: Value, exit: u8) -> Self {
        Self {
            body,
            exit,
            family_text: None,
        }
    }

    pub fn emit(&self, format: Format) -> io::Result<()> {
        match &self.family_text {
            Some(text) => {
                io::stdout().lock().write_all(text.as_bytes())?;
                let format = format.resolve(io::stderr().is_terminal());
                write_report(&mut io::stderr().lock(), &self.body, format)
            }
            None => {
                let format = format.resolve(io::stdout().is_terminal());
                write_report(&mut io::stdout().lock(), &self.body, format)
            }
        }
    }
}

fn write_report(out: &mut impl Write, body: &Value, format: Format) -> io::Result<()> {
    match format {
        Format::Table => out.write_all(render_table(body).as_bytes()),
        _ => writeln!(out, "{}", serde_json::to_string_pretty(body)?),
    }
}

/// Two aligned columns of dotted keys and compact values.
pub fn render_table(body: &Value) -> String {
    let mut rows = Vec::new();
    flatten("", body, &mut rows);
    let width = rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
    rows.iter()
        .map(|(k, v)| format!("{k:<width$}  {v}\n"))
        .collect()
}

fn flatten(prefix: &str, value: &Value, rows: &mut Vec<(String, String)>) {
    match value {
        Value::Object(map) if !map.is_empty() => {
            for (k, v) in map {
                let key = if prefix.is_empty() {
                    k.clone()
                } else {
                    format!("{prefix}.{k}")
                };
                flatten(&key, v, rows);
            }
        }
        Value::String(s) => rows.push((prefix.to_string(), s.clone())),
        other => rows.push((prefix.to_string(), other.to_string())),
    }
}
