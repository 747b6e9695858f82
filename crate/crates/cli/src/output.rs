//! Deterministic result serialization.
//!
//! Floats are printed with 17 significant digits (`{:.16e}`) in both CSV and
//! JSON so every `f64` round-trips exactly and repeated runs are
//! byte-identical. CSV starts with a single `#`-prefixed header line naming
//! columns and units; JSON output is a single object with the three
//! top-level keys `config_echo`, `results` and `diagnostics` (keys sorted,
//! one line).

use crate::error::CliError;
use serde::Serialize;
use serde_json::ser::Formatter;
use serde_json::Value;
use std::io::{self, Write};
use std::path::PathBuf;

/// One float, 17 significant digits, exponent notation.
pub fn fmt_f64(value: f64) -> String {
    format!("{value:.16e}")
}

/// JSON formatter that prints every f64 with full round-trip precision.
struct PreciseFormatter;

impl Formatter for PreciseFormatter {
    fn write_f64<W>(&mut self, writer: &mut W, value: f64) -> io::Result<()>
    where
        W: ?Sized + Write,
    {
        write!(writer, "{value:.16e}")
    }
}

/// Serialize a JSON value compactly with precise floats, trailing newline.
pub fn json_to_string(value: &Value) -> String {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, PreciseFormatter);
    value
        .serialize(&mut ser)
        .expect("serializing an in-memory JSON value cannot fail");
    buf.push(b'\n');
    String::from_utf8(buf).expect("JSON output is UTF-8")
}

/// The standard JSON envelope shared by all subcommands.
pub fn json_envelope(config_echo: Value, results: Value, diagnostics: Value) -> String {
    json_to_string(&serde_json::json!({
        "config_echo": config_echo,
        "results": results,
        "diagnostics": diagnostics,
    }))
}

/// A finite f64 as a JSON value.
pub fn num(value: f64) -> Value {
    serde_json::Number::from_f64(value)
        .map(Value::Number)
        .expect("result values are finite")
}

/// Assemble a CSV document: one `# ...` header line, then data rows.
pub struct Csv {
    lines: Vec<String>,
}

impl Csv {
    pub fn new(header: &str) -> Self {
        Csv {
            lines: vec![format!("# {header}")],
        }
    }

    pub fn row(&mut self, fields: &[String]) {
        self.lines.push(fields.join(","));
    }

    pub fn float_row(&mut self, values: &[f64]) {
        self.row(&values.iter().copied().map(fmt_f64).collect::<Vec<_>>());
    }

    /// A trailing comment line (used by `scan` for skips and the summary).
    pub fn comment(&mut self, text: &str) {
        self.lines.push(format!("# {text}"));
    }

    pub fn finish(self) -> String {
        let mut out = self.lines.join("\n");
        out.push('\n');
        out
    }
}

/// Where results go: `--out PATH` or stdout.
pub struct Sink {
    path: Option<PathBuf>,
}

impl Sink {
    pub fn new(path: Option<PathBuf>) -> Self {
        Sink { path }
    }

    pub fn write(&self, content: &str) -> Result<(), CliError> {
        match &self.path {
            None => {
                let mut stdout = io::stdout().lock();
                stdout
                    .write_all(content.as_bytes())
                    .and_then(|()| stdout.flush())
                    .map_err(|e| CliError::Io(format!("writing to stdout: {e}")))
            }
            Some(path) => std::fs::write(path, content)
                .map_err(|e| CliError::Io(format!("writing {}: {e}", path.display()))),
        }
    }
}
