//! Deterministic JSON and CSV emission with 17-significant-digit floats.

use std::fs;
use std::io::{self, Write};
use std::path::Path;

use cae_core::scalar::format_f64;
use serde::Serialize;
use serde_json::ser::{Formatter, PrettyFormatter};
use serde_json::Value;

use crate::CliError;

/// Pretty JSON whose floats keep 17 significant digits.
struct Digits17(PrettyFormatter<'static>);

impl Formatter for Digits17 {
    fn write_f64<W: ?Sized + Write>(&mut self, w: &mut W, value: f64) -> io::Result<()> {
        w.write_all(format_f64(value).as_bytes())
    }

    fn write_f32<W: ?Sized + Write>(&mut self, w: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(w, value as f64)
    }

    fn begin_array<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_array(w)
    }

    fn end_array<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array(w)
    }

    fn begin_array_value<W: ?Sized + Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_array_value(w, first)
    }

    fn end_array_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array_value(w)
    }

    fn begin_object<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object(w)
    }

    fn end_object<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object(w)
    }

    fn begin_object_key<W: ?Sized + Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_object_key(w, first)
    }

    fn begin_object_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object_value(w)
    }

    fn end_object_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object_value(w)
    }
}

pub fn json_text(v: &Value) -> String {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, Digits17(PrettyFormatter::new()));
    v.serialize(&mut ser).expect("in-memory JSON write");
    buf.push(b'\n');
    String::from_utf8(buf).expect("JSON is UTF-8")
}

/// CSV text from a header and rows of already formatted fields.
pub fn csv_text(header: &[&str], rows: &[Vec<String>]) -> Result<String, CliError> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
    w.write_record(header).map_err(CliError::io)?;
    for r in rows {
        w.write_record(r).map_err(CliError::io)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::io(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("CSV is UTF-8"))
}

/// Writes `text` to `out`, or stdout when absent.
pub fn emit(text: &str, out: Option<&Path>) -> Result<(), CliError> {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| CliError::usage(format!("cannot write {}: {e}", path.display()))),
        None => io::stdout().write_all(text.as_bytes()).map_err(CliError::io),
    }
}

/// Version sidecar next to `out`, or on stderr without an output file.
pub fn stamp(out: Option<&Path>, command: &str) -> Result<(), CliError> {
    let v = serde_json::json!({"program": "cae", "version": env!("CARGO_PKG_VERSION"), "command": command});
    let text = json_text(&v);
    match out {
        Some(path) => {
            let mut name = path.as_os_str().to_owned();
            name.push(".stamp.json");
            fs::write(&name, text).map_err(|e| CliError::usage(format!("cannot write stamp: {e}")))
        }
        None => {
            eprint!("{text}");
            Ok(())
        }
    }
}

pub fn f(x: f64) -> String {
    format_f64(x)
}
