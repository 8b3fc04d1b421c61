use std::io::{self, Write};

use clap::ValueEnum;
use serde::Serialize;

pub const SCHEMA: &str = "charsum/1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Serialize)]
struct Header<'a> {
    schema: &'static str,
    command: &'a str,
    p: u64,
    k: usize,
    seed: u64,
}

/// Writes command output in the selected format. JSON output is one object per
/// line, starting with a header object.
pub struct Emitter<W: Write> {
    pub format: Format,
    w: W,
}

impl<W: Write> Emitter<W> {
    pub fn new(format: Format, w: W) -> Self {
        Self { format, w }
    }

    pub fn header(&mut self, command: &str, p: u64, k: usize, seed: u64) -> io::Result<()> {
        match self.format {
            Format::Json => {
                let h = Header { schema: SCHEMA, command, p, k, seed };
                self.json(&h)
            }
            Format::Text => writeln!(self.w, "# {command}  p={p} k={k} seed={seed}"),
            Format::Csv => {
                eprintln!("# {command}  p={p} k={k} seed={seed}");
                Ok(())
            }
        }
    }

    pub fn json<T: Serialize>(&mut self, value: &T) -> io::Result<()> {
        serde_json::to_writer(&mut self.w, value)?;
        writeln!(self.w)
    }

    /// Emits `value` as JSON, or the given line for CSV/text.
    pub fn record<T: Serialize>(&mut self, value: &T, csv: &str, text: &str) -> io::Result<()> {
        match self.format {
            Format::Json => self.json(value),
            Format::Csv => writeln!(self.w, "{csv}"),
            Format::Text => writeln!(self.w, "{text}"),
        }
    }

    pub fn csv(&mut self, line: &str) -> io::Result<()> {
        if self.format == Format::Csv {
            writeln!(self.w, "{line}")?;
        }
        Ok(())
    }

    pub fn text(&mut self, line: &str) -> io::Result<()> {
        if self.format == Format::Text {
            writeln!(self.w, "{line}")?;
        }
        Ok(())
    }

    pub fn raw(&mut self, s: &str) -> io::Result<()> {
        self.w.write_all(s.as_bytes())
    }

    pub fn flush(&mut self) -> io::Result<()> {
        self.w.flush()
    }
}
