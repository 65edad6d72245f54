//! Reading and writing per-field count files.
//!
//! Two layouts are understood. A raw `.counts` file holds one non-negative
//! integer per line; `#` lines are comments, and a `# field: <name>` comment
//! names the field. A `.hist` file holds `citations,count` pairs, optionally
//! under a header line.

use std::fs;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::plfit::CountSample;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum InputFormat {
    Raw,
    Histogram,
}

impl InputFormat {
    /// `.hist` files are histograms; anything else is read as raw counts.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some("hist") => InputFormat::Histogram,
            _ => InputFormat::Raw,
        }
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|source| Error::File {
        path: path.display().to_string(),
        source,
    })
}

fn default_name(path: &Path) -> String {
    path.file_stem()
        .and_then(|s| s.to_str())
        .unwrap_or("field")
        .to_string()
}

/// Reads a field from disk. The field name comes from a `# field:` header if
/// present and from the file stem otherwise.
pub fn ingest(path: &Path, format: InputFormat) -> Result<CountSample> {
    let text = read(path)?;
    let label = path.display().to_string();
    match format {
        InputFormat::Raw => parse_raw(&text, &default_name(path), &label),
        InputFormat::Histogram => parse_histogram(&text, &default_name(path), &label),
    }
}

fn parse_error(path: &str, line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        path: path.to_string(),
        line,
        message: message.into(),
    }
}

fn parse_count(token: &str, path: &str, line: usize) -> Result<u64> {
    token.parse::<u64>().map_err(|_| {
        let message = if token.parse::<i128>().map(|v| v < 0).unwrap_or(false) {
            format!("negative value '{token}'")
        } else {
            format!("'{token}' is not a non-negative integer")
        };
        parse_error(path, line, message)
    })
}

fn field_header(line: &str) -> Option<&str> {
    let rest = line.strip_prefix('#')?.trim_start();
    let name = rest.strip_prefix("field:")?.trim();
    (!name.is_empty()).then_some(name)
}

/// Parses the raw one-count-per-line layout.
pub fn parse_raw(text: &str, fallback_name: &str, path: &str) -> Result<CountSample> {
    let mut name = None;
    let mut counts = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if line.starts_with('#') {
            if name.is_none() {
                name = field_header(line).map(str::to_string);
            }
            continue;
        }
        counts.push(parse_count(line, path, i + 1)?);
    }
    if counts.is_empty() {
        return Err(parse_error(
            path,
            text.lines().count().max(1),
            "no observations in file",
        ));
    }
    CountSample::new(name.unwrap_or_else(|| fallback_name.to_string()), counts)
}

/// Parses the `citations,count` layout and expands it into a multiset.
pub fn parse_histogram(text: &str, fallback_name: &str, path: &str) -> Result<CountSample> {
    let mut name = None;
    for line in text.lines() {
        let line = line.trim();
        if line.starts_with('#') {
            name = field_header(line).map(str::to_string);
            if name.is_some() {
                break;
            }
        }
    }
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .flexible(true)
        .from_reader(text.as_bytes());
    let mut counts = Vec::new();
    let mut first = true;
    for record in reader.records() {
        let record = record?;
        let line = record.position().map(|p| p.line() as usize).unwrap_or(0);
        if record.iter().all(str::is_empty) {
            continue;
        }
        if record.len() != 2 {
            return Err(parse_error(
                path,
                line,
                format!("expected 'citations,count', found {} fields", record.len()),
            ));
        }
        let (value, mult) = (&record[0], &record[1]);
        // A leading line whose first cell is not numeric is a header.
        if first && value.parse::<i128>().is_err() {
            first = false;
            continue;
        }
        first = false;
        let value = parse_count(value, path, line)?;
        let mult = parse_count(mult, path, line)?;
        counts.extend(std::iter::repeat_n(value, mult as usize));
    }
    if counts.is_empty() {
        return Err(parse_error(
            path,
            text.lines().count().max(1),
            "no observations in file",
        ));
    }
    CountSample::new(name.unwrap_or_else(|| fallback_name.to_string()), counts)
}

/// Writes a sample in the raw layout with a `# field:` header.
pub fn emit_raw(sample: &CountSample, path: &Path) -> Result<()> {
    let mut out = String::with_capacity(sample.n() * 4 + 32);
    out.push_str(&format!("# field: {}\n", sample.name()));
    for c in sample.counts() {
        out.push_str(&c.to_string());
        out.push('\n');
    }
    write_file(path, out.as_bytes())
}

/// Writes a sample in the histogram layout with a header line.
pub fn emit_histogram(sample: &CountSample, path: &Path) -> Result<()> {
    let (values, counts) = sample.histogram();
    let mut out = format!("# field: {}\ncitations,count\n", sample.name());
    for (v, c) in values.iter().zip(&counts) {
        out.push_str(&format!("{v},{c}\n"));
    }
    write_file(path, out.as_bytes())
}

pub(crate) fn write_file(path: &Path, bytes: &[u8]) -> Result<()> {
    let wrap = |source| Error::File {
        path: path.display().to_string(),
        source,
    };
    let mut f = fs::File::create(path).map_err(wrap)?;
    f.write_all(bytes).map_err(wrap)
}
