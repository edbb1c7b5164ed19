//! JSON Lines ingestion and emission.
//!
//! One line per instance. Accepted shapes depend on the payload kind:
//!
//! | kind             | one item              | several items                 |
//! |------------------|-----------------------|-------------------------------|
//! | `text`           | `"a cat"`             | `["a cat", "the cat"]`        |
//! | `class_label`    | `3`                   | `[3, 1]`                      |
//! | `label_sequence` | `["B-PER", "O"]`      | `[["B-PER", "O"], ["O", "O"]]` |
//!
//! Blank lines are skipped.

use std::fs;
use std::io::{BufRead, BufReader, Read, Write};
use std::path::Path;

use serde_json::Value;

use crate::collection::{validate_collection, EvaluationCollection, PayloadKind, RawEntry};
use crate::error::{Error, Result};

fn ingest(line: usize, message: impl Into<String>) -> Error {
    Error::Ingest { line, message: message.into() }
}

fn strings(values: &[Value]) -> Option<Vec<String>> {
    values.iter().map(|v| v.as_str().map(str::to_owned)).collect()
}

fn labels(values: &[Value]) -> Option<Vec<i64>> {
    values.iter().map(Value::as_i64).collect()
}

/// Parses one line's JSON value as an entry of the given kind.
pub fn parse_entry(value: Value, kind: PayloadKind, line: usize) -> Result<RawEntry> {
    let shape_error = || {
        let want = match kind {
            PayloadKind::Text => "a string or an array of strings",
            PayloadKind::ClassLabel => "an integer label or an array of integer labels",
            PayloadKind::LabelSequence => "an array of tags or an array of tag arrays",
        };
        ingest(line, format!("expected {want} for {kind} input"))
    };
    match (kind, value) {
        (PayloadKind::Text, Value::String(s)) => Ok(RawEntry::Text(s)),
        (PayloadKind::Text, Value::Array(a)) => strings(&a).map(RawEntry::TextList).ok_or_else(shape_error),
        (PayloadKind::ClassLabel, v @ Value::Number(_)) => v.as_i64().map(RawEntry::Label).ok_or_else(shape_error),
        (PayloadKind::ClassLabel, Value::Array(a)) => labels(&a).map(RawEntry::LabelList).ok_or_else(shape_error),
        (PayloadKind::LabelSequence, Value::Array(a)) => {
            if a.iter().all(Value::is_array) && !a.is_empty() {
                a.iter()
                    .map(|inner| inner.as_array().and_then(|v| strings(v)))
                    .collect::<Option<Vec<_>>>()
                    .map(RawEntry::TagsList)
                    .ok_or_else(shape_error)
            } else {
                strings(&a).map(RawEntry::Tags).ok_or_else(shape_error)
            }
        }
        _ => Err(shape_error()),
    }
}

/// Reads every non-blank line of `reader` as one entry.
pub fn read_entries(reader: impl Read, kind: PayloadKind) -> Result<Vec<RawEntry>> {
    let mut out = Vec::new();
    for (i, line) in BufReader::new(reader).lines().enumerate() {
        let line_no = i + 1;
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let value: Value = serde_json::from_str(&line).map_err(|e| ingest(line_no, format!("invalid JSON: {e}")))?;
        out.push(parse_entry(value, kind, line_no)?);
    }
    Ok(out)
}

pub fn read_entries_from(path: &Path, kind: PayloadKind) -> Result<Vec<RawEntry>> {
    let file = fs::File::open(path)
        .map_err(|e| Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display()))))?;
    read_entries(file, kind)
}

/// Reads paired prediction and reference files into a validated collection.
pub fn load_collection(predictions: &Path, references: &Path, kind: PayloadKind) -> Result<EvaluationCollection> {
    let p = read_entries_from(predictions, kind)?;
    let r = read_entries_from(references, kind)?;
    validate_collection(p, r)
}

fn entry_json(entry: &RawEntry) -> Value {
    match entry {
        RawEntry::Text(s) => Value::from(s.as_str()),
        RawEntry::TextList(v) if v.len() == 1 => Value::from(v[0].as_str()),
        RawEntry::TextList(v) => Value::from(v.clone()),
        RawEntry::Label(l) => Value::from(*l),
        RawEntry::LabelList(v) if v.len() == 1 => Value::from(v[0]),
        RawEntry::LabelList(v) => Value::from(v.clone()),
        RawEntry::Tags(t) => Value::from(t.clone()),
        RawEntry::TagsList(v) if v.len() == 1 => Value::from(v[0].clone()),
        RawEntry::TagsList(v) => Value::Array(v.iter().map(|t| Value::from(t.clone())).collect()),
    }
}

/// Writes entries one per line, using the single-item shape where possible.
pub fn write_entries(mut writer: impl Write, entries: &[RawEntry]) -> Result<()> {
    for e in entries {
        serde_json::to_writer(&mut writer, &entry_json(e)).map_err(std::io::Error::from)?;
        writer.write_all(b"\n")?;
    }
    Ok(())
}
