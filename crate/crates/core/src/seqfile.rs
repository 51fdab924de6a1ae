//! Sequence file format.
//!
//! ```text
//! % seq <id> class=<cbr|rea> [key=value ...]
//! getball(time_1,robot_1).
//! ...
//!
//! % seq <id> class=...
//! ```
//! Records are separated by blank lines; one atom per line, terminated by `.`.
//! Lines starting with `%` that are not record headers are comments.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use thiserror::Error;

use crate::parse::{ParseError, Signatures};
use crate::sequence::{ClassLabel, RelationalSequence};
use crate::vocab::normalize_atom;

#[derive(Debug, Error)]
pub enum SeqFileError {
    #[error("line {line}: {source}")]
    Atom {
        line: usize,
        #[source]
        source: ParseError,
    },
    #[error("line {line}: {message}")]
    Format { line: usize, message: String },
}

fn format_err(line: usize, message: impl Into<String>) -> SeqFileError {
    SeqFileError::Format {
        line,
        message: message.into(),
    }
}

pub fn write_sequences(sequences: &[RelationalSequence]) -> String {
    let mut out = String::new();
    for (i, s) in sequences.iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        write!(out, "% seq {} class={}", s.id, s.class_label).unwrap();
        for (k, v) in &s.attrs {
            write!(out, " {k}={v}").unwrap();
        }
        out.push('\n');
        for a in &s.atoms {
            writeln!(out, "{a}.").unwrap();
        }
    }
    out
}

fn parse_header(line_no: usize, rest: &str) -> Result<RelationalSequence, SeqFileError> {
    let mut parts = rest.split_whitespace();
    let id = parts
        .next()
        .ok_or_else(|| format_err(line_no, "record header without id"))?;
    let mut class = None;
    let mut attrs = BTreeMap::new();
    for kv in parts {
        let (k, v) = kv
            .split_once('=')
            .ok_or_else(|| format_err(line_no, format!("malformed header field '{kv}'")))?;
        if k.is_empty() || v.is_empty() {
            return Err(format_err(
                line_no,
                format!("malformed header field '{kv}'"),
            ));
        }
        if k == "class" {
            class = Some(
                v.parse::<ClassLabel>()
                    .map_err(|m| format_err(line_no, m))?,
            );
        } else if attrs.insert(k.to_string(), v.to_string()).is_some() {
            return Err(format_err(line_no, format!("duplicate header field '{k}'")));
        }
    }
    let class = class.ok_or_else(|| format_err(line_no, "record header without class="))?;
    let mut s = RelationalSequence::new(id, class, Vec::new());
    s.attrs = attrs;
    Ok(s)
}

/// Parses a sequence file. Atoms must be ground and predicate arities
/// consistent across the whole file.
pub fn read_sequences(text: &str) -> Result<Vec<RelationalSequence>, SeqFileError> {
    let mut out = Vec::new();
    let mut current: Option<RelationalSequence> = None;
    let mut sigs = Signatures::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() {
            if let Some(s) = current.take() {
                out.push(s);
            }
            continue;
        }
        if let Some(comment) = line.strip_prefix('%') {
            let comment = comment.trim_start();
            if let Some(rest) = comment.strip_prefix("seq ") {
                if let Some(s) = current.take() {
                    out.push(s);
                }
                current = Some(parse_header(line_no, rest)?);
            }
            continue;
        }
        let seq = current
            .as_mut()
            .ok_or_else(|| format_err(line_no, "atom outside of a record"))?;
        let body = line
            .strip_suffix('.')
            .ok_or_else(|| format_err(line_no, "atom not terminated by '.'"))?;
        let atom = sigs.parse_atom(body).map_err(|source| SeqFileError::Atom {
            line: line_no,
            source,
        })?;
        if !atom.is_ground() {
            return Err(format_err(line_no, format!("non-ground atom {atom}")));
        }
        seq.atoms.push(normalize_atom(atom));
    }
    if let Some(s) = current.take() {
        out.push(s);
    }
    Ok(out)
}
