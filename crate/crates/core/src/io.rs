//! Matrix text and record formats.
//!
//! Text: `m` lines of `n` space-separated integers per matrix, matrices
//! separated by one blank line (`#` lines are comments). Records: one JSON object per line with
//! fields `m`, `n`, `k`, `rows`.

use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::matrix::IntegerMatrix;

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

fn parse_err(line: usize, message: impl Into<String>) -> FormatError {
    FormatError::Parse {
        line,
        message: message.into(),
    }
}

#[derive(Serialize, Deserialize)]
struct RawRecord {
    m: usize,
    n: usize,
    k: u64,
    rows: Vec<Vec<i32>>,
}

/// A matrix together with its weight.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatrixRecord {
    pub k: u64,
    pub matrix: IntegerMatrix,
}

pub fn record_line(k: u64, m: &IntegerMatrix) -> String {
    let raw = RawRecord {
        m: m.rows(),
        n: m.cols(),
        k,
        rows: m.to_rows(),
    };
    serde_json::to_string(&raw).expect("records always serialize")
}

pub fn write_records<W: Write>(w: &mut W, k: u64, matrices: &[IntegerMatrix]) -> std::io::Result<()> {
    for m in matrices {
        writeln!(w, "{}", record_line(k, m))?;
    }
    w.flush()
}

pub fn parse_record(line_no: usize, line: &str) -> Result<MatrixRecord, FormatError> {
    let raw: RawRecord = serde_json::from_str(line).map_err(|e| parse_err(line_no, e.to_string()))?;
    if raw.rows.len() != raw.m {
        return Err(parse_err(line_no, format!("expected {} rows, found {}", raw.m, raw.rows.len())));
    }
    if let Some((i, r)) = raw.rows.iter().enumerate().find(|(_, r)| r.len() != raw.n) {
        return Err(parse_err(
            line_no,
            format!("row {} has {} entries, expected {}", i + 1, r.len(), raw.n),
        ));
    }
    let matrix = IntegerMatrix::from_rows(&raw.rows).map_err(|e| parse_err(line_no, e.to_string()))?;
    Ok(MatrixRecord { k: raw.k, matrix })
}

/// Reads one record per non-empty line.
pub fn read_records<R: BufRead>(r: R) -> Result<Vec<MatrixRecord>, FormatError> {
    let mut out = Vec::new();
    for (i, line) in r.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        out.push(parse_record(i + 1, &line)?);
    }
    Ok(out)
}

pub fn format_text(matrices: &[IntegerMatrix]) -> String {
    let mut s = String::new();
    for (i, m) in matrices.iter().enumerate() {
        if i > 0 {
            s.push_str("\n\n");
        }
        s.push_str(&m.to_string());
    }
    if !matrices.is_empty() {
        s.push('\n');
    }
    s
}

/// Parses the text format; blank lines separate matrices and lines starting
/// with `#` are ignored.
pub fn parse_text(text: &str) -> Result<Vec<IntegerMatrix>, FormatError> {
    let mut out = Vec::new();
    let mut block: Vec<Vec<i32>> = Vec::new();
    let mut block_start = 1;
    let flush = |block: &mut Vec<Vec<i32>>, start: usize, out: &mut Vec<IntegerMatrix>| {
        if block.is_empty() {
            return Ok(());
        }
        let m = IntegerMatrix::from_rows(block).map_err(|e| parse_err(start, e.to_string()))?;
        out.push(m);
        block.clear();
        Ok::<(), FormatError>(())
    };
    for (i, line) in text.lines().enumerate() {
        let line_no = i + 1;
        if line.trim_start().starts_with('#') {
            continue;
        }
        if line.trim().is_empty() {
            flush(&mut block, block_start, &mut out)?;
            continue;
        }
        if block.is_empty() {
            block_start = line_no;
        }
        let row = line
            .split_whitespace()
            .map(|t| t.parse::<i32>().map_err(|e| parse_err(line_no, format!("`{t}`: {e}"))))
            .collect::<Result<Vec<_>, _>>()?;
        if let Some(first) = block.first() {
            if first.len() != row.len() {
                return Err(parse_err(
                    line_no,
                    format!("row has {} entries, expected {}", row.len(), first.len()),
                ));
            }
        }
        block.push(row);
    }
    flush(&mut block, block_start, &mut out)?;
    Ok(out)
}
