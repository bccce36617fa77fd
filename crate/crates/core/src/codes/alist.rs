//! Reader and writer for the `alist` sparse parity-check format.
//!
//! ```text
//! n m
//! max_col_weight max_row_weight
//! <n column weights>
//! <m row weights>
//! <n lines: 1-based row indices of each column, zero padded>
//! <m lines: 1-based column indices of each row, zero padded>
//! ```
//!
//! Zero entries are padding and ignored on read. The writer always pads to
//! the maximum weight, so `write(parse(write(h))) == write(h)` byte for byte.

use std::fmt::Write as _;
use std::path::Path;

use crate::f2::BitMatrix;

#[derive(Debug, thiserror::Error)]
pub enum AlistError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed alist at line {line}: {message}")]
    Malformed { line: usize, message: String },
    #[error("inconsistent alist: {0}")]
    Inconsistent(String),
}

fn malformed(line: usize, message: impl Into<String>) -> AlistError {
    AlistError::Malformed {
        line,
        message: message.into(),
    }
}

fn numbers(text: &str, line: usize) -> Result<Vec<usize>, AlistError> {
    text.split_whitespace()
        .map(|tok| {
            tok.parse::<usize>().map_err(|_| {
                malformed(
                    line,
                    format!("expected a non-negative integer, got {tok:?}"),
                )
            })
        })
        .collect()
}

fn exact(text: &str, line: usize, count: usize, what: &str) -> Result<Vec<usize>, AlistError> {
    let v = numbers(text, line)?;
    if v.len() != count {
        return Err(malformed(
            line,
            format!("expected {count} {what}, found {}", v.len()),
        ));
    }
    Ok(v)
}

/// Parses an alist document into an `m x n` parity-check matrix.
pub fn parse(text: &str) -> Result<BitMatrix, AlistError> {
    let lines: Vec<&str> = text.lines().collect();
    let line = |i: usize| -> Result<&str, AlistError> {
        lines
            .get(i)
            .copied()
            .ok_or_else(|| malformed(i + 1, "unexpected end of file"))
    };

    let dims = exact(line(0)?, 1, 2, "header values (n m)")?;
    let (n, m) = (dims[0], dims[1]);
    let maxes = exact(line(1)?, 2, 2, "maximum weights")?;
    let (max_col, max_row) = (maxes[0], maxes[1]);
    let col_weights = exact(line(2)?, 3, n, "column weights")?;
    let row_weights = exact(line(3)?, 4, m, "row weights")?;

    let mut from_cols = BitMatrix::zeros(m, n);
    for (c, &weight) in col_weights.iter().enumerate() {
        let ln = 4 + c;
        let entries = numbers(line(ln)?, ln + 1)?;
        let nonzero: Vec<usize> = entries.into_iter().filter(|&x| x != 0).collect();
        if nonzero.len() != weight {
            return Err(malformed(
                ln + 1,
                format!(
                    "column {} lists {} entries, weight says {}",
                    c + 1,
                    nonzero.len(),
                    weight
                ),
            ));
        }
        for r in nonzero {
            if r > m {
                return Err(malformed(ln + 1, format!("row index {r} exceeds m={m}")));
            }
            if from_cols.get(r - 1, c) {
                return Err(malformed(ln + 1, format!("row index {r} repeated")));
            }
            from_cols.set(r - 1, c, true);
        }
    }

    let mut from_rows = BitMatrix::zeros(m, n);
    for (r, &weight) in row_weights.iter().enumerate() {
        let ln = 4 + n + r;
        let entries = numbers(line(ln)?, ln + 1)?;
        let nonzero: Vec<usize> = entries.into_iter().filter(|&x| x != 0).collect();
        if nonzero.len() != weight {
            return Err(malformed(
                ln + 1,
                format!(
                    "row {} lists {} entries, weight says {}",
                    r + 1,
                    nonzero.len(),
                    weight
                ),
            ));
        }
        for c in nonzero {
            if c > n {
                return Err(malformed(ln + 1, format!("column index {c} exceeds n={n}")));
            }
            if from_rows.get(r, c - 1) {
                return Err(malformed(ln + 1, format!("column index {c} repeated")));
            }
            from_rows.set(r, c - 1, true);
        }
    }

    if let Some(extra) = lines[(4 + n + m).min(lines.len())..]
        .iter()
        .position(|l| !l.trim().is_empty())
    {
        return Err(malformed(4 + n + m + extra + 1, "trailing content"));
    }
    if from_cols != from_rows {
        return Err(AlistError::Inconsistent(
            "column lists and row lists describe different matrices".into(),
        ));
    }
    if col_weights.iter().any(|&w| w > max_col) || row_weights.iter().any(|&w| w > max_row) {
        return Err(AlistError::Inconsistent(
            "a weight exceeds the declared maximum".into(),
        ));
    }
    Ok(from_rows)
}

pub fn read_file(path: impl AsRef<Path>) -> Result<BitMatrix, AlistError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| AlistError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse(&text)
}

fn join_padded(indices: &[usize], width: usize) -> String {
    let mut out = String::new();
    for i in 0..width {
        if i > 0 {
            out.push(' ');
        }
        let v = indices.get(i).map_or(0, |&x| x + 1);
        let _ = write!(out, "{v}");
    }
    out
}

fn join(values: &[usize]) -> String {
    values
        .iter()
        .map(usize::to_string)
        .collect::<Vec<_>>()
        .join(" ")
}

/// Serializes `h` in canonical alist form (single spaces, zero padding, trailing newline).
pub fn write(h: &BitMatrix) -> String {
    let (m, n) = h.shape();
    let t = h.transpose();
    let col_lists: Vec<Vec<usize>> = (0..n).map(|c| t.row(c).support()).collect();
    let row_lists: Vec<Vec<usize>> = (0..m).map(|r| h.row(r).support()).collect();
    let col_weights: Vec<usize> = col_lists.iter().map(Vec::len).collect();
    let row_weights: Vec<usize> = row_lists.iter().map(Vec::len).collect();
    let max_col = col_weights.iter().copied().max().unwrap_or(0);
    let max_row = row_weights.iter().copied().max().unwrap_or(0);

    let mut out = String::new();
    let _ = writeln!(out, "{n} {m}");
    let _ = writeln!(out, "{max_col} {max_row}");
    let _ = writeln!(out, "{}", join(&col_weights));
    let _ = writeln!(out, "{}", join(&row_weights));
    for list in &col_lists {
        let _ = writeln!(out, "{}", join_padded(list, max_col));
    }
    for list in &row_lists {
        let _ = writeln!(out, "{}", join_padded(list, max_row));
    }
    out
}
