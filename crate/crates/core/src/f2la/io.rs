//! Text formats for binary matrices.
//!
//! Dense: one row per line of `0`/`1` characters. A leading `# R C`
//! line records the shape so matrices with no rows round-trip; other
//! lines starting with `#` and blank lines are ignored.
//!
//! Alist: MacKay's sparse format. Header `N M` (columns, rows), the
//! maximum column and row degrees, the column and row degree lists,
//! then 1-based row indices per column and column indices per row,
//! zero padded to the maximum degree and to at least one entry.

use super::matrix::BitMatrix;
use super::vector::BitVector;
use crate::error::{Error, Result};

pub fn write_dense(m: &BitMatrix) -> String {
    let mut out = format!("# {} {}\n", m.nrows(), m.ncols());
    for r in m.rows() {
        out.push_str(&r.to_string());
        out.push('\n');
    }
    out
}

pub fn read_dense(text: &str) -> Result<BitMatrix> {
    let mut shape: Option<(usize, usize)> = None;
    let mut rows = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(comment) = line.strip_prefix('#') {
            if shape.is_none() && rows.is_empty() {
                let nums: Vec<usize> = comment
                    .split_whitespace()
                    .map_while(|t| t.parse().ok())
                    .collect();
                if nums.len() == 2 && comment.split_whitespace().count() == 2 {
                    shape = Some((nums[0], nums[1]));
                }
            }
            continue;
        }
        let row: BitVector = line
            .parse()
            .map_err(|_| Error::parse(line_no, format!("expected a 0/1 row, found {line:?}")))?;
        if let Some(first) = rows.first().map(BitVector::len).or(shape.map(|s| s.1)) {
            if row.len() != first {
                return Err(Error::parse(
                    line_no,
                    format!("row has {} entries, expected {first}", row.len()),
                ));
            }
        }
        rows.push(row);
    }
    let ncols = rows.first().map(BitVector::len).or(shape.map(|s| s.1)).unwrap_or(0);
    if let Some((r, _)) = shape {
        if r != rows.len() {
            return Err(Error::parse(
                1,
                format!("header declares {r} rows, found {}", rows.len()),
            ));
        }
    }
    BitMatrix::from_rows(ncols, rows)
}

pub fn write_alist(m: &BitMatrix) -> String {
    let t = m.transpose();
    let col_deg: Vec<usize> = t.rows().iter().map(BitVector::weight).collect();
    let row_deg: Vec<usize> = m.rows().iter().map(BitVector::weight).collect();
    let max_c = col_deg.iter().copied().max().unwrap_or(0);
    let max_r = row_deg.iter().copied().max().unwrap_or(0);
    let join = |v: &[usize]| v.iter().map(usize::to_string).collect::<Vec<_>>().join(" ");
    let padded = |v: &BitVector, width: usize| {
        let mut idx: Vec<usize> = v.iter_ones().map(|i| i + 1).collect();
        idx.resize(width.max(idx.len()).max(1), 0);
        join(&idx)
    };
    let mut out = String::new();
    out.push_str(&format!("{} {}\n", m.ncols(), m.nrows()));
    out.push_str(&format!("{max_c} {max_r}\n"));
    out.push_str(&join(&col_deg));
    out.push('\n');
    out.push_str(&join(&row_deg));
    out.push('\n');
    for c in t.rows() {
        out.push_str(&padded(c, max_c));
        out.push('\n');
    }
    for r in m.rows() {
        out.push_str(&padded(r, max_r));
        out.push('\n');
    }
    out
}

struct Tokens<'a> {
    lines: std::iter::Peekable<std::iter::Enumerate<std::str::Lines<'a>>>,
}

impl<'a> Tokens<'a> {
    fn new(text: &'a str) -> Self {
        Self {
            lines: text.lines().enumerate().peekable(),
        }
    }

    /// Next non-blank line as integers, with its 1-based line number.
    fn line(&mut self, what: &str) -> Result<(usize, Vec<usize>)> {
        loop {
            let Some((i, raw)) = self.lines.next() else {
                return Err(Error::parse(0, format!("unexpected end of input reading {what}")));
            };
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let nums = line
                .split_whitespace()
                .map(|t| {
                    t.parse::<usize>()
                        .map_err(|_| Error::parse(i + 1, format!("bad integer {t:?} in {what}")))
                })
                .collect::<Result<Vec<_>>>()?;
            return Ok((i + 1, nums));
        }
    }
}

pub fn read_alist(text: &str) -> Result<BitMatrix> {
    let mut tok = Tokens::new(text);
    let (l, header) = tok.line("header")?;
    let [ncols, nrows] = header[..] else {
        return Err(Error::parse(l, "expected `N M` header"));
    };
    let (l, maxima) = tok.line("maximum degrees")?;
    if maxima.len() != 2 {
        return Err(Error::parse(l, "expected two maximum degrees"));
    }
    let (l, col_deg) = if ncols == 0 { (l, Vec::new()) } else { tok.line("column degrees")? };
    if col_deg.len() != ncols {
        return Err(Error::parse(l, format!("expected {ncols} column degrees")));
    }
    let (l, row_deg) = if nrows == 0 { (l, Vec::new()) } else { tok.line("row degrees")? };
    if row_deg.len() != nrows {
        return Err(Error::parse(l, format!("expected {nrows} row degrees")));
    }
    let mut from_cols = BitMatrix::zeros(nrows, ncols);
    for (c, &deg) in col_deg.iter().enumerate() {
        let (l, idx) = tok.line("column lists")?;
        let nz: Vec<usize> = idx.into_iter().filter(|&v| v != 0).collect();
        if nz.len() != deg {
            return Err(Error::parse(l, format!("column {} lists {} entries, degree {deg}", c + 1, nz.len())));
        }
        for r in nz {
            if r > nrows {
                return Err(Error::parse(l, format!("row index {r} out of range")));
            }
            from_cols.set(r - 1, c, true);
        }
    }
    let mut rows = Vec::with_capacity(nrows);
    for (r, &deg) in row_deg.iter().enumerate() {
        let (l, idx) = tok.line("row lists")?;
        let nz: Vec<usize> = idx.into_iter().filter(|&v| v != 0).collect();
        if nz.len() != deg {
            return Err(Error::parse(l, format!("row {} lists {} entries, degree {deg}", r + 1, nz.len())));
        }
        if nz.iter().any(|&c| c > ncols) {
            return Err(Error::parse(l, "column index out of range"));
        }
        let v = BitVector::from_indices(ncols, nz.iter().map(|c| c - 1));
        if &v != from_cols.row(r) {
            return Err(Error::parse(l, format!("row {} disagrees with the column lists", r + 1)));
        }
        rows.push(v);
    }
    BitMatrix::from_rows(ncols, rows)
}

/// Matrix text encodings.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum MatrixFormat {
    #[default]
    Dense,
    Alist,
}

impl std::str::FromStr for MatrixFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "dense" => Ok(MatrixFormat::Dense),
            "alist" => Ok(MatrixFormat::Alist),
            other => Err(Error::parse(0, format!("unknown matrix format {other:?}"))),
        }
    }
}

impl std::fmt::Display for MatrixFormat {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            MatrixFormat::Dense => "dense",
            MatrixFormat::Alist => "alist",
        })
    }
}

pub fn write_matrix(m: &BitMatrix, format: MatrixFormat) -> String {
    match format {
        MatrixFormat::Dense => write_dense(m),
        MatrixFormat::Alist => write_alist(m),
    }
}

pub fn read_matrix(text: &str, format: MatrixFormat) -> Result<BitMatrix> {
    match format {
        MatrixFormat::Dense => read_dense(text),
        MatrixFormat::Alist => read_alist(text),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dense_round_trip() {
        let m = BitMatrix::from_strs(&["1011", "0110"]).unwrap();
        assert_eq!(read_dense(&write_dense(&m)).unwrap(), m);
        let empty = BitMatrix::new(5);
        let back = read_dense(&write_dense(&empty)).unwrap();
        assert_eq!(back.ncols(), 5);
        assert_eq!(back.nrows(), 0);
    }

    #[test]
    fn dense_rejects_ragged_rows() {
        let err = read_dense("101\n11\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
        assert!(read_dense("10x\n").is_err());
    }

    #[test]
    fn alist_round_trip() {
        let m = BitMatrix::from_strs(&["1101000", "0110100", "0011010"]).unwrap();
        let text = write_alist(&m);
        assert!(text.starts_with("7 3\n"));
        assert_eq!(read_alist(&text).unwrap(), m);
    }

    #[test]
    fn alist_detects_inconsistency() {
        let text = "2 1\n1 2\n1 1\n2\n1\n1\n1 0\n";
        assert!(read_alist(text).is_err());
    }
}
