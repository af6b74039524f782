//! Column-compressed sparse integer matrices.

use std::fmt::Write as _;

use crate::error::{Error, Result};

/// A sparse integer matrix stored by columns.
///
/// Rows within a column are strictly increasing and no stored value is zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseIntMatrix {
    rows: usize,
    cols: usize,
    col_ptr: Vec<usize>,
    row_idx: Vec<u32>,
    vals: Vec<i64>,
}

/// Sorts `(row, value)` pairs, sums duplicates and drops zeros.
pub(crate) fn normalize_column(entries: &mut Vec<(u32, i64)>) {
    entries.sort_unstable_by_key(|e| e.0);
    let mut w = 0;
    for r in 0..entries.len() {
        if w > 0 && entries[w - 1].0 == entries[r].0 {
            entries[w - 1].1 += entries[r].1;
        } else {
            entries[w] = entries[r];
            w += 1;
        }
    }
    entries.truncate(w);
    entries.retain(|e| e.1 != 0);
}

impl SparseIntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, col_ptr: vec![0; cols + 1], row_idx: Vec::new(), vals: Vec::new() }
    }

    /// Builds a matrix from columns of `(row, value)` pairs in any order;
    /// duplicates are summed and zeros dropped.
    pub fn from_columns(rows: usize, columns: Vec<Vec<(u32, i64)>>) -> Result<Self> {
        let cols = columns.len();
        let mut col_ptr = Vec::with_capacity(cols + 1);
        col_ptr.push(0);
        let nnz: usize = columns.iter().map(Vec::len).sum();
        let mut row_idx = Vec::with_capacity(nnz);
        let mut vals = Vec::with_capacity(nnz);
        for mut col in columns {
            normalize_column(&mut col);
            for (r, v) in col {
                if r as usize >= rows {
                    return Err(Error::InvalidTable(format!("row {r} out of range for {rows} rows")));
                }
                row_idx.push(r);
                vals.push(v);
            }
            col_ptr.push(row_idx.len());
        }
        Ok(Self { rows, cols, col_ptr, row_idx, vals })
    }

    pub fn from_triplets(rows: usize, cols: usize, triplets: &[(usize, usize, i64)]) -> Result<Self> {
        let mut columns = vec![Vec::new(); cols];
        for &(r, c, v) in triplets {
            if c >= cols {
                return Err(Error::InvalidTable(format!("column {c} out of range for {cols} columns")));
            }
            columns[c].push((r as u32, v));
        }
        Self::from_columns(rows, columns)
    }

    pub fn from_dense(rows: &[Vec<i64>]) -> Self {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        let columns = (0..ncols)
            .map(|c| (0..nrows).filter(|&r| rows[r][c] != 0).map(|r| (r as u32, rows[r][c])).collect())
            .collect();
        Self::from_columns(nrows, columns).expect("rows in range")
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.vals.len()
    }

    pub fn column(&self, c: usize) -> impl Iterator<Item = (u32, i64)> + '_ {
        let span = self.col_ptr[c]..self.col_ptr[c + 1];
        self.row_idx[span.clone()].iter().copied().zip(self.vals[span].iter().copied())
    }

    /// All `(row, col, value)` triples in column-major order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, i64)> + '_ {
        (0..self.cols).flat_map(move |c| self.column(c).map(move |(r, v)| (r as usize, c, v)))
    }

    pub fn is_zero(&self) -> bool {
        self.vals.is_empty()
    }

    pub fn to_dense(&self) -> Vec<Vec<i64>> {
        let mut out = vec![vec![0; self.cols]; self.rows];
        for (r, c, v) in self.entries() {
            out[r][c] = v;
        }
        out
    }

    pub fn transpose(&self) -> Self {
        let mut columns = vec![Vec::new(); self.rows];
        for (r, c, v) in self.entries() {
            columns[r].push((c as u32, v));
        }
        Self::from_columns(self.cols, columns).expect("transpose indices in range")
    }

    /// `self · v` for a sparse vector of `(index, value)` pairs.
    pub fn apply(&self, v: &[(u32, i64)]) -> Vec<(u32, i64)> {
        let mut out: Vec<(u32, i64)> = v.iter().flat_map(|&(c, a)| self.column(c as usize).map(move |(r, b)| (r, a * b))).collect();
        normalize_column(&mut out);
        out
    }

    /// `self · rhs`.
    pub fn mul(&self, rhs: &SparseIntMatrix) -> Result<SparseIntMatrix> {
        if self.cols != rhs.rows {
            return Err(Error::InvalidTable(format!("shape mismatch {}x{} · {}x{}", self.rows, self.cols, rhs.rows, rhs.cols)));
        }
        let columns = (0..rhs.cols).map(|c| self.apply(&rhs.column(c).collect::<Vec<_>>())).collect();
        Self::from_columns(self.rows, columns)
    }

    /// Text dump: header `rows cols nnz`, then one 0-based `r c v` per line.
    pub fn to_dump(&self) -> String {
        let mut out = format!("{} {} {}\n", self.rows, self.cols, self.nnz());
        for (r, c, v) in self.entries() {
            let _ = writeln!(out, "{r} {c} {v}");
        }
        out
    }

    pub fn parse_dump(text: &str) -> Result<Self> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
        let nums = |line: &str| -> Result<Vec<i64>> {
            line.split_whitespace()
                .map(|t| t.parse::<i64>().map_err(|_| Error::Parse(format!("bad number `{t}`"))))
                .collect()
        };
        let header = nums(lines.next().ok_or_else(|| Error::Parse("empty dump".into()))?)?;
        let [rows, cols, nnz] = header[..] else {
            return Err(Error::Parse("header must be `rows cols nnz`".into()));
        };
        if rows < 0 || cols < 0 || nnz < 0 {
            return Err(Error::Parse("negative header field".into()));
        }
        let mut triplets = Vec::with_capacity(nnz as usize);
        for line in lines {
            let f = nums(line)?;
            let [r, c, v] = f[..] else {
                return Err(Error::Parse(format!("bad entry line `{line}`")));
            };
            if r < 0 || r >= rows || c < 0 {
                return Err(Error::Parse(format!("entry `{line}` out of range")));
            }
            triplets.push((r as usize, c as usize, v));
        }
        if triplets.len() != nnz as usize {
            return Err(Error::Parse(format!("expected {nnz} entries, got {}", triplets.len())));
        }
        Self::from_triplets(rows as usize, cols as usize, &triplets)
    }
}
