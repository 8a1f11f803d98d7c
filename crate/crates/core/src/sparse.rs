//! Compressed-column sparse integer matrices.

use std::collections::BTreeMap;

/// An immutable sparse integer matrix in compressed-column form.
///
/// Entries inside a column are sorted by row; there are no duplicates and
/// no stored zeros.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparseIntMatrix {
    rows: usize,
    cols: usize,
    col_ptr: Vec<usize>,
    row_idx: Vec<u32>,
    vals: Vec<i64>,
}

impl SparseIntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            col_ptr: vec![0; cols + 1],
            row_idx: Vec::new(),
            vals: Vec::new(),
        }
    }

    /// Build from per-column entry lists. Duplicates are summed and zeros
    /// dropped.
    ///
    /// # Panics
    /// If a row index is out of range.
    pub fn from_columns(rows: usize, columns: Vec<Vec<(usize, i64)>>) -> Self {
        let cols = columns.len();
        let mut col_ptr = Vec::with_capacity(cols + 1);
        let mut row_idx = Vec::new();
        let mut vals = Vec::new();
        col_ptr.push(0);
        for mut col in columns {
            col.sort_unstable_by_key(|&(r, _)| r);
            let mut merged: Vec<(usize, i64)> = Vec::with_capacity(col.len());
            for (r, v) in col {
                assert!(r < rows, "row {r} out of range for {rows} rows");
                match merged.last_mut() {
                    Some(last) if last.0 == r => last.1 += v,
                    _ => merged.push((r, v)),
                }
            }
            for (r, v) in merged.into_iter().filter(|&(_, v)| v != 0) {
                row_idx.push(r as u32);
                vals.push(v);
            }
            col_ptr.push(row_idx.len());
        }
        Self {
            rows,
            cols,
            col_ptr,
            row_idx,
            vals,
        }
    }

    pub fn from_triplets(rows: usize, cols: usize, triplets: &[(usize, usize, i64)]) -> Self {
        let mut columns = vec![Vec::new(); cols];
        for &(r, c, v) in triplets {
            columns[c].push((r, v));
        }
        Self::from_columns(rows, columns)
    }

    pub fn from_dense(dense: &[Vec<i64>]) -> Self {
        let rows = dense.len();
        let cols = dense.first().map_or(0, Vec::len);
        let mut columns = vec![Vec::new(); cols];
        for (r, row) in dense.iter().enumerate() {
            for (c, &v) in row.iter().enumerate() {
                if v != 0 {
                    columns[c].push((r, v));
                }
            }
        }
        Self::from_columns(rows, columns)
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

    pub fn is_zero(&self) -> bool {
        self.vals.is_empty()
    }

    /// Entries `(row, value)` of column `j`, sorted by row.
    pub fn column(&self, j: usize) -> impl Iterator<Item = (usize, i64)> + '_ {
        let range = self.col_ptr[j]..self.col_ptr[j + 1];
        self.row_idx[range.clone()]
            .iter()
            .map(|&r| r as usize)
            .zip(self.vals[range].iter().copied())
    }

    pub fn column_len(&self, j: usize) -> usize {
        self.col_ptr[j + 1] - self.col_ptr[j]
    }

    pub fn get(&self, row: usize, col: usize) -> i64 {
        let range = self.col_ptr[col]..self.col_ptr[col + 1];
        match self.row_idx[range.clone()].binary_search(&(row as u32)) {
            Ok(pos) => self.vals[range.start + pos],
            Err(_) => 0,
        }
    }

    /// All entries as `(row, col, value)` in column-major order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, i64)> + '_ {
        (0..self.cols).flat_map(move |j| self.column(j).map(move |(r, v)| (r, j, v)))
    }

    pub fn transpose(&self) -> Self {
        let mut columns = vec![Vec::new(); self.rows];
        for (r, c, v) in self.entries() {
            columns[r].push((c, v));
        }
        Self::from_columns(self.cols, columns)
    }

    /// Matrix product `self · rhs`.
    ///
    /// # Panics
    /// On incompatible shapes.
    pub fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.cols, rhs.rows, "incompatible shapes");
        let mut columns = Vec::with_capacity(rhs.cols);
        for j in 0..rhs.cols {
            let mut acc: BTreeMap<usize, i64> = BTreeMap::new();
            for (k, b) in rhs.column(j) {
                for (i, a) in self.column(k) {
                    *acc.entry(i).or_insert(0) += a * b;
                }
            }
            columns.push(acc.into_iter().filter(|&(_, v)| v != 0).collect());
        }
        Self::from_columns(self.rows, columns)
    }

    pub fn to_dense(&self) -> Vec<Vec<i64>> {
        let mut d = vec![vec![0; self.cols]; self.rows];
        for (r, c, v) in self.entries() {
            d[r][c] = v;
        }
        d
    }

    /// Copy with one entry replaced (`0` removes it).
    pub fn with_entry(&self, row: usize, col: usize, value: i64) -> Self {
        let mut columns: Vec<Vec<(usize, i64)>> =
            (0..self.cols).map(|j| self.column(j).collect()).collect();
        columns[col].retain(|&(r, _)| r != row);
        columns[col].push((row, value));
        Self::from_columns(self.rows, columns)
    }
}
