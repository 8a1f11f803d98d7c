//! Graded regular CW complexes with exact integer incidences.

use std::collections::HashMap;
use std::fmt::{self, Display};
use std::hash::Hash;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

pub use crate::sparse::SparseIntMatrix;

/// Anything usable as a cell label.
pub trait CellId: Clone + Eq + Hash + Ord + Display + Send + Sync {}
impl<T: Clone + Eq + Hash + Ord + Display + Send + Sync> CellId for T {}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ComplexError {
    #[error("boundary D_{dim} has shape {got:?}, expected {expected:?}")]
    Shape {
        dim: usize,
        got: (usize, usize),
        expected: (usize, usize),
    },
    #[error("duplicate cell {0}")]
    DuplicateCell(String),
    #[error("{0}")]
    Square(SquareViolation),
    #[error("{0}")]
    Diamond(DiamondViolation),
    #[error("no consistent incidence signs on the interval [{bottom}, {top}]")]
    InconsistentSigns { top: String, bottom: String },
}

/// A nonzero entry of `D_{k-1} · D_k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SquareViolation {
    pub dim: usize,
    pub cell: String,
    pub cocell: String,
    pub value: i64,
}

impl Display for SquareViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "boundary of boundary of {} (dim {}) has coefficient {} on {}",
            self.cell, self.dim, self.value, self.cocell
        )
    }
}

/// An interval of length two without exactly two middle cells
/// (for an edge: not exactly two vertices).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiamondViolation {
    pub top: String,
    pub bottom: Option<String>,
    pub middles: Vec<String>,
}

impl Display for DiamondViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.bottom {
            Some(b) => write!(
                f,
                "interval [{b}, {}] has {} middle cells",
                self.top,
                self.middles.len()
            ),
            None => write!(f, "edge {} has {} vertices", self.top, self.middles.len()),
        }
    }
}

/// A graded poset given by facet lists; `facets[k][j]` indexes `cells[k-1]`.
#[derive(Debug, Clone)]
pub struct FacePoset<C> {
    pub cells: Vec<Vec<C>>,
    pub facets: Vec<Vec<Vec<usize>>>,
}

impl<C: CellId> FacePoset<C> {
    /// Build from cells and a facet function; facets outside the cell set
    /// are ignored.
    pub fn from_facet_fn<F>(cells: Vec<Vec<C>>, facet_fn: F) -> Self
    where
        F: Fn(&C) -> Vec<C> + Sync,
    {
        let index: Vec<HashMap<&C, usize>> = cells
            .iter()
            .map(|cs| cs.iter().enumerate().map(|(i, c)| (c, i)).collect())
            .collect();
        let mut facets = vec![vec![Vec::new(); cells.first().map_or(0, Vec::len)]];
        for k in 1..cells.len() {
            let below = &index[k - 1];
            let lists: Vec<Vec<usize>> = cells[k]
                .par_iter()
                .map(|c| {
                    let mut v: Vec<usize> = facet_fn(c)
                        .iter()
                        .filter_map(|f| below.get(f).copied())
                        .collect();
                    v.sort_unstable();
                    v.dedup();
                    v
                })
                .collect();
            facets.push(lists);
        }
        Self { cells, facets }
    }

    pub fn top_dim(&self) -> Option<usize> {
        self.cells.len().checked_sub(1)
    }

    /// Every interval of length two has exactly two middle cells and every
    /// edge has exactly two vertices.
    pub fn verify_diamond(&self) -> Result<(), DiamondViolation> {
        for k in 1..self.cells.len() {
            let found = self.facets[k]
                .par_iter()
                .enumerate()
                .find_map_first(|(j, fs)| {
                    if k == 1 {
                        if fs.len() != 2 {
                            return Some(DiamondViolation {
                                top: self.cells[1][j].to_string(),
                                bottom: None,
                                middles: fs.iter().map(|&a| self.cells[0][a].to_string()).collect(),
                            });
                        }
                        return None;
                    }
                    let mut count: HashMap<usize, Vec<usize>> = HashMap::new();
                    for &a in fs {
                        for &r in &self.facets[k - 1][a] {
                            count.entry(r).or_default().push(a);
                        }
                    }
                    let mut bad: Vec<_> =
                        count.into_iter().filter(|(_, ms)| ms.len() != 2).collect();
                    bad.sort_unstable();
                    bad.into_iter().next().map(|(r, ms)| DiamondViolation {
                        top: self.cells[k][j].to_string(),
                        bottom: Some(self.cells[k - 2][r].to_string()),
                        middles: ms
                            .iter()
                            .map(|&a| self.cells[k - 1][a].to_string())
                            .collect(),
                    })
                });
            if let Some(v) = found {
                return Err(v);
            }
        }
        Ok(())
    }

    /// Assign `±1` incidences so that every diamond cancels.
    ///
    /// Cells are processed in index order. In each column the first facet
    /// not yet determined gets `+1` and signs propagate across diamonds.
    pub fn solve_incidence_signs(&self) -> Result<ChainComplex<C>, ComplexError> {
        let mut boundary = vec![SparseIntMatrix::zeros(
            0,
            self.cells.first().map_or(0, Vec::len),
        )];
        for k in 1..self.cells.len() {
            let rows = self.cells[k - 1].len();
            let mut columns = Vec::with_capacity(self.cells[k].len());
            for (j, fs) in self.facets[k].iter().enumerate() {
                let col = if k == 1 {
                    if fs.len() != 2 {
                        return Err(ComplexError::Diamond(DiamondViolation {
                            top: self.cells[1][j].to_string(),
                            bottom: None,
                            middles: fs.iter().map(|&a| self.cells[0][a].to_string()).collect(),
                        }));
                    }
                    vec![(fs[0], 1), (fs[1], -1)]
                } else {
                    self.solve_column(k, j, fs, &boundary[k - 1])?
                };
                columns.push(col);
            }
            boundary.push(SparseIntMatrix::from_columns(rows, columns));
        }
        ChainComplex::new(self.cells.clone(), boundary)
    }

    fn solve_column(
        &self,
        k: usize,
        j: usize,
        fs: &[usize],
        lower: &SparseIntMatrix,
    ) -> Result<Vec<(usize, i64)>, ComplexError> {
        // ridge -> facets (positions in fs) containing it
        let mut ridges: HashMap<usize, Vec<usize>> = HashMap::new();
        for (pos, &a) in fs.iter().enumerate() {
            for &r in &self.facets[k - 1][a] {
                ridges.entry(r).or_default().push(pos);
            }
        }
        let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); fs.len()];
        let mut ridge_list: Vec<_> = ridges.into_iter().collect();
        ridge_list.sort_unstable();
        for (r, ms) in ridge_list {
            if ms.len() != 2 {
                return Err(ComplexError::Diamond(DiamondViolation {
                    top: self.cells[k][j].to_string(),
                    bottom: Some(self.cells[k - 2][r].to_string()),
                    middles: ms
                        .iter()
                        .map(|&p| self.cells[k - 1][fs[p]].to_string())
                        .collect(),
                }));
            }
            adj[ms[0]].push((ms[1], r));
            adj[ms[1]].push((ms[0], r));
        }
        let mut sign = vec![0i64; fs.len()];
        for start in 0..fs.len() {
            if sign[start] != 0 {
                continue;
            }
            sign[start] = 1;
            let mut queue = std::collections::VecDeque::from([start]);
            while let Some(a) = queue.pop_front() {
                for &(b, r) in &adj[a] {
                    let want = -sign[a] * lower.get(r, fs[a]) * lower.get(r, fs[b]);
                    if sign[b] == 0 {
                        sign[b] = want;
                        queue.push_back(b);
                    } else if sign[b] != want {
                        return Err(ComplexError::InconsistentSigns {
                            top: self.cells[k][j].to_string(),
                            bottom: self.cells[k - 2][r].to_string(),
                        });
                    }
                }
            }
        }
        Ok(fs.iter().copied().zip(sign).collect())
    }
}

/// Cells per dimension plus boundary matrices `D_k : C_k → C_{k-1}`.
///
/// `D_0` is the zero map to the trivial group, stored as a `0 × |C_0|`
/// matrix.
#[derive(Debug, Clone)]
pub struct ChainComplex<C> {
    cells: Vec<Vec<C>>,
    index: Vec<HashMap<C, usize>>,
    boundary: Vec<SparseIntMatrix>,
}

#[derive(Serialize)]
struct ComplexJson {
    dims: Vec<usize>,
    cells: Vec<Vec<String>>,
    boundary: Vec<Vec<[i64; 3]>>,
}

impl<C: CellId> ChainComplex<C> {
    pub fn new(cells: Vec<Vec<C>>, boundary: Vec<SparseIntMatrix>) -> Result<Self, ComplexError> {
        let mut index = Vec::with_capacity(cells.len());
        for cs in &cells {
            let mut map = HashMap::with_capacity(cs.len());
            for (i, c) in cs.iter().enumerate() {
                if map.insert(c.clone(), i).is_some() {
                    return Err(ComplexError::DuplicateCell(c.to_string()));
                }
            }
            index.push(map);
        }
        if boundary.len() != cells.len() {
            return Err(ComplexError::Shape {
                dim: boundary.len().min(cells.len()),
                got: (boundary.len(), 0),
                expected: (cells.len(), 0),
            });
        }
        for (k, d) in boundary.iter().enumerate() {
            let expected = (if k == 0 { 0 } else { cells[k - 1].len() }, cells[k].len());
            if (d.rows(), d.cols()) != expected {
                return Err(ComplexError::Shape {
                    dim: k,
                    got: (d.rows(), d.cols()),
                    expected,
                });
            }
        }
        Ok(Self {
            cells,
            index,
            boundary,
        })
    }

    /// Number of stored dimensions (`top_dim + 1`).
    pub fn num_dims(&self) -> usize {
        self.cells.len()
    }

    pub fn cells(&self, k: usize) -> &[C] {
        self.cells.get(k).map_or(&[], Vec::as_slice)
    }

    pub fn all_cells(&self) -> &[Vec<C>] {
        &self.cells
    }

    pub fn index_of(&self, k: usize, c: &C) -> Option<usize> {
        self.index.get(k)?.get(c).copied()
    }

    pub fn cell_counts(&self) -> Vec<usize> {
        self.cells.iter().map(Vec::len).collect()
    }

    /// `D_k`; zero matrices outside the stored range.
    pub fn boundary(&self, k: usize) -> SparseIntMatrix {
        self.boundary.get(k).cloned().unwrap_or_else(|| {
            SparseIntMatrix::zeros(self.cells(k.wrapping_sub(1)).len(), self.cells(k).len())
        })
    }

    pub fn boundary_ref(&self, k: usize) -> Option<&SparseIntMatrix> {
        self.boundary.get(k)
    }

    /// Coefficient of facet `face` (dim `k-1`) in the boundary of `cell` (dim `k`).
    pub fn incidence(&self, k: usize, cell: usize, face: usize) -> i64 {
        self.boundary[k].get(face, cell)
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.cells
            .iter()
            .enumerate()
            .map(|(k, cs)| {
                if k % 2 == 0 {
                    cs.len() as i64
                } else {
                    -(cs.len() as i64)
                }
            })
            .sum()
    }

    /// The face poset read off the nonzero boundary entries.
    pub fn poset(&self) -> FacePoset<C> {
        let facets = self
            .boundary
            .iter()
            .map(|d| {
                (0..d.cols())
                    .map(|j| d.column(j).map(|(r, _)| r).collect())
                    .collect()
            })
            .collect();
        FacePoset {
            cells: self.cells.clone(),
            facets,
        }
    }

    /// `D_{k-1} D_k = 0` for all `k`; reports the first failing column.
    pub fn verify_boundary_squared(&self) -> Result<(), SquareViolation> {
        for k in 2..self.boundary.len() {
            let (upper, lower) = (&self.boundary[k], &self.boundary[k - 1]);
            let found = (0..upper.cols()).into_par_iter().find_map_first(|j| {
                let mut acc: HashMap<usize, i64> = HashMap::new();
                for (a, x) in upper.column(j) {
                    for (r, y) in lower.column(a) {
                        *acc.entry(r).or_insert(0) += x * y;
                    }
                }
                acc.into_iter()
                    .filter(|&(_, v)| v != 0)
                    .min()
                    .map(|(r, v)| SquareViolation {
                        dim: k,
                        cell: self.cells[k][j].to_string(),
                        cocell: self.cells[k - 2][r].to_string(),
                        value: v,
                    })
            });
            if let Some(v) = found {
                return Err(v);
            }
        }
        Ok(())
    }

    pub fn verify_diamond(&self) -> Result<(), DiamondViolation> {
        self.poset().verify_diamond()
    }

    /// Largest absolute boundary coefficient.
    pub fn max_abs_entry(&self) -> i64 {
        self.boundary
            .iter()
            .flat_map(|d| d.entries().map(|(_, _, v)| v.abs()))
            .max()
            .unwrap_or(0)
    }

    /// Copy with one boundary entry replaced.
    pub fn with_entry(&self, k: usize, face: usize, cell: usize, value: i64) -> Self {
        let mut boundary = self.boundary.clone();
        boundary[k] = boundary[k].with_entry(face, cell, value);
        Self {
            cells: self.cells.clone(),
            index: self.index.clone(),
            boundary,
        }
    }

    /// Export as `{ "dims", "cells", "boundary" }` with `[col, row, val]`
    /// triplets per dimension.
    pub fn to_json(&self) -> String {
        let doc = ComplexJson {
            dims: (0..self.cells.len()).collect(),
            cells: self
                .cells
                .iter()
                .map(|cs| cs.iter().map(ToString::to_string).collect())
                .collect(),
            boundary: self
                .boundary
                .iter()
                .map(|d| {
                    d.entries()
                        .map(|(r, c, v)| [c as i64, r as i64, v])
                        .collect()
                })
                .collect(),
        };
        serde_json::to_string(&doc).expect("plain data serializes")
    }
}
