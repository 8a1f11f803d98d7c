//! Discrete vector fields on chain complexes: validation, acyclicity,
//! gradient paths and the Morse complex.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap};
use std::fmt;

use rayon::prelude::*;
use thiserror::Error;

use crate::complex::{CellId, ChainComplex, SparseIntMatrix};

/// Sparse column as `(row, value)` entries.
type Column = Vec<(usize, i64)>;

/// A pairing of a cell of dimension `dim` with a cofacet of dimension `dim + 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Pair {
    pub dim: usize,
    pub lower: usize,
    pub upper: usize,
}

/// A discrete vector field given by cell indices of some complex.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Matching {
    pairs: Vec<Pair>,
}

impl Matching {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_pairs(pairs: Vec<Pair>) -> Self {
        Self { pairs }
    }

    pub fn push(&mut self, pair: Pair) {
        self.pairs.push(pair);
    }

    pub fn pairs(&self) -> &[Pair] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatchingViolation {
    #[error("cell {cell} (dim {dim}) is paired more than once")]
    PairedTwice { dim: usize, cell: String },
    #[error("{lower} is not a facet of {upper}")]
    NotAFacet { lower: String, upper: String },
    #[error("pair index out of range in dimension {dim}")]
    OutOfRange { dim: usize },
}

/// A closed V-path, listed as alternating lower and upper cells.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClosedPath {
    pub dim: usize,
    pub cells: Vec<String>,
}

impl fmt::Display for ClosedPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "closed V-path in dim {}: {}",
            self.dim,
            self.cells.join(" -> ")
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MorseError {
    #[error("invalid matching: {0}")]
    Invalid(#[from] MatchingViolation),
    #[error("matching is not acyclic: {0}")]
    Cyclic(ClosedPath),
    #[error("Morse boundary does not square to zero in dimension {dim}")]
    NotAComplex { dim: usize },
}

/// Partner lookup derived from a validated matching.
#[derive(Debug, Clone)]
pub struct Pairing {
    up: Vec<Vec<Option<usize>>>,
    down: Vec<Vec<Option<usize>>>,
}

impl Pairing {
    /// Cofacet partner of cell `i` in dimension `dim`.
    pub fn up(&self, dim: usize, i: usize) -> Option<usize> {
        self.up.get(dim).and_then(|v| v[i])
    }

    /// Facet partner of cell `i` in dimension `dim`.
    pub fn down(&self, dim: usize, i: usize) -> Option<usize> {
        self.down.get(dim).and_then(|v| v[i])
    }

    pub fn is_critical(&self, dim: usize, i: usize) -> bool {
        self.up(dim, i).is_none() && self.down(dim, i).is_none()
    }

    pub fn critical(&self, dim: usize) -> Vec<usize> {
        (0..self.up[dim].len())
            .filter(|&i| self.is_critical(dim, i))
            .collect()
    }
}

/// Check injectivity, dimension step and facet relation.
pub fn validate_matching<C: CellId>(
    cc: &ChainComplex<C>,
    m: &Matching,
) -> Result<Pairing, MatchingViolation> {
    let counts = cc.cell_counts();
    let mut up: Vec<Vec<Option<usize>>> = counts.iter().map(|&c| vec![None; c]).collect();
    let mut down: Vec<Vec<Option<usize>>> = counts.iter().map(|&c| vec![None; c]).collect();
    for p in &m.pairs {
        let d = p.dim;
        if d + 1 >= counts.len() || p.lower >= counts[d] || p.upper >= counts[d + 1] {
            return Err(MatchingViolation::OutOfRange { dim: d });
        }
        let lower_used = up[d][p.lower].is_some() || down[d][p.lower].is_some();
        if lower_used {
            return Err(MatchingViolation::PairedTwice {
                dim: d,
                cell: cc.cells(d)[p.lower].to_string(),
            });
        }
        let upper_used = up[d + 1][p.upper].is_some() || down[d + 1][p.upper].is_some();
        if upper_used {
            return Err(MatchingViolation::PairedTwice {
                dim: d + 1,
                cell: cc.cells(d + 1)[p.upper].to_string(),
            });
        }
        if cc.incidence(d + 1, p.upper, p.lower) == 0 {
            return Err(MatchingViolation::NotAFacet {
                lower: cc.cells(d)[p.lower].to_string(),
                upper: cc.cells(d + 1)[p.upper].to_string(),
            });
        }
        up[d][p.lower] = Some(p.upper);
        down[d + 1][p.upper] = Some(p.lower);
    }
    Ok(Pairing { up, down })
}

/// Successors of `x` (dim `dim`) in the V-graph: facets of its partner other than `x`.
fn successors<C: CellId>(
    cc: &ChainComplex<C>,
    pairing: &Pairing,
    dim: usize,
    x: usize,
) -> Vec<(usize, i64)> {
    match pairing.up(dim, x) {
        None => Vec::new(),
        Some(t) => cc
            .boundary_ref(dim + 1)
            .expect("paired upward")
            .column(t)
            .filter(|&(y, _)| y != x)
            .collect(),
    }
}

/// Topological order of the V-graph in one dimension, or a closed path.
fn topological_order<C: CellId>(
    cc: &ChainComplex<C>,
    pairing: &Pairing,
    dim: usize,
) -> Result<Vec<usize>, ClosedPath> {
    let n = cc.cells(dim).len();
    let succ: Vec<Vec<usize>> = (0..n)
        .map(|x| {
            successors(cc, pairing, dim, x)
                .into_iter()
                .map(|(y, _)| y)
                .collect()
        })
        .collect();
    let mut indeg = vec![0usize; n];
    for ys in &succ {
        for &y in ys {
            indeg[y] += 1;
        }
    }
    let mut ready: Vec<usize> = (0..n).rev().filter(|&x| indeg[x] == 0).collect();
    let mut order = Vec::with_capacity(n);
    while let Some(x) = ready.pop() {
        order.push(x);
        for &y in &succ[x] {
            indeg[y] -= 1;
            if indeg[y] == 0 {
                ready.push(y);
            }
        }
    }
    if order.len() == n {
        return Ok(order);
    }
    // every remaining cell has a remaining predecessor; walk back to a repeat
    let mut pred = vec![usize::MAX; n];
    for x in 0..n {
        if indeg[x] > 0 {
            for &y in &succ[x] {
                if indeg[y] > 0 {
                    pred[y] = x;
                }
            }
        }
    }
    let start = (0..n).find(|&x| indeg[x] > 0).expect("cycle exists");
    let mut seen = HashMap::new();
    let mut walk = vec![start];
    let mut x = start;
    seen.insert(x, 0);
    loop {
        x = pred[x];
        if let Some(&pos) = seen.get(&x) {
            let mut cycle: Vec<usize> = walk[pos..].to_vec();
            cycle.reverse();
            cycle.push(cycle[0]);
            let mut cells = Vec::new();
            for w in cycle.windows(2) {
                cells.push(cc.cells(dim)[w[0]].to_string());
                let t = pairing.up(dim, w[0]).expect("cycle cells are paired up");
                cells.push(cc.cells(dim + 1)[t].to_string());
            }
            cells.push(cc.cells(dim)[cycle[0]].to_string());
            return Err(ClosedPath { dim, cells });
        }
        seen.insert(x, walk.len());
        walk.push(x);
    }
}

/// Validate and check that no closed V-path exists.
pub fn check_acyclic<C: CellId>(cc: &ChainComplex<C>, m: &Matching) -> Result<Pairing, MorseError> {
    let pairing = validate_matching(cc, m)?;
    for dim in 0..cc.num_dims().saturating_sub(1) {
        topological_order(cc, &pairing, dim).map_err(MorseError::Cyclic)?;
    }
    Ok(pairing)
}

/// A V-path `σ_1, τ_1, …, τ_t, σ_{t+1}` in dimension `dim`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradientPath {
    pub dim: usize,
    /// Alternating lower/upper cell indices, starting and ending with lower cells.
    pub cells: Vec<usize>,
}

impl GradientPath {
    pub fn steps(&self) -> usize {
        self.cells.len() / 2
    }

    pub fn labels<C: CellId>(&self, cc: &ChainComplex<C>) -> Vec<String> {
        self.cells
            .iter()
            .enumerate()
            .map(|(i, &c)| cc.cells(self.dim + i % 2)[c].to_string())
            .collect()
    }
}

/// All V-paths from `from` to `to` (both of dimension `dim`).
///
/// Cells that cannot reach `to` are pruned; paths are listed in the order
/// of a depth-first search over facets in index order.
pub fn enumerate_gradient_paths<C: CellId>(
    cc: &ChainComplex<C>,
    pairing: &Pairing,
    dim: usize,
    from: usize,
    to: usize,
) -> Vec<GradientPath> {
    let n = cc.cells(dim).len();
    let mut reaches = vec![false; n];
    reaches[to] = true;
    // backwards search over the V-graph
    let mut pred: Vec<Vec<usize>> = vec![Vec::new(); n];
    for x in 0..n {
        for (y, _) in successors(cc, pairing, dim, x) {
            pred[y].push(x);
        }
    }
    let mut stack = vec![to];
    while let Some(y) = stack.pop() {
        for &x in &pred[y] {
            if !reaches[x] {
                reaches[x] = true;
                stack.push(x);
            }
        }
    }
    let mut out = Vec::new();
    if !reaches[from] {
        return out;
    }
    let mut path = vec![from];
    extend_paths(cc, pairing, dim, to, &reaches, n, &mut path, &mut out);
    out
}

#[allow(clippy::too_many_arguments)]
fn extend_paths<C: CellId>(
    cc: &ChainComplex<C>,
    pairing: &Pairing,
    dim: usize,
    to: usize,
    reaches: &[bool],
    depth_cap: usize,
    path: &mut Vec<usize>,
    out: &mut Vec<GradientPath>,
) {
    let x = *path.last().expect("nonempty path");
    if x == to {
        out.push(GradientPath {
            dim,
            cells: path.clone(),
        });
        return;
    }
    if path.len() / 2 >= depth_cap {
        return;
    }
    let Some(t) = pairing.up(dim, x) else { return };
    for (y, _) in successors(cc, pairing, dim, x) {
        if reaches[y] {
            path.push(t);
            path.push(y);
            extend_paths(cc, pairing, dim, to, reaches, depth_cap, path, out);
            path.pop();
            path.pop();
        }
    }
}

/// `∏ -[τ_i:σ_i][τ_i:σ_{i+1}]` over the steps of the path.
pub fn path_weight<C: CellId>(cc: &ChainComplex<C>, path: &GradientPath) -> i64 {
    path.cells
        .windows(3)
        .step_by(2)
        .map(|w| -cc.incidence(path.dim + 1, w[1], w[0]) * cc.incidence(path.dim + 1, w[1], w[2]))
        .product()
}

/// Critical cells and Morse boundary matrices.
#[derive(Debug, Clone)]
pub struct MorseComplex {
    /// Critical cell indices per dimension.
    pub critical: Vec<Vec<usize>>,
    /// `∂̃_k`: rows index `critical[k-1]`, columns `critical[k]`.
    pub boundary: Vec<SparseIntMatrix>,
    /// Number of gradient paths from facets of each critical `k`-cell to
    /// each critical `(k-1)`-cell, same shape as `boundary`.
    pub path_counts: Vec<SparseIntMatrix>,
}

impl MorseComplex {
    pub fn counts(&self) -> Vec<usize> {
        self.critical.iter().map(Vec::len).collect()
    }

    pub fn is_boundary_zero(&self) -> bool {
        self.boundary.iter().all(SparseIntMatrix::is_zero)
    }
}

/// Assemble the Morse complex of an acyclic matching.
pub fn morse_boundary<C: CellId>(
    cc: &ChainComplex<C>,
    m: &Matching,
) -> Result<MorseComplex, MorseError> {
    let pairing = check_acyclic(cc, m)?;
    morse_complex_from_pairing(cc, &pairing)
}

pub fn morse_complex_from_pairing<C: CellId>(
    cc: &ChainComplex<C>,
    pairing: &Pairing,
) -> Result<MorseComplex, MorseError> {
    let dims = cc.num_dims();
    let critical: Vec<Vec<usize>> = (0..dims).map(|d| pairing.critical(d)).collect();
    let mut boundary = vec![SparseIntMatrix::zeros(0, critical[0].len())];
    let mut path_counts = vec![SparseIntMatrix::zeros(0, critical[0].len())];
    for k in 1..dims {
        let p = k - 1;
        let order = topological_order(cc, pairing, p).map_err(MorseError::Cyclic)?;
        let mut rank = vec![0usize; order.len()];
        for (i, &x) in order.iter().enumerate() {
            rank[x] = i;
        }
        let row_of: HashMap<usize, usize> = critical[p]
            .iter()
            .enumerate()
            .map(|(i, &c)| (c, i))
            .collect();
        let d = cc.boundary_ref(k).expect("dimension in range");
        let columns: Vec<(Column, Column)> = critical[k]
            .par_iter()
            .map(|&tau| flow(cc, pairing, p, d.column(tau).collect(), &rank, &row_of))
            .collect();
        let (vals, counts): (Vec<_>, Vec<_>) = columns.into_iter().unzip();
        boundary.push(SparseIntMatrix::from_columns(critical[p].len(), vals));
        path_counts.push(SparseIntMatrix::from_columns(critical[p].len(), counts));
    }
    for k in 2..dims {
        if !boundary[k - 1].mul(&boundary[k]).is_zero() {
            return Err(MorseError::NotAComplex { dim: k });
        }
    }
    Ok(MorseComplex {
        critical,
        boundary,
        path_counts,
    })
}

/// Push a chain of `p`-cells down the V-graph; returns weighted
/// coefficients and path counts on critical cells.
fn flow<C: CellId>(
    cc: &ChainComplex<C>,
    pairing: &Pairing,
    p: usize,
    start: Vec<(usize, i64)>,
    rank: &[usize],
    row_of: &HashMap<usize, usize>,
) -> (Column, Column) {
    let mut weight: HashMap<usize, (i64, i64)> = HashMap::new();
    let mut heap = BinaryHeap::new();
    for (x, c) in start {
        let e = weight.entry(x).or_insert((0, 0));
        e.0 += c;
        e.1 += 1;
        heap.push(Reverse((rank[x], x)));
    }
    let mut vals = Vec::new();
    let mut counts = Vec::new();
    while let Some(Reverse((_, x))) = heap.pop() {
        let Some((w, paths)) = weight.remove(&x) else {
            continue;
        };
        if let Some(&row) = row_of.get(&x) {
            vals.push((row, w));
            counts.push((row, paths));
            continue;
        }
        let Some(t) = pairing.up(p, x) else { continue };
        let d = cc.boundary_ref(p + 1).expect("paired upward");
        let tx = d.get(x, t);
        for (y, ty) in d.column(t) {
            if y == x {
                continue;
            }
            let e = weight.entry(y).or_insert_with(|| {
                heap.push(Reverse((rank[y], y)));
                (0, 0)
            });
            e.0 += -tx * ty * w;
            e.1 += paths;
        }
    }
    (vals, counts)
}
