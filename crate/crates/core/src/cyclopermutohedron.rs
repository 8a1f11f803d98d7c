//! The cyclopermutohedron: cells, principal-vertex frames and incidence
//! numbers.
//!
//! The incidence `[σ:τ]` of a facet `τ` obtained by splitting block `I_p`
//! into `(J1, J2)` is computed in the *split layout*: the block order of
//! `σ` with `I_p` replaced in place by `J1, J2`. There
//!
//! * `g` maps the principal vertex of `σ` position-wise onto the principal
//!   sequence of the split layout, and contributes `sign(g)`;
//! * `i_τ` is the unique neighbour index whose swap straddles `J1 | J2`,
//!   and contributes `(-1)^{i_τ}`.
//!
//! When the marked block is split with `n+1` in `J1`, the canonical form of
//! `τ` starts at `J2`. Its frame is then a cyclic shift of the split-layout
//! frame: the `|J2| - 1` vectors of `J2` move to the front, which
//! contributes `(-1)^{s (dim τ - s)}` with `s = |J2| - 1`.

use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::complex::{ChainComplex, ComplexError, SparseIntMatrix};
use crate::partitions::{
    bit, block_len, cyclopermutohedron_cells, elements, random_cell, CyclicCell, Element, Facet,
    Split,
};
use crate::ResourceGuard;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CpError {
    #[error("n = {0} is too small; cells need n >= 3")]
    TooSmall(usize),
    #[error("n = {n} exceeds the resource guard (max {max})")]
    Guard { n: usize, max: usize },
    #[error("{face} is not a facet of {cell}")]
    NotAFace { cell: String, face: String },
    #[error(
        "facet {face} of {cell}: {count} neighbour indices fail adjacency (expected exactly one)"
    )]
    AmbiguousIndex {
        cell: String,
        face: String,
        count: usize,
    },
    #[error("({t1}, {t2}, {s}) is not a good triple")]
    NotGoodTriple { t1: String, t2: String, s: String },
    #[error(transparent)]
    Complex(#[from] ComplexError),
}

/// The principal vertex of a cell and its ordered neighbours inside the
/// cell.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrincipalVertexFrame {
    pub cell: CyclicCell,
    pub pv: Vec<Element>,
    pub neighbors: Vec<Vec<Element>>,
}

/// Positions `q` such that `q` and `q+1` lie in the same block, for blocks
/// of the given sizes laid out left to right.
pub fn swap_positions(block_sizes: &[usize]) -> Vec<usize> {
    let mut out = Vec::new();
    let mut start = 0;
    for &s in block_sizes {
        out.extend(start..start + s.saturating_sub(1));
        start += s;
    }
    out
}

/// Neighbours of vertex `v` inside a cell whose blocks occupy consecutive
/// runs of the given sizes, in left-to-right swap order.
pub fn neighbors_at(v: &[Element], block_sizes: &[usize]) -> Vec<Vec<Element>> {
    swap_positions(block_sizes)
        .into_iter()
        .map(|q| {
            let mut w = v.to_vec();
            w.swap(q, q + 1);
            w
        })
        .collect()
}

fn block_sizes(blocks: &[u32]) -> Vec<usize> {
    blocks.iter().map(|&b| block_len(b)).collect()
}

pub fn principal_vertex(c: &CyclicCell) -> PrincipalVertexFrame {
    let pv = c.principal_sequence();
    let neighbors = neighbors_at(&pv, &block_sizes(c.blocks()));
    PrincipalVertexFrame {
        cell: c.clone(),
        pv,
        neighbors,
    }
}

/// Sign of the permutation sending `from[q]` to `to[q]` for every position.
pub fn permutation_sign(from: &[Element], to: &[Element]) -> i64 {
    let size = from.len();
    let mut map = vec![0usize; size + 1];
    for (&a, &b) in from.iter().zip(to) {
        map[a as usize] = b as usize;
    }
    let mut seen = vec![false; size + 1];
    let mut sign = 1;
    for start in 1..=size {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut x = start;
        while !seen[x] {
            seen[x] = true;
            x = map[x];
            len += 1;
        }
        if len % 2 == 0 {
            sign = -sign;
        }
    }
    sign
}

fn parity_sign(e: usize) -> i64 {
    if e.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

fn rotation_sign(sigma: &CyclicCell, facet: &Facet) -> i64 {
    if !facet.rotated {
        return 1;
    }
    let s = block_len(facet.split.second) - 1;
    let dim_tau = sigma.dim() - 1;
    parity_sign(s * (dim_tau - s))
}

/// Incidence of `σ` on one of its facets.
pub fn incidence_of_facet(sigma: &CyclicCell, facet: &Facet) -> Result<i64, CpError> {
    let pv = sigma.principal_sequence();
    let layout = sigma.split_layout(&facet.split);
    let target: Vec<Element> = layout.iter().flat_map(|&b| elements(b)).collect();
    let g = permutation_sign(&pv, &target);

    let mut owner = Vec::with_capacity(target.len());
    for (i, &b) in layout.iter().enumerate() {
        owner.extend(std::iter::repeat_n(i, block_len(b)));
    }
    let straddling: Vec<usize> = swap_positions(&block_sizes(sigma.blocks()))
        .into_iter()
        .enumerate()
        .filter(|&(_, q)| owner[q] != owner[q + 1])
        .map(|(t, _)| t + 1)
        .collect();
    if straddling.len() != 1 {
        return Err(CpError::AmbiguousIndex {
            cell: sigma.to_string(),
            face: facet.cell.to_string(),
            count: straddling.len(),
        });
    }
    Ok(g * parity_sign(straddling[0]) * rotation_sign(sigma, facet))
}

/// `[σ:τ]` for a facet `τ` of `σ`.
pub fn incidence_cp(sigma: &CyclicCell, tau: &CyclicCell) -> Result<i64, CpError> {
    let facet = sigma.split_to(tau).ok_or_else(|| CpError::NotAFace {
        cell: sigma.to_string(),
        face: tau.to_string(),
    })?;
    incidence_of_facet(sigma, &facet)
}

/// The same incidence from block sizes alone:
/// `sign(g) · (-1)^{Σ_{i<p} |I_i| + |J1| - (p-1)}` times the rotation factor.
pub fn incidence_closed_form(sigma: &CyclicCell, facet: &Facet) -> i64 {
    let pv = sigma.principal_sequence();
    let layout = sigma.split_layout(&facet.split);
    let target: Vec<Element> = layout.iter().flat_map(|&b| elements(b)).collect();
    let p = facet.split.block;
    let before: usize = sigma.blocks()[..p].iter().map(|&b| block_len(b)).sum();
    let exponent = before + block_len(facet.split.first) - p;
    permutation_sign(&pv, &target) * parity_sign(exponent) * rotation_sign(sigma, facet)
}

/// Product `[s:t1][s:t2]` for facets `t1 = (X|k|I|Y)` and `t2 = (X|I|k|Y)`
/// of `s = (X|k∪I|Y)`.
pub fn good_triple_sign(t1: &CyclicCell, t2: &CyclicCell, s: &CyclicCell) -> Result<i64, CpError> {
    let reject = || CpError::NotGoodTriple {
        t1: t1.to_string(),
        t2: t2.to_string(),
        s: s.to_string(),
    };
    let f1 = s.split_to(t1).ok_or_else(reject)?;
    let f2 = s.split_to(t2).ok_or_else(reject)?;
    let (a, b) = (f1.split, f2.split);
    let shaped = a.block == b.block
        && block_len(a.first) == 1
        && b.second == a.first
        && b.first == a.second
        && a.first != bit(s.marked());
    if !shaped {
        return Err(reject());
    }
    Ok(incidence_of_facet(s, &f1)? * incidence_of_facet(s, &f2)?)
}

/// A cell `s = (X|k∪I|Y)` with its facets `(X|k|I|Y)` and `(X|I|k|Y)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GoodTriple {
    pub t1: CyclicCell,
    pub t2: CyclicCell,
    pub s: CyclicCell,
}

impl GoodTriple {
    fn new(s: &CyclicCell, block: usize, k: Element) -> Self {
        let b = s.blocks()[block];
        let (single, rest) = (bit(k), b & !bit(k));
        let t1 = s
            .apply_split(&Split {
                block,
                first: single,
                second: rest,
            })
            .cell;
        let t2 = s
            .apply_split(&Split {
                block,
                first: rest,
                second: single,
            })
            .cell;
        Self {
            t1,
            t2,
            s: s.clone(),
        }
    }

    pub fn sign(&self) -> Result<i64, CpError> {
        good_triple_sign(&self.t1, &self.t2, &self.s)
    }
}

/// Every good triple with top cell `s`.
pub fn good_triples_of(s: &CyclicCell) -> Vec<GoodTriple> {
    let marked = s.marked();
    s.blocks()
        .iter()
        .enumerate()
        .filter(|(_, &b)| block_len(b) >= 2)
        .flat_map(|(p, &b)| {
            elements(b)
                .filter(move |&k| k != marked)
                .map(move |k| GoodTriple::new(s, p, k))
        })
        .collect()
}

/// A uniformly chosen block of a random cell of `CP` on `{1, …, n+1}`
/// with at least two elements, split off at a random non-marked element.
pub fn random_good_triple<R: Rng + ?Sized>(n: usize, rng: &mut R) -> GoodTriple {
    loop {
        let blocks = rng.gen_range(3..=n);
        let s = random_cell(n, blocks, rng);
        let triples = good_triples_of(&s);
        if let Some(t) = triples.choose(rng) {
            return t.clone();
        }
    }
}

/// Good triples of a complex whose sign product is not `-1`.
pub fn good_triple_violations(cc: &ChainComplex<CyclicCell>) -> Vec<String> {
    cc.all_cells()
        .par_iter()
        .flat_map_iter(|layer| layer.iter().flat_map(good_triples_of))
        .filter_map(|t| match t.sign() {
            Ok(-1) => None,
            Ok(v) => Some(format!("{} | {} in {}: product {v}", t.t1, t.t2, t.s)),
            Err(e) => Some(e.to_string()),
        })
        .collect()
}

/// The chain complex of the cyclopermutohedron on `{1, …, n+1}`.
pub fn build_cp(n: usize, guard: &ResourceGuard) -> Result<ChainComplex<CyclicCell>, CpError> {
    if n < 3 {
        return Err(CpError::TooSmall(n));
    }
    if !guard.allows(n) {
        return Err(CpError::Guard {
            n,
            max: guard.max_n,
        });
    }
    let cells = cyclopermutohedron_cells(n);
    let boundary = cp_boundaries(&cells)?;
    Ok(ChainComplex::new(cells, boundary)?)
}

fn cp_boundaries(cells: &[Vec<CyclicCell>]) -> Result<Vec<SparseIntMatrix>, CpError> {
    let mut boundary = vec![SparseIntMatrix::zeros(0, cells[0].len())];
    for k in 1..cells.len() {
        let index: std::collections::HashMap<&CyclicCell, usize> = cells[k - 1]
            .iter()
            .enumerate()
            .map(|(i, c)| (c, i))
            .collect();
        let columns: Result<Vec<Vec<(usize, i64)>>, CpError> = cells[k]
            .par_iter()
            .map(|sigma| {
                sigma
                    .facets()
                    .iter()
                    .map(|f| Ok((index[&f.cell], incidence_of_facet(sigma, f)?)))
                    .collect()
            })
            .collect();
        boundary.push(SparseIntMatrix::from_columns(cells[k - 1].len(), columns?));
    }
    Ok(boundary)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cell(s: &str) -> CyclicCell {
        CyclicCell::parse(s, true).unwrap()
    }

    #[test]
    fn principal_vertex_example() {
        let f = principal_vertex(&cell("1|2,4,5|3|6,7,8"));
        assert_eq!(f.pv, [1, 2, 4, 5, 3, 6, 7, 8]);
        assert_eq!(f.neighbors[0], [1, 4, 2, 5, 3, 6, 7, 8]);
        assert_eq!(f.neighbors[1], [1, 2, 5, 4, 3, 6, 7, 8]);
        assert_eq!(f.neighbors[2], [1, 2, 4, 5, 3, 7, 6, 8]);
        assert_eq!(f.neighbors.len(), 4);
        assert!(principal_vertex(&cell("1|2|3|4")).neighbors.is_empty());
        assert_eq!(principal_vertex(&cell("1,2,3,4,5|6,7")).neighbors.len(), 5);
    }

    #[test]
    fn incidence_examples() {
        let s = cell("1|2,3|4,5|6");
        assert_eq!(incidence_cp(&s, &cell("1|2|3|4,5|6")).unwrap(), -1);
        assert_eq!(incidence_cp(&s, &cell("1|2,3|4|5|6")).unwrap(), 1);
        assert!(matches!(
            incidence_cp(&s, &cell("1|2,3|6|4,5")),
            Err(CpError::NotAFace { .. })
        ));
    }

    #[test]
    fn good_triple_examples() {
        let s = cell("1|2,3|4,5|6");
        assert_eq!(
            good_triple_sign(&cell("1|2|3|4,5|6"), &cell("1|3|2|4,5|6"), &s).unwrap(),
            -1
        );
        assert!(good_triple_sign(&cell("1|2|3|4,5|6"), &cell("1|2,3|4|5|6"), &s).is_err());
        let s = cell("1,2,3|4|5");
        assert_eq!(
            good_triple_sign(&cell("2|1,3|4|5"), &cell("1,3|2|4|5"), &s).unwrap(),
            -1
        );
    }

    #[test]
    fn closed_form_agrees() {
        for dim in cyclopermutohedron_cells(5) {
            for s in dim {
                for f in s.facets() {
                    assert_eq!(
                        incidence_of_facet(&s, &f).unwrap(),
                        incidence_closed_form(&s, &f),
                        "{s} -> {}",
                        f.cell
                    );
                }
            }
        }
    }

    #[test]
    fn small_complexes() {
        let guard = ResourceGuard::default();
        let cp4 = build_cp(3, &guard).unwrap();
        assert_eq!(cp4.cell_counts(), [6, 12]);
        assert_eq!(cp4.euler_characteristic(), -6);
        let cp5 = build_cp(4, &guard).unwrap();
        assert_eq!(cp5.cell_counts(), [24, 60, 50]);
        assert_eq!(cp5.euler_characteristic(), 14);
        cp5.verify_boundary_squared().unwrap();
        cp5.verify_diamond().unwrap();
        assert_eq!(cp5.max_abs_entry(), 1);
    }

    #[test]
    fn guard_and_size_errors() {
        assert_eq!(
            build_cp(2, &ResourceGuard::default()).unwrap_err(),
            CpError::TooSmall(2)
        );
        assert_eq!(
            build_cp(9, &ResourceGuard::default()).unwrap_err(),
            CpError::Guard { n: 9, max: 8 }
        );
    }

    #[test]
    fn permutation_sign_basics() {
        assert_eq!(permutation_sign(&[1, 2, 3], &[1, 2, 3]), 1);
        assert_eq!(permutation_sign(&[1, 2, 3], &[2, 1, 3]), -1);
        assert_eq!(permutation_sign(&[1, 2, 3], &[2, 3, 1]), 1);
    }

    #[test]
    fn good_triples_negative() {
        let cc = build_cp(5, &ResourceGuard::default()).unwrap();
        assert!(good_triple_violations(&cc).is_empty());
        let t = GoodTriple::new(&cell("2,3,4|1|5,6"), 0, 2);
        assert_eq!(
            (t.t1.to_string(), t.t2.to_string()),
            ("2|3,4|1|5,6".into(), "3,4|2|1|5,6".into())
        );
        assert_eq!(t.sign().unwrap(), -1);
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..100 {
            assert_eq!(random_good_triple(6, &mut rng).sign().unwrap(), -1);
        }
    }
}
