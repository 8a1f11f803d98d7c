//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::HashMap;

use cyclo_core::complex::{CellId, ChainComplex};
use cyclo_core::discrete_morse::Pairing;
use cyclo_core::partitions::{elements, CyclicCell, Element, Split};

/// Exact determinant by fraction-free elimination.
pub fn det(mut m: Vec<Vec<i128>>) -> i128 {
    let n = m.len();
    let mut sign = 1;
    let mut prev = 1i128;
    for k in 0..n {
        let Some(p) = (k..n).find(|&r| m[r][k] != 0) else {
            return 0;
        };
        if p != k {
            m.swap(p, k);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
            }
            m[i][k] = 0;
        }
        prev = m[k][k];
    }
    sign * m[n - 1][n - 1]
}

/// `e_a - e_b` (with `a`, `b` in one block of `c`) in the basis
/// `f_q = e_{b_q} - e_{b_{q+1}}` of consecutive sorted elements, blocks in
/// the order of `c`.
pub fn in_frame_basis(c: &[Vec<Element>], a: Element, b: Element) -> Vec<i128> {
    let dim: usize = c.iter().map(|b| b.len() - 1).sum();
    let mut v = vec![0; dim];
    let mut offset = 0;
    for block in c {
        if let (Some(s), Some(t)) = (
            block.iter().position(|&x| x == a),
            block.iter().position(|&x| x == b),
        ) {
            if s < t {
                (s..t).for_each(|q| v[offset + q] += 1);
            } else {
                (t..s).for_each(|q| v[offset + q] -= 1);
            }
            return v;
        }
        offset += block.len() - 1;
    }
    panic!("{a} and {b} are not in one block");
}

fn block_lists(c: &CyclicCell) -> Vec<Vec<Element>> {
    (0..c.num_blocks()).map(|i| c.block_elements(i)).collect()
}

/// Consecutive pairs of each block, blocks in order.
fn frame_pairs(c: &[Vec<Element>]) -> Vec<(Element, Element)> {
    c.iter()
        .flat_map(|b| b.windows(2).map(|w| (w[0], w[1])))
        .collect()
}

/// Incidence from geometry: the outward direction `-(e_{max J1} - e_{min J2})`
/// followed by the canonical frame of the facet, measured in the frame of
/// the cell.
pub fn geometric_incidence(sigma: &CyclicCell, split: &Split) -> i64 {
    let c = block_lists(sigma);
    let a = elements(split.first).max().unwrap();
    let b = elements(split.second).min().unwrap();
    let tau = sigma.apply_split(split).cell;
    let mut rows = vec![in_frame_basis(&c, a, b)
        .into_iter()
        .map(|x| -x)
        .collect::<Vec<_>>()];
    rows.extend(
        frame_pairs(&block_lists(&tau))
            .into_iter()
            .map(|(x, y)| in_frame_basis(&c, x, y)),
    );
    det(rows) as i64
}

/// Orientation change under the reflection from frames: the reflection acts
/// on frame vectors by `-1`; the images are measured in the frame of
/// `reflect(c)`.
pub fn frame_reflection_sign(c: &CyclicCell) -> i64 {
    let r = block_lists(&c.reflect());
    let rows: Vec<Vec<i128>> = frame_pairs(&block_lists(c))
        .into_iter()
        .map(|(x, y)| in_frame_basis(&r, x, y).into_iter().map(|v| -v).collect())
        .collect();
    if rows.is_empty() {
        return 1;
    }
    det(rows) as i64
}

/// Stirling numbers of the second kind.
pub fn stirling2(n: usize, k: usize) -> usize {
    let mut s = vec![vec![0usize; k + 1]; n + 1];
    s[0][0] = 1;
    for i in 1..=n {
        for j in 1..=k.min(i) {
            s[i][j] = j * s[i - 1][j] + s[i - 1][j - 1];
        }
    }
    s[n][k]
}

pub fn factorial(n: usize) -> usize {
    (1..=n).product()
}

/// Cyclically ordered partitions of `n + 1` elements into `n + 1 - d` blocks.
pub fn cp_count(n: usize, d: usize) -> usize {
    let k = n + 1 - d;
    factorial(k - 1) * stirling2(n + 1, k)
}

/// Number of V-paths from lower cell `from` to each critical cell of the
/// same dimension, by plain recursion over the matching.
pub fn brute_path_counts<C: CellId>(
    cc: &ChainComplex<C>,
    pairing: &Pairing,
    dim: usize,
    from: usize,
    memo: &mut HashMap<usize, HashMap<usize, i64>>,
) -> HashMap<usize, i64> {
    if let Some(m) = memo.get(&from) {
        return m.clone();
    }
    let mut out = HashMap::new();
    if pairing.is_critical(dim, from) {
        out.insert(from, 1);
    } else if let Some(up) = pairing.up(dim, from) {
        let facets: Vec<usize> = cc
            .boundary_ref(dim + 1)
            .unwrap()
            .column(up)
            .map(|(r, _)| r)
            .collect();
        for y in facets.into_iter().filter(|&y| y != from) {
            for (c, k) in brute_path_counts(cc, pairing, dim, y, memo) {
                *out.entry(c).or_insert(0) += k;
            }
        }
    }
    memo.insert(from, out.clone());
    out
}

pub fn parse(s: &str) -> CyclicCell {
    CyclicCell::parse(s, true).unwrap()
}
