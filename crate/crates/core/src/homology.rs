//! Integral homology by Smith normal form and mod-2 homology by GF(2) rank.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::complex::{CellId, ChainComplex, SquareViolation};
use crate::sparse::SparseIntMatrix;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HomologyError {
    #[error("not a chain complex: {0}")]
    NotAComplex(SquareViolation),
    #[error("not a chain complex mod 2: D_{dim} D_{next} has an odd entry", next = .dim + 1)]
    NotAComplexMod2 { dim: usize },
}

/// Invariant factors `d_1 | d_2 | … | d_r` (all nonzero) of an integer matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmithForm {
    pub rank: usize,
    pub invariant_factors: Vec<BigInt>,
}

impl SmithForm {
    /// Factors greater than one.
    pub fn torsion(&self) -> Vec<BigInt> {
        self.invariant_factors
            .iter()
            .filter(|d| !d.is_one())
            .cloned()
            .collect()
    }
}

/// Per-dimension homology over the integers together with mod-2 Betti numbers.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HomologyResult {
    pub betti: Vec<usize>,
    #[serde(serialize_with = "serialize_torsion")]
    pub torsion: Vec<Vec<BigInt>>,
    pub betti_mod2: Vec<usize>,
}

fn serialize_torsion<S: serde::Serializer>(t: &[Vec<BigInt>], s: S) -> Result<S::Ok, S::Error> {
    let as_text: Vec<Vec<String>> = t
        .iter()
        .map(|v| v.iter().map(ToString::to_string).collect())
        .collect();
    serde::Serialize::serialize(&as_text, s)
}

impl HomologyResult {
    pub fn num_dims(&self) -> usize {
        self.betti.len()
    }

    /// `H_k` written as `Z^b + Z2^t + …`, or `0`.
    pub fn group_label(&self, k: usize) -> String {
        let mut parts = Vec::new();
        match self.betti[k] {
            0 => {}
            1 => parts.push("Z".to_string()),
            b => parts.push(format!("Z^{b}")),
        }
        let mut torsion = self.torsion[k].clone();
        torsion.sort();
        let mut i = 0;
        while i < torsion.len() {
            let d = &torsion[i];
            let run = torsion[i..].iter().take_while(|x| *x == d).count();
            parts.push(if run == 1 {
                format!("Z{d}")
            } else {
                format!("Z{d}^{run}")
            });
            i += run;
        }
        if parts.is_empty() {
            "0".to_string()
        } else {
            parts.join(" + ")
        }
    }

    /// Universal coefficients: `dim H_k(Z2) = b_k + #even(T_k) + #even(T_{k-1})`.
    pub fn is_mod2_consistent(&self) -> bool {
        let two = BigInt::from(2);
        let even = |k: usize| {
            self.torsion[k]
                .iter()
                .filter(|d| d.is_multiple_of(&two))
                .count()
        };
        (0..self.num_dims()).all(|k| {
            let below = if k == 0 { 0 } else { even(k - 1) };
            self.betti_mod2[k] == self.betti[k] + even(k) + below
        })
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.betti
            .iter()
            .enumerate()
            .map(|(k, &b)| if k % 2 == 0 { b as i64 } else { -(b as i64) })
            .sum()
    }

    pub fn is_torsion_free(&self) -> bool {
        self.torsion.iter().all(Vec::is_empty)
    }
}

impl fmt::Display for HomologyResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let labels: Vec<String> = (0..self.num_dims()).map(|k| self.group_label(k)).collect();
        write!(f, "({})", labels.join("; "))
    }
}

// ---------------------------------------------------------------------------
// Smith normal form

trait Coeff: Clone + PartialEq + Send + Sync {
    fn from_i64(v: i64) -> Self;
    fn is_nil(&self) -> bool;
    fn is_unit(&self) -> bool;
    /// `self - a * b`, or `None` on overflow.
    fn sub_mul(&self, a: &Self, b: &Self) -> Option<Self>;
    fn times(&self, b: &Self) -> Option<Self>;
    fn to_big(&self) -> BigInt;
}

impl Coeff for i64 {
    fn from_i64(v: i64) -> Self {
        v
    }
    fn is_nil(&self) -> bool {
        *self == 0
    }
    fn is_unit(&self) -> bool {
        *self == 1 || *self == -1
    }
    fn sub_mul(&self, a: &Self, b: &Self) -> Option<Self> {
        self.checked_sub(a.checked_mul(*b)?)
    }
    fn times(&self, b: &Self) -> Option<Self> {
        self.checked_mul(*b)
    }
    fn to_big(&self) -> BigInt {
        BigInt::from(*self)
    }
}

impl Coeff for BigInt {
    fn from_i64(v: i64) -> Self {
        BigInt::from(v)
    }
    fn is_nil(&self) -> bool {
        Zero::is_zero(self)
    }
    fn is_unit(&self) -> bool {
        Signed::abs(self).is_one()
    }
    fn sub_mul(&self, a: &Self, b: &Self) -> Option<Self> {
        Some(self - a * b)
    }
    fn times(&self, b: &Self) -> Option<Self> {
        Some(self * b)
    }
    fn to_big(&self) -> BigInt {
        self.clone()
    }
}

type SparseRow<T> = Vec<(u32, T)>;

/// `target - factor * pivot`, merging sorted rows.
fn row_axpy<T: Coeff>(
    target: &SparseRow<T>,
    factor: &T,
    pivot: &SparseRow<T>,
) -> Option<SparseRow<T>> {
    let mut out = Vec::with_capacity(target.len() + pivot.len());
    let (mut i, mut j) = (0, 0);
    while i < target.len() || j < pivot.len() {
        let ci = target.get(i).map_or(u32::MAX, |e| e.0);
        let cj = pivot.get(j).map_or(u32::MAX, |e| e.0);
        if ci < cj {
            out.push(target[i].clone());
            i += 1;
        } else if cj < ci {
            out.push((cj, T::from_i64(0).sub_mul(factor, &pivot[j].1)?));
            j += 1;
        } else {
            let v = target[i].1.sub_mul(factor, &pivot[j].1)?;
            if !v.is_nil() {
                out.push((ci, v));
            }
            i += 1;
            j += 1;
        }
    }
    Some(out)
}

struct Residual<T> {
    units: usize,
    rows: Vec<SparseRow<T>>,
}

/// Eliminate unit pivots with row operations; returns the number of unit
/// pivots and the remaining rows (restricted to unused columns).
fn eliminate_units<T: Coeff>(m: &SparseIntMatrix) -> Option<Residual<T>> {
    let (nrows, ncols) = (m.rows(), m.cols());
    let mut rows: Vec<SparseRow<T>> = vec![Vec::new(); nrows];
    for (r, c, v) in m.entries() {
        rows[r].push((c as u32, T::from_i64(v)));
    }
    for row in &mut rows {
        row.sort_unstable_by_key(|e| e.0);
    }
    let mut col_rows: Vec<Vec<u32>> = vec![Vec::new(); ncols];
    for (r, row) in rows.iter().enumerate() {
        for e in row {
            col_rows[e.0 as usize].push(r as u32);
        }
    }
    let mut row_alive = vec![true; nrows];
    let mut col_alive = vec![true; ncols];
    let mut units = 0;
    loop {
        let mut progress = false;
        let mut order: Vec<usize> = (0..ncols).filter(|&c| col_alive[c]).collect();
        order.sort_by_key(|&c| (col_rows[c].len(), c));
        for c in order {
            // refresh the column's row list
            let mut live: Vec<u32> = col_rows[c]
                .iter()
                .copied()
                .filter(|&r| {
                    row_alive[r as usize]
                        && rows[r as usize]
                            .binary_search_by_key(&(c as u32), |e| e.0)
                            .is_ok()
                })
                .collect();
            live.sort_unstable();
            live.dedup();
            col_rows[c] = live;
            if col_rows[c].is_empty() {
                col_alive[c] = false;
                continue;
            }
            let entries: Vec<(u32, T)> = col_rows[c]
                .iter()
                .map(|&r| {
                    let row = &rows[r as usize];
                    (
                        r,
                        row[row
                            .binary_search_by_key(&(c as u32), |e| e.0)
                            .expect("live entry")]
                        .1
                        .clone(),
                    )
                })
                .collect();
            let pivot = entries
                .iter()
                .filter(|(_, v)| v.is_unit())
                .min_by_key(|(r, _)| (rows[*r as usize].len(), *r))
                .cloned();
            let Some((p, s)) = pivot else { continue };
            let pivot_row = std::mem::take(&mut rows[p as usize]);
            for (r, a) in &entries {
                if *r == p {
                    continue;
                }
                let factor = a.times(&s)?;
                rows[*r as usize] = row_axpy(&rows[*r as usize], &factor, &pivot_row)?;
                for e in &pivot_row {
                    col_rows[e.0 as usize].push(*r);
                }
            }
            row_alive[p as usize] = false;
            col_alive[c] = false;
            units += 1;
            progress = true;
        }
        if !progress {
            break;
        }
    }
    let remaining: Vec<SparseRow<T>> = rows
        .into_iter()
        .enumerate()
        .filter(|(r, row)| row_alive[*r] && !row.is_empty())
        .map(|(_, row)| {
            row.into_iter()
                .filter(|e| col_alive[e.0 as usize])
                .collect::<Vec<_>>()
        })
        .filter(|row| !row.is_empty())
        .collect();
    Some(Residual {
        units,
        rows: remaining,
    })
}

/// Diagonalize a dense matrix by unimodular row and column operations and
/// return the nonzero diagonal entries (absolute values, unsorted).
#[allow(clippy::needless_range_loop)]
fn dense_diagonal(mut a: Vec<Vec<BigInt>>) -> Vec<BigInt> {
    let nrows = a.len();
    let ncols = a.first().map_or(0, Vec::len);
    let mut diag = Vec::new();
    let mut t = 0;
    while t < nrows.min(ncols) {
        // smallest nonzero entry in the trailing block
        let mut best: Option<(usize, usize)> = None;
        for i in t..nrows {
            for j in t..ncols {
                if !a[i][j].is_zero() && best.is_none_or(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs())
                {
                    best = Some((i, j));
                }
            }
        }
        let Some((bi, bj)) = best else { break };
        a.swap(t, bi);
        for row in a.iter_mut() {
            row.swap(t, bj);
        }
        loop {
            let p = a[t][t].clone();
            let mut clean = true;
            for i in t + 1..nrows {
                if a[i][t].is_zero() {
                    continue;
                }
                let q = a[i][t].div_floor(&p);
                for j in t..ncols {
                    let v = &a[i][j] - &q * &a[t][j];
                    a[i][j] = v;
                }
                if !a[i][t].is_zero() {
                    clean = false;
                }
            }
            for j in t + 1..ncols {
                if a[t][j].is_zero() {
                    continue;
                }
                let q = a[t][j].div_floor(&p);
                for i in t..nrows {
                    let v = &a[i][j] - &q * &a[i][t];
                    a[i][j] = v;
                }
                if !a[t][j].is_zero() {
                    clean = false;
                }
            }
            if clean {
                break;
            }
            // move the smallest nonzero entry of row/column t to the pivot
            let mut best = (t, t);
            for i in t..nrows {
                if !a[i][t].is_zero() && a[i][t].abs() < a[best.0][best.1].abs() {
                    best = (i, t);
                }
            }
            for j in t..ncols {
                if !a[t][j].is_zero() && a[t][j].abs() < a[best.0][best.1].abs() {
                    best = (t, j);
                }
            }
            if best.1 == t {
                a.swap(t, best.0);
            } else {
                for row in a.iter_mut() {
                    row.swap(t, best.1);
                }
            }
        }
        diag.push(a[t][t].abs());
        t += 1;
    }
    diag
}

fn divisibility_chain(mut d: Vec<BigInt>) -> Vec<BigInt> {
    for i in 0..d.len() {
        for j in i + 1..d.len() {
            if d[j].is_multiple_of(&d[i]) {
                continue;
            }
            let g = d[i].gcd(&d[j]);
            let l = &d[i] / &g * &d[j];
            d[i] = g;
            d[j] = l;
        }
    }
    d.sort();
    d
}

fn snf_with<T: Coeff>(m: &SparseIntMatrix) -> Option<SmithForm> {
    let residual = eliminate_units::<T>(m)?;
    let mut cols: Vec<u32> = residual
        .rows
        .iter()
        .flat_map(|r| r.iter().map(|e| e.0))
        .collect();
    cols.sort_unstable();
    cols.dedup();
    let dense: Vec<Vec<BigInt>> = residual
        .rows
        .iter()
        .map(|row| {
            let mut v = vec![BigInt::zero(); cols.len()];
            for (c, x) in row {
                v[cols.binary_search(c).expect("collected column")] = x.to_big();
            }
            v
        })
        .collect();
    let mut factors = vec![BigInt::one(); residual.units];
    factors.extend(divisibility_chain(dense_diagonal(dense)));
    let factors = divisibility_chain(factors);
    Some(SmithForm {
        rank: factors.len(),
        invariant_factors: factors,
    })
}

/// Invariant factors and rank of an integer matrix, computed exactly.
///
/// Unit pivots are eliminated first in machine integers; on overflow the
/// elimination is redone with big integers. The small residual is then
/// diagonalized densely.
pub fn smith_normal_form(m: &SparseIntMatrix) -> SmithForm {
    snf_with::<i64>(m)
        .unwrap_or_else(|| snf_with::<BigInt>(m).expect("big integers do not overflow"))
}

// ---------------------------------------------------------------------------
// GF(2) rank

const DENSE_SWITCH_COST: usize = 4096;

/// Rank over GF(2): sparse elimination while fill-in stays small, then
/// dense bitset elimination on what is left.
pub fn rank_mod2(m: &SparseIntMatrix) -> usize {
    let (nrows, ncols) = (m.rows(), m.cols());
    let mut rows: Vec<Vec<u32>> = vec![Vec::new(); nrows];
    for (r, c, v) in m.entries() {
        if v % 2 != 0 {
            rows[r].push(c as u32);
        }
    }
    for row in &mut rows {
        row.sort_unstable();
    }
    let mut col_rows: Vec<Vec<u32>> = vec![Vec::new(); ncols];
    for (r, row) in rows.iter().enumerate() {
        for &c in row {
            col_rows[c as usize].push(r as u32);
        }
    }
    let mut row_alive = vec![true; nrows];
    let mut col_alive = vec![true; ncols];
    let mut rank = 0;
    loop {
        let mut progress = false;
        let mut order: Vec<usize> = (0..ncols).filter(|&c| col_alive[c]).collect();
        order.sort_by_key(|&c| (col_rows[c].len(), c));
        for c in order {
            let mut live: Vec<u32> = col_rows[c]
                .iter()
                .copied()
                .filter(|&r| {
                    row_alive[r as usize] && rows[r as usize].binary_search(&(c as u32)).is_ok()
                })
                .collect();
            live.sort_unstable();
            live.dedup();
            col_rows[c] = live;
            if col_rows[c].is_empty() {
                col_alive[c] = false;
                continue;
            }
            let p = *col_rows[c]
                .iter()
                .min_by_key(|&&r| (rows[r as usize].len(), r))
                .expect("nonempty");
            let cost = (rows[p as usize].len() - 1) * (col_rows[c].len() - 1);
            if cost > DENSE_SWITCH_COST {
                continue;
            }
            let pivot = std::mem::take(&mut rows[p as usize]);
            for &r in &col_rows[c].clone() {
                if r == p {
                    continue;
                }
                rows[r as usize] = xor_rows(&rows[r as usize], &pivot);
                for &x in &pivot {
                    col_rows[x as usize].push(r);
                }
            }
            row_alive[p as usize] = false;
            col_alive[c] = false;
            rank += 1;
            progress = true;
        }
        if !progress {
            break;
        }
    }
    let live_cols: Vec<u32> = (0..ncols as u32)
        .filter(|&c| col_alive[c as usize])
        .collect();
    let residual: Vec<Vec<u32>> = rows
        .into_iter()
        .enumerate()
        .filter(|(r, row)| row_alive[*r] && !row.is_empty())
        .map(|(_, row)| {
            row.into_iter()
                .filter(|&c| col_alive[c as usize])
                .collect::<Vec<_>>()
        })
        .filter(|row| !row.is_empty())
        .collect();
    rank + dense_rank_mod2(&residual, &live_cols)
}

fn xor_rows(a: &[u32], b: &[u32]) -> Vec<u32> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

fn dense_rank_mod2(rows: &[Vec<u32>], cols: &[u32]) -> usize {
    if rows.is_empty() {
        return 0;
    }
    let words = cols.len().div_ceil(64);
    let mut bits: Vec<Vec<u64>> = rows
        .iter()
        .map(|row| {
            let mut v = vec![0u64; words];
            for c in row {
                let k = cols.binary_search(c).expect("live column");
                v[k / 64] |= 1 << (k % 64);
            }
            v
        })
        .collect();
    let mut rank = 0;
    for k in 0..cols.len() {
        let (w, b) = (k / 64, 1u64 << (k % 64));
        let Some(p) = (rank..bits.len()).find(|&r| bits[r][w] & b != 0) else {
            continue;
        };
        bits.swap(rank, p);
        let (head, tail) = bits.split_at_mut(rank + 1);
        let pivot = &head[rank];
        tail.par_iter_mut().for_each(|row| {
            if row[w] & b != 0 {
                for (x, y) in row[w..].iter_mut().zip(&pivot[w..]) {
                    *x ^= *y;
                }
            }
        });
        rank += 1;
    }
    rank
}

// ---------------------------------------------------------------------------
// Homology of boundary sequences

fn check_square_mod2(boundaries: &[SparseIntMatrix]) -> Result<(), HomologyError> {
    for k in 2..boundaries.len() {
        let prod = boundaries[k - 1].mul(&boundaries[k]);
        if prod.entries().any(|(_, _, v)| v % 2 != 0) {
            return Err(HomologyError::NotAComplexMod2 { dim: k - 1 });
        }
    }
    Ok(())
}

/// Homology of `C_0 ← C_1 ← …` given cell counts and `D_k` (`D_0` may be
/// empty or a `0 × |C_0|` matrix).
pub fn homology_of_boundaries(counts: &[usize], boundaries: &[SparseIntMatrix]) -> HomologyResult {
    let forms: Vec<Option<SmithForm>> = (0..counts.len())
        .into_par_iter()
        .map(|k| boundaries.get(k).map(smith_normal_form))
        .collect();
    let ranks2 = mod2_ranks(counts, boundaries);
    let rank = |k: usize| forms.get(k).and_then(Option::as_ref).map_or(0, |f| f.rank);
    let betti = (0..counts.len())
        .map(|k| counts[k] - rank(k) - rank(k + 1))
        .collect();
    let torsion = (0..counts.len())
        .map(|k| {
            forms
                .get(k + 1)
                .and_then(Option::as_ref)
                .map_or_else(Vec::new, SmithForm::torsion)
        })
        .collect();
    let betti_mod2 = betti_from_ranks(counts, &ranks2);
    HomologyResult {
        betti,
        torsion,
        betti_mod2,
    }
}

fn mod2_ranks(counts: &[usize], boundaries: &[SparseIntMatrix]) -> Vec<usize> {
    (0..counts.len())
        .into_par_iter()
        .map(|k| boundaries.get(k).map_or(0, rank_mod2))
        .collect()
}

fn betti_from_ranks(counts: &[usize], ranks: &[usize]) -> Vec<usize> {
    (0..counts.len())
        .map(|k| counts[k] - ranks[k] - ranks.get(k + 1).copied().unwrap_or(0))
        .collect()
}

fn boundaries_of<C: CellId>(cc: &ChainComplex<C>) -> Vec<SparseIntMatrix> {
    (0..cc.num_dims()).map(|k| cc.boundary(k)).collect()
}

/// Integral homology (with mod-2 Betti numbers) of a chain complex.
pub fn homology_z<C: CellId>(cc: &ChainComplex<C>) -> Result<HomologyResult, HomologyError> {
    cc.verify_boundary_squared()
        .map_err(HomologyError::NotAComplex)?;
    Ok(homology_of_boundaries(
        &cc.cell_counts(),
        &boundaries_of(cc),
    ))
}

/// Mod-2 Betti numbers of a chain complex.
pub fn homology_mod2<C: CellId>(cc: &ChainComplex<C>) -> Result<Vec<usize>, HomologyError> {
    let boundaries = boundaries_of(cc);
    check_square_mod2(&boundaries)?;
    let counts = cc.cell_counts();
    Ok(betti_from_ranks(&counts, &mod2_ranks(&counts, &boundaries)))
}

/// Mod-2 Betti numbers for a boundary sequence.
pub fn mod2_betti_of_boundaries(counts: &[usize], boundaries: &[SparseIntMatrix]) -> Vec<usize> {
    betti_from_ranks(counts, &mod2_ranks(counts, boundaries))
}

/// Convenience: a factor list as machine integers (for display and tests).
pub fn factors_as_u64(f: &[BigInt]) -> Vec<u64> {
    f.iter().map(|d| d.to_u64().unwrap_or(u64::MAX)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn smith_examples() {
        let f = smith_normal_form(&SparseIntMatrix::from_dense(&[vec![2, 0], vec![0, 0]]));
        assert_eq!((f.rank, f.invariant_factors), (1, big(&[2])));
        let f = smith_normal_form(&SparseIntMatrix::from_dense(&[vec![1, 1], vec![1, -1]]));
        assert_eq!((f.rank, f.invariant_factors), (2, big(&[1, 2])));
        let id = SparseIntMatrix::from_dense(&[vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]);
        assert_eq!(smith_normal_form(&id).invariant_factors, big(&[1, 1, 1]));
    }

    #[test]
    fn smith_chain_is_normalized() {
        let f = smith_normal_form(&SparseIntMatrix::from_dense(&[vec![2, 0], vec![0, 3]]));
        assert_eq!(f.invariant_factors, big(&[1, 6]));
        let f = smith_normal_form(&SparseIntMatrix::from_dense(&[vec![4, 6], vec![6, 4]]));
        assert_eq!(f.invariant_factors, big(&[2, 10]));
    }

    #[test]
    fn overflow_falls_back_to_big_integers() {
        let big_entry = i64::MAX / 2;
        let m = SparseIntMatrix::from_dense(&[
            vec![1, big_entry, 0],
            vec![1, 0, big_entry],
            vec![0, 3, 5],
        ]);
        let f = smith_normal_form(&m);
        assert_eq!(f.rank, 3);
        let det =
            BigInt::from(big_entry) * BigInt::from(-5) - BigInt::from(big_entry) * BigInt::from(3);
        let product: BigInt = f.invariant_factors.iter().product();
        assert_eq!(product, det.abs());
    }

    #[test]
    fn mod2_rank_basics() {
        assert_eq!(
            rank_mod2(&SparseIntMatrix::from_dense(&[vec![1, 1], vec![1, -1]])),
            1
        );
        assert_eq!(
            rank_mod2(&SparseIntMatrix::from_dense(&[vec![2, 0], vec![0, 3]])),
            1
        );
        let dense: Vec<u32> = (0..3).collect();
        assert_eq!(
            dense_rank_mod2(&[vec![0, 1], vec![1, 2], vec![0, 2]], &dense),
            2
        );
    }

    #[test]
    fn circle_homology() {
        let d1 = SparseIntMatrix::from_dense(&[vec![-1, 1], vec![1, -1]]);
        let h = homology_of_boundaries(&[2, 2], &[SparseIntMatrix::zeros(0, 2), d1]);
        assert_eq!(h.betti, [1, 1]);
        assert!(h.is_torsion_free());
        assert_eq!(h.group_label(1), "Z");
    }

    #[test]
    fn projective_plane_homology() {
        // one cell in each dimension 0, 1, 2 with the 2-cell attached by degree 2
        let d1 = SparseIntMatrix::zeros(1, 1);
        let d2 = SparseIntMatrix::from_dense(&[vec![2]]);
        let h = homology_of_boundaries(&[1, 1, 1], &[SparseIntMatrix::zeros(0, 1), d1, d2]);
        assert_eq!(h.betti, [1, 0, 0]);
        assert_eq!(h.torsion[1], big(&[2]));
        assert_eq!(h.betti_mod2, [1, 1, 1]);
        assert!(h.is_mod2_consistent());
        assert_eq!(h.group_label(1), "Z2");
        assert_eq!(h.group_label(2), "0");
    }
}
