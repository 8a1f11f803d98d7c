//! The quotient of the cyclopermutohedron by the reflection `r`.
//!
//! Each quotient cell is represented by its ascending member. Incidences
//! descend from the cyclopermutohedron: a descending facet `τ` is replaced
//! by `r(τ)` and its coefficient multiplied by `reflection_sign(τ)`.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use thiserror::Error;

use crate::complex::{ChainComplex, ComplexError};
use crate::cp_morse::{binomial, step_matching, StepMatching};
use crate::cyclopermutohedron::{build_cp, CpError};
use crate::discrete_morse::{
    check_acyclic, morse_complex_from_pairing, MorseComplex, MorseError, Pairing,
};
use crate::homology::{smith_normal_form, HomologyResult};
use crate::partitions::{
    bit, block_len, elements, min_element, CyclicCell, Element, PartitionError,
};
use crate::sparse::SparseIntMatrix;
use crate::ResourceGuard;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QpError {
    #[error(transparent)]
    Build(#[from] CpError),
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error(transparent)]
    Partition(#[from] PartitionError),
    #[error(transparent)]
    Morse(#[from] MorseError),
    #[error("sgn is undefined for negative input {0}")]
    NegativeSgn(i64),
    #[error("critical cell {0} is not of the form (i, I, ∇, N)")]
    Unclassified(String),
}

/// A cell of the quotient, stored as its ascending representative.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BiCyclicCell(CyclicCell);

impl BiCyclicCell {
    pub fn rep(&self) -> &CyclicCell {
        &self.0
    }

    /// Unordered class `{i, j}` as `(min, max)`.
    pub fn class(&self) -> (Element, Element) {
        self.0
            .class_of()
            .expect("quotient cells have three blocks")
            .unordered()
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }
}

impl fmt::Display for BiCyclicCell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// `c` if ascending, otherwise `reflect(c)`.
pub fn ascending_representative(c: &CyclicCell) -> Result<BiCyclicCell, PartitionError> {
    Ok(BiCyclicCell(if c.is_ascending()? {
        c.clone()
    } else {
        c.reflect()
    }))
}

/// Whether `a` is higher than `b`: both sorted class entries of `a` are at
/// least those of `b`.
pub fn higher(a: &BiCyclicCell, b: &BiCyclicCell) -> bool {
    let (a0, a1) = a.class();
    let (b0, b1) = b.class();
    a0 >= b0 && a1 >= b1
}

/// `(-1)^((s-1)/2)` for odd `s`, `(-1)^(s/2)` for even `s`.
pub fn sgn(s: i64) -> Result<i64, QpError> {
    if s < 0 {
        return Err(QpError::NegativeSgn(s));
    }
    let e = if s % 2 == 1 { (s - 1) / 2 } else { s / 2 };
    Ok(if e % 2 == 0 { 1 } else { -1 })
}

fn sgn_len(s: usize) -> i64 {
    sgn(s as i64).expect("lengths are non-negative")
}

/// Orientation change between `c` and `reflect(c)` under `r`.
pub fn reflection_sign(c: &CyclicCell) -> i64 {
    let w = block_len(c.marked_block());
    let a = c.dim();
    let unmarked: i64 = c
        .unmarked_blocks()
        .iter()
        .map(|&b| sgn_len(block_len(b)))
        .product();
    sgn_len(a + 1 - w) * sgn_len(w - 1) * unmarked * sgn_len(w)
}

/// Project a cyclopermutohedron complex onto the quotient.
pub fn qp_from_cp(cp: &ChainComplex<CyclicCell>) -> Result<ChainComplex<BiCyclicCell>, QpError> {
    let cells: Vec<Vec<BiCyclicCell>> = cp
        .all_cells()
        .iter()
        .map(|cs| {
            cs.iter()
                .filter(|c| c.is_ascending().unwrap_or(false))
                .map(|c| BiCyclicCell(c.clone()))
                .collect()
        })
        .collect();
    let mut boundary = vec![SparseIntMatrix::zeros(0, cells[0].len())];
    for k in 1..cells.len() {
        let index: HashMap<&CyclicCell, usize> = cells[k - 1]
            .iter()
            .enumerate()
            .map(|(i, c)| (&c.0, i))
            .collect();
        let d = cp.boundary_ref(k).expect("dimension in range");
        let columns: Vec<Vec<(usize, i64)>> = cells[k]
            .par_iter()
            .map(|sigma| {
                let col = cp.index_of(k, &sigma.0).expect("representative is a cell");
                d.column(col)
                    .map(|(row, v)| {
                        let tau = &cp.cells(k - 1)[row];
                        if tau.is_ascending().unwrap_or(false) {
                            (index[tau], v)
                        } else {
                            (index[&tau.reflect()], v * reflection_sign(tau))
                        }
                    })
                    .collect()
            })
            .collect();
        boundary.push(SparseIntMatrix::from_columns(cells[k - 1].len(), columns));
    }
    Ok(ChainComplex::new(cells, boundary)?)
}

/// The quotient complex, with incidences by descent.
pub fn build_qp(n: usize, guard: &ResourceGuard) -> Result<ChainComplex<BiCyclicCell>, QpError> {
    qp_from_cp(&build_cp(n, guard)?)
}

/// Check that `c ↦ reflection_sign(c)·r(c)` commutes with the boundary.
/// Returns the first offending `(cell, facet)` pair.
pub fn verify_reflection_chain_map(cp: &ChainComplex<CyclicCell>) -> Result<(), (String, String)> {
    for k in 1..cp.num_dims() {
        let d = cp.boundary_ref(k).expect("dimension in range");
        let bad = (0..cp.cells(k).len())
            .into_par_iter()
            .find_map_first(|col| {
                let sigma = &cp.cells(k)[col];
                let rs = cp.index_of(k, &sigma.reflect())?;
                let es = reflection_sign(sigma);
                d.column(col).find_map(|(row, v)| {
                    let tau = &cp.cells(k - 1)[row];
                    let rt = cp
                        .index_of(k - 1, &tau.reflect())
                        .expect("reflection preserves cells");
                    (es * cp.incidence(k, rs, rt) != v * reflection_sign(tau))
                        .then(|| (sigma.to_string(), tau.to_string()))
                })
            });
        if let Some(b) = bad {
            return Err(b);
        }
    }
    Ok(())
}

/// Stepwise matching restricted to ascending cells of equal class.
pub fn build_qp_matching(qp: &ChainComplex<BiCyclicCell>) -> StepMatching {
    let n = qp.cells(0).first().map_or(0, |c| c.0.n());
    step_matching(
        qp,
        n,
        |c| &c.0,
        |c| Some(BiCyclicCell(c)),
        |a, b| match (a.class_of(), b.class_of()) {
            (Ok(x), Ok(y)) => x == y && y.is_ascending(),
            _ => false,
        },
    )
}

/// Quotient pairs whose lift is not a pair of the cyclopermutohedron matching.
pub fn lift_violations(
    qp: &ChainComplex<BiCyclicCell>,
    qm: &StepMatching,
    cp: &ChainComplex<CyclicCell>,
    cm: &StepMatching,
) -> Vec<String> {
    let cp_pairs: BTreeSet<(usize, usize, usize)> = cm
        .matching
        .pairs()
        .iter()
        .map(|p| (p.dim, p.lower, p.upper))
        .collect();
    qm.matching
        .pairs()
        .iter()
        .filter_map(|p| {
            let lo = &qp.cells(p.dim)[p.lower].0;
            let hi = &qp.cells(p.dim + 1)[p.upper].0;
            let key = (p.dim, cp.index_of(p.dim, lo)?, cp.index_of(p.dim + 1, hi)?);
            (!cp_pairs.contains(&key)).then(|| format!("{lo} -> {hi}"))
        })
        .collect()
}

/// A critical cell `(i, I, ∇, N)` with `∇ < i < I`, `∇` decreasing.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QpCriticalCell {
    pub i: Element,
    pub rest: u32,
    pub nabla: Vec<Element>,
    pub marked: u32,
}

impl QpCriticalCell {
    pub fn classify(c: &CyclicCell) -> Option<Self> {
        let unmarked = c.unmarked_blocks();
        let (&first, tail) = unmarked.split_first()?;
        let (&rest, singles) = tail.split_first()?;
        if block_len(first) != 1 || !singles.iter().all(|&b| block_len(b) == 1) {
            return None;
        }
        let i = min_element(first);
        let nabla: Vec<Element> = singles.iter().map(|&b| min_element(b)).collect();
        let decreasing = nabla.windows(2).all(|w| w[0] > w[1]);
        let below = nabla.first().is_none_or(|&x| x < i);
        (decreasing && below && i < min_element(rest)).then(|| Self {
            i,
            rest,
            nabla,
            marked: c.marked_block(),
        })
    }

    /// The unique critical cell of dimension `dim` with marked block `marked`.
    pub fn from_marked(n: usize, marked: u32, dim: usize) -> Option<Self> {
        let remainder: Vec<Element> = (1..=n as Element)
            .filter(|&e| marked & bit(e) == 0)
            .collect();
        let m = (n + 2).checked_sub(dim + 4)?;
        if remainder.len() < m + 2 {
            return None;
        }
        let mut nabla = remainder[..m].to_vec();
        nabla.reverse();
        let i = remainder[m];
        let rest = remainder[m + 1..].iter().fold(0, |acc, &e| acc | bit(e));
        Some(Self {
            i,
            rest,
            nabla,
            marked,
        })
    }

    pub fn cell(&self, n: usize) -> CyclicCell {
        let masks: Vec<u32> = [bit(self.i), self.rest]
            .into_iter()
            .chain(self.nabla.iter().map(|&e| bit(e)))
            .chain([self.marked])
            .collect();
        CyclicCell::from_masks(n, &masks).expect("critical data forms a partition")
    }
}

/// `ξ(n, i) = Σ_{k ≤ i} C(n, k)`.
pub fn xi(n: usize, i: usize) -> usize {
    (0..=i).map(|k| binomial(n, k)).sum()
}

pub fn expected_qp_critical_counts(n: usize) -> Vec<usize> {
    (0..=n - 2).map(|i| xi(n, i)).collect()
}

/// Integral homology of the quotient: `Z^{C(n,i)}` in even dimensions,
/// `Z2^{ξ(n,i)}` in odd dimensions below the top, and `Z^{ξ(n,n-2)}` in
/// the top dimension when it is odd.
pub fn expected_qp_homology(n: usize) -> HomologyResult {
    let top = n - 2;
    let mut betti = Vec::new();
    let mut torsion = Vec::new();
    for i in 0..=top {
        if i % 2 == 0 {
            betti.push(binomial(n, i));
            torsion.push(Vec::new());
        } else if i == top {
            betti.push(xi(n, i));
            torsion.push(Vec::new());
        } else {
            betti.push(0);
            torsion.push(vec![BigInt::from(2); xi(n, i)]);
        }
    }
    HomologyResult {
        betti,
        torsion,
        betti_mod2: expected_qp_critical_counts(n),
    }
}

/// Classify every critical cell and check that its marked block
/// determines it.
pub fn classify_critical_qp(
    qp: &ChainComplex<BiCyclicCell>,
    pairing: &Pairing,
) -> Result<Vec<Vec<QpCriticalCell>>, QpError> {
    (0..qp.num_dims())
        .map(|d| {
            pairing
                .critical(d)
                .into_iter()
                .map(|idx| {
                    let c = &qp.cells(d)[idx].0;
                    let crit = QpCriticalCell::classify(c)
                        .filter(|q| {
                            QpCriticalCell::from_marked(c.n(), q.marked, d).as_ref() == Some(q)
                        })
                        .ok_or_else(|| QpError::Unclassified(c.to_string()))?;
                    Ok(crit)
                })
                .collect()
        })
        .collect()
}

fn free(marked: u32, n: usize) -> Vec<Element> {
    elements(marked & !bit(n as Element + 1)).collect()
}

fn make(n: usize, i: Element, rest: u32, nabla: &[Element], marked: u32) -> Option<CyclicCell> {
    let mut nabla = nabla.to_vec();
    nabla.sort_unstable_by(|a, b| b.cmp(a));
    let q = QpCriticalCell {
        i,
        rest,
        nabla,
        marked,
    };
    let c = q.cell(n);
    (QpCriticalCell::classify(&c).as_ref() == Some(&q)).then_some(c)
}

/// The listed two-path target shapes below `upper`, restricted to those
/// that are critical cells.
pub fn literal_qp_targets(upper: &QpCriticalCell, n: usize) -> BTreeSet<CyclicCell> {
    let QpCriticalCell {
        i,
        rest,
        nabla,
        marked,
    } = upper;
    let with = |x: Element| -> Vec<Element> { nabla.iter().copied().chain([x]).collect() };
    let mut out = BTreeSet::new();
    for t in free(*marked, n) {
        let nt = marked & !bit(t);
        out.extend(make(n, t, *rest, &with(*i), nt));
        out.extend(make(n, *i, *rest, &with(t), nt));
        if block_len(*rest) == 1 {
            out.extend(make(n, min_element(*rest), bit(t), &with(*i), nt));
        }
    }
    for j in elements(*rest) {
        if block_len(*rest) > 1 {
            out.extend(make(n, j, rest & !bit(j), &with(*i), *marked));
        }
    }
    out
}

/// The complete family of two-path targets below `upper`: the listed
/// shapes plus, when `|I| = 1`, the cells `(I, T, i∪∇, N∖T)` for every
/// `T ⊆ N∖{n+1}` with `|T| ≥ 2` and `min T > I`.
pub fn extended_qp_targets(upper: &QpCriticalCell, n: usize) -> BTreeSet<CyclicCell> {
    let mut out = literal_qp_targets(upper, n);
    let QpCriticalCell {
        i,
        rest,
        nabla,
        marked,
    } = upper;
    if block_len(*rest) == 1 {
        let r = min_element(*rest);
        let cand: Vec<Element> = free(*marked, n).into_iter().filter(|&x| x > r).collect();
        let with_i: Vec<Element> = nabla.iter().copied().chain([*i]).collect();
        for sub in 0u32..(1 << cand.len()) {
            if sub.count_ones() < 2 {
                continue;
            }
            let t = cand
                .iter()
                .enumerate()
                .filter(|(k, _)| sub & (1 << k) != 0)
                .fold(0, |acc, (_, &e)| acc | bit(e));
            out.extend(make(n, r, t, &with_i, marked & !t));
        }
    }
    out
}

/// Everything derived from the quotient matching.
#[derive(Debug, Clone)]
pub struct QpMorseData {
    pub cp: ChainComplex<CyclicCell>,
    pub complex: ChainComplex<BiCyclicCell>,
    pub steps: StepMatching,
    pub pairing: Pairing,
    pub morse: MorseComplex,
}

pub fn qp_morse_data(n: usize, guard: &ResourceGuard) -> Result<QpMorseData, QpError> {
    let cp = build_cp(n, guard)?;
    let complex = qp_from_cp(&cp)?;
    let steps = build_qp_matching(&complex);
    let pairing = check_acyclic(&complex, &steps.matching)?;
    let morse = morse_complex_from_pairing(&complex, &pairing)?;
    Ok(QpMorseData {
        cp,
        complex,
        steps,
        pairing,
        morse,
    })
}

/// Path counts and target shapes between adjacent critical cells.
#[derive(Debug, Clone, Default)]
pub struct QpPathReport {
    pub n: usize,
    pub pairs_checked: usize,
    pub two_path_pairs: usize,
    /// Pairs whose path count is neither 0 nor 2.
    pub bad_counts: Vec<String>,
    /// Two-path targets not among the listed shapes.
    pub literal_outliers: Vec<String>,
    /// Disagreements between the extended family and the two-path targets.
    pub extended_mismatches: Vec<String>,
}

impl QpPathReport {
    pub fn count_law_holds(&self) -> bool {
        self.bad_counts.is_empty()
    }

    pub fn extended_shapes_hold(&self) -> bool {
        self.extended_mismatches.is_empty()
    }

    pub fn literal_shapes_hold(&self) -> bool {
        self.literal_outliers.is_empty()
    }
}

pub fn verify_qp_path_theorem(n: usize, guard: &ResourceGuard) -> Result<QpPathReport, QpError> {
    Ok(qp_path_report(&qp_morse_data(n, guard)?))
}

pub fn qp_path_report(data: &QpMorseData) -> QpPathReport {
    let qp = &data.complex;
    let n = qp.cells(0)[0].0.n();
    let mc = &data.morse;
    let mut report = QpPathReport {
        n,
        ..Default::default()
    };
    for k in 1..mc.critical.len() {
        for (col, &tau) in mc.critical[k].iter().enumerate() {
            let upper_cell = &qp.cells(k)[tau].0;
            let Some(upper) = QpCriticalCell::classify(upper_cell) else {
                report
                    .extended_mismatches
                    .push(format!("{upper_cell}: not a critical shape"));
                continue;
            };
            let literal = literal_qp_targets(&upper, n);
            let extended = extended_qp_targets(&upper, n);
            let counts: HashMap<usize, i64> = mc.path_counts[k].column(col).collect();
            for (row, &sigma) in mc.critical[k - 1].iter().enumerate() {
                report.pairs_checked += 1;
                let count = counts.get(&row).copied().unwrap_or(0);
                let lower = &qp.cells(k - 1)[sigma].0;
                let label = format!("{upper_cell} -> {lower}");
                if count != 0 && count != 2 {
                    report.bad_counts.push(format!("{label}: {count} paths"));
                }
                let two = count == 2;
                if two {
                    report.two_path_pairs += 1;
                    if !literal.contains(lower) {
                        report.literal_outliers.push(label.clone());
                    }
                }
                if two != extended.contains(lower) {
                    report
                        .extended_mismatches
                        .push(format!("{label}: {count} paths"));
                }
            }
        }
    }
    report
}

/// Check `∂̃_i = 0` for odd `i` and, for even `i`, invariant factors all
/// equal to 2 with full rank onto the critical `(i-1)`-cells.
pub fn verify_boundary_dichotomy(mc: &MorseComplex) -> Result<(), String> {
    for (i, d) in mc.boundary.iter().enumerate().skip(1) {
        if i % 2 == 1 {
            if !d.is_zero() {
                return Err(format!("Morse boundary in odd dimension {i} is nonzero"));
            }
            continue;
        }
        let snf = smith_normal_form(d);
        let all_two = snf
            .invariant_factors
            .iter()
            .all(|f| f.to_i64() == Some(2) || *f == BigInt::from(-2));
        if !all_two || snf.rank != d.rows() {
            return Err(format!(
                "Morse boundary in dimension {i}: rank {} of {}, factors {:?}",
                snf.rank,
                d.rows(),
                snf.invariant_factors
            ));
        }
    }
    Ok(())
}

/// Check that every facet is higher than its cell and that matched pairs
/// share a class, so classes only climb along gradient paths.
pub fn verify_class_monotone(
    qp: &ChainComplex<BiCyclicCell>,
    pairing: &Pairing,
) -> Result<(), String> {
    for k in 1..qp.num_dims() {
        let d = qp.boundary_ref(k).expect("dimension in range");
        for (col, sigma) in qp.cells(k).iter().enumerate() {
            for (row, _) in d.column(col) {
                let tau = &qp.cells(k - 1)[row];
                if !higher(tau, sigma) {
                    return Err(format!("facet {tau} is not higher than {sigma}"));
                }
            }
            if let Some(lo) = pairing.down(k, col) {
                let tau = &qp.cells(k - 1)[lo];
                if tau.class() != sigma.class() {
                    return Err(format!("matched pair {tau} -> {sigma} changes class"));
                }
            }
        }
    }
    Ok(())
}
