//! The stepwise matching on the cyclopermutohedron and its critical cells.
//!
//! Step `k` (for `k = 1, …, n-1`) pairs `α = (…, {k}, I, …)` with
//! `β = (…, {k} ∪ I, …)` whenever `I` is not the marked block, `k < I`,
//! `β` still has three blocks and neither cell was paired earlier.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use thiserror::Error;

use crate::complex::{CellId, ChainComplex};
use crate::cyclopermutohedron::{build_cp, CpError};
use crate::discrete_morse::{
    check_acyclic, enumerate_gradient_paths, morse_complex_from_pairing, path_weight, Matching,
    MorseComplex, MorseError, Pair, Pairing,
};
use crate::homology::HomologyResult;
use crate::partitions::{bit, block_len, elements, min_element, CyclicCell, Element};
use crate::ResourceGuard;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CpMorseError {
    #[error(transparent)]
    Build(#[from] CpError),
    #[error(transparent)]
    Morse(#[from] MorseError),
    #[error("critical cell {0} has neither critical shape")]
    Unclassified(String),
}

/// Two candidate pairings competing for the same cell within one step.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StepConflict {
    pub step: usize,
    pub cell: String,
    pub rejected: String,
}

/// A matching built step by step, with the step of every pair.
#[derive(Debug, Clone)]
pub struct StepMatching {
    pub matching: Matching,
    pub steps: Vec<usize>,
    pub conflicts: Vec<StepConflict>,
}

/// Merge the singleton `{k}` with the block after it, if the step-`k`
/// rule applies to `alpha`.
pub fn step_partner(alpha: &CyclicCell, k: Element) -> Option<CyclicCell> {
    let blocks = alpha.blocks();
    let q = blocks.iter().position(|&b| b == bit(k))?;
    let next = q + 1;
    if next >= blocks.len() - 1 || blocks.len() < 4 {
        return None;
    }
    if min_element(blocks[next]) < k {
        return None;
    }
    let mut merged: Vec<u32> = Vec::with_capacity(blocks.len() - 1);
    merged.extend_from_slice(&blocks[..q]);
    merged.push(blocks[q] | blocks[next]);
    merged.extend_from_slice(&blocks[next + 1..]);
    Some(CyclicCell::from_masks(alpha.n(), &merged).expect("merging keeps a partition"))
}

/// Run steps `1..=n-1` over a complex whose cells carry cyclic
/// representatives. `accept` filters candidate pairs `(α, β)`.
pub fn step_matching<C, R, W, A>(
    cc: &ChainComplex<C>,
    n: usize,
    rep: R,
    wrap: W,
    accept: A,
) -> StepMatching
where
    C: CellId,
    R: Fn(&C) -> &CyclicCell,
    W: Fn(CyclicCell) -> Option<C>,
    A: Fn(&CyclicCell, &CyclicCell) -> bool,
{
    let dims = cc.num_dims();
    let mut paired: Vec<Vec<bool>> = cc
        .cell_counts()
        .into_iter()
        .map(|c| vec![false; c])
        .collect();
    let mut matching = Matching::new();
    let mut steps = Vec::new();
    let mut conflicts = Vec::new();
    for k in 1..n as Element {
        let mut claimed: HashMap<(usize, usize), usize> = HashMap::new();
        let mut batch = Vec::new();
        for d in 0..dims.saturating_sub(1) {
            for (a, cell) in cc.cells(d).iter().enumerate() {
                if paired[d][a] {
                    continue;
                }
                let alpha = rep(cell);
                let Some(beta) = step_partner(alpha, k) else {
                    continue;
                };
                if !accept(alpha, &beta) {
                    continue;
                }
                let Some(b) = wrap(beta).and_then(|id| cc.index_of(d + 1, &id)) else {
                    continue;
                };
                if paired[d + 1][b] {
                    continue;
                }
                if let Some(&prev) = claimed.get(&(d + 1, b)) {
                    conflicts.push(StepConflict {
                        step: k as usize,
                        cell: cc.cells(d + 1)[b].to_string(),
                        rejected: format!("{} (kept {})", cell, cc.cells(d)[prev]),
                    });
                    continue;
                }
                claimed.insert((d + 1, b), a);
                batch.push(Pair {
                    dim: d,
                    lower: a,
                    upper: b,
                });
            }
        }
        for p in batch {
            paired[p.dim][p.lower] = true;
            paired[p.dim + 1][p.upper] = true;
            matching.push(p);
            steps.push(k as usize);
        }
    }
    StepMatching {
        matching,
        steps,
        conflicts,
    }
}

/// The stepwise matching on the cyclopermutohedron complex `cc`.
pub fn build_cp_matching(cc: &ChainComplex<CyclicCell>) -> StepMatching {
    let n = cc.cells(0).first().map_or(0, CyclicCell::n);
    step_matching(cc, n, |c| c, Some, |_, _| true)
}

/// A critical cell of the stepwise matching.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CpCriticalCell {
    /// `(∇, N)`: strictly decreasing singletons followed by the marked block.
    Type1 { nabla: Vec<Element>, marked: u32 },
    /// `(i, I, N)` with `i < I`.
    Type2 { i: Element, rest: u32, marked: u32 },
}

impl CpCriticalCell {
    pub fn classify(c: &CyclicCell) -> Option<Self> {
        let unmarked = c.unmarked_blocks();
        let marked = c.marked_block();
        if unmarked.iter().all(|&b| block_len(b) == 1) {
            let nabla: Vec<Element> = unmarked.iter().map(|&b| min_element(b)).collect();
            if nabla.windows(2).all(|w| w[0] > w[1]) {
                return Some(Self::Type1 { nabla, marked });
            }
        }
        if let [first, rest] = unmarked {
            if block_len(*first) == 1 && min_element(*first) < min_element(*rest) {
                return Some(Self::Type2 {
                    i: min_element(*first),
                    rest: *rest,
                    marked,
                });
            }
        }
        None
    }

    pub fn cell(&self, n: usize) -> CyclicCell {
        let masks: Vec<u32> = match self {
            Self::Type1 { nabla, marked } => {
                nabla.iter().map(|&e| bit(e)).chain([*marked]).collect()
            }
            Self::Type2 { i, rest, marked } => vec![bit(*i), *rest, *marked],
        };
        CyclicCell::from_masks(n, &masks).expect("critical data forms a partition")
    }
}

impl fmt::Display for CpCriticalCell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Type1 { .. } => write!(f, "type 1"),
            Self::Type2 { .. } => write!(f, "type 2"),
        }
    }
}

/// Classify every critical cell, by dimension.
pub fn classify_critical_cp(
    cc: &ChainComplex<CyclicCell>,
    pairing: &Pairing,
) -> Result<Vec<Vec<CpCriticalCell>>, CpMorseError> {
    (0..cc.num_dims())
        .map(|d| {
            pairing
                .critical(d)
                .into_iter()
                .map(|i| {
                    let c = &cc.cells(d)[i];
                    CpCriticalCell::classify(c)
                        .ok_or_else(|| CpMorseError::Unclassified(c.to_string()))
                })
                .collect()
        })
        .collect()
}

/// `C(n, k)`.
pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

/// Expected number of critical cells per dimension.
pub fn expected_cp_critical_counts(n: usize) -> Vec<usize> {
    let top = n - 2;
    (0..=top)
        .map(|i| {
            if i < top {
                binomial(n, i)
            } else {
                binomial(n, 2) + (1 << n) - n - 1
            }
        })
        .collect()
}

/// Homology of the cyclopermutohedron: free, with `b_i = C(n, i)` below
/// the top dimension and the top rank equal to the number of critical cells.
pub fn expected_cp_homology(n: usize) -> HomologyResult {
    let betti = expected_cp_critical_counts(n);
    HomologyResult {
        torsion: vec![Vec::new(); betti.len()],
        betti_mod2: betti.clone(),
        betti,
    }
}

/// Lower critical cells that the path lemma predicts to be joined to
/// `upper` by exactly two gradient paths.
pub fn predicted_cp_targets(upper: &CpCriticalCell, n: usize) -> Vec<CyclicCell> {
    let free = |marked: u32| elements(marked & !bit(n as Element + 1)).collect::<Vec<_>>();
    let decreasing = |set: &[Element]| {
        let mut v = set.to_vec();
        v.sort_unstable_by(|a, b| b.cmp(a));
        v
    };
    let mut out = Vec::new();
    match upper {
        CpCriticalCell::Type1 { nabla, marked } => {
            for t in free(*marked) {
                let mut s = nabla.clone();
                s.push(t);
                out.push(CpCriticalCell::Type1 {
                    nabla: decreasing(&s),
                    marked: marked & !bit(t),
                });
            }
        }
        CpCriticalCell::Type2 { i, rest, marked } => {
            let rest_elems: Vec<Element> = elements(*rest).collect();
            match rest_elems.len() {
                1 => {
                    for t in free(*marked) {
                        let s = [*i, rest_elems[0], t];
                        out.push(CpCriticalCell::Type1 {
                            nabla: decreasing(&s),
                            marked: marked & !bit(t),
                        });
                    }
                }
                2 => {
                    let s = [*i, rest_elems[0], rest_elems[1]];
                    out.push(CpCriticalCell::Type1 {
                        nabla: decreasing(&s),
                        marked: *marked,
                    });
                }
                _ => {}
            }
        }
    }
    out.into_iter().map(|c| c.cell(n)).collect()
}

/// Outcome of checking gradient-path counts between critical cells.
#[derive(Debug, Clone, Default)]
pub struct PathLemmaReport {
    pub n: usize,
    pub pairs_checked: usize,
    pub two_path_pairs: usize,
    /// Pairs whose path count is neither 0 nor 2.
    pub bad_counts: Vec<String>,
    /// Two-path pairs outside the predicted shapes, or predicted pairs
    /// without two paths.
    pub shape_mismatches: Vec<String>,
    /// Two-path pairs where some path has weight −1.
    pub negative_weights: Vec<String>,
}

impl PathLemmaReport {
    pub fn passed(&self) -> bool {
        self.bad_counts.is_empty() && self.shape_mismatches.is_empty()
    }
}

/// Everything derived from the stepwise matching on one complex.
#[derive(Debug, Clone)]
pub struct CpMorseData {
    pub complex: ChainComplex<CyclicCell>,
    pub steps: StepMatching,
    pub pairing: Pairing,
    pub morse: MorseComplex,
}

pub fn cp_morse_data(n: usize, guard: &ResourceGuard) -> Result<CpMorseData, CpMorseError> {
    let complex = build_cp(n, guard)?;
    let steps = build_cp_matching(&complex);
    let pairing = check_acyclic(&complex, &steps.matching)?;
    let morse = morse_complex_from_pairing(&complex, &pairing)?;
    Ok(CpMorseData {
        complex,
        steps,
        pairing,
        morse,
    })
}

/// Check path counts (0 or 2) and the three two-path shapes for every
/// pair of critical cells in adjacent dimensions.
pub fn verify_cp_path_lemma(
    n: usize,
    guard: &ResourceGuard,
) -> Result<PathLemmaReport, CpMorseError> {
    let data = cp_morse_data(n, guard)?;
    Ok(path_lemma_report(&data))
}

pub fn path_lemma_report(data: &CpMorseData) -> PathLemmaReport {
    let cc = &data.complex;
    let n = cc.cells(0)[0].n();
    let mc = &data.morse;
    let mut report = PathLemmaReport {
        n,
        ..Default::default()
    };
    for k in 1..mc.critical.len() {
        for (col, &tau) in mc.critical[k].iter().enumerate() {
            let upper =
                CpCriticalCell::classify(&cc.cells(k)[tau]).expect("critical cells are classified");
            let predicted: BTreeSet<CyclicCell> =
                predicted_cp_targets(&upper, n).into_iter().collect();
            let counts: HashMap<usize, i64> = mc.path_counts[k].column(col).collect();
            for (row, &sigma) in mc.critical[k - 1].iter().enumerate() {
                report.pairs_checked += 1;
                let count = counts.get(&row).copied().unwrap_or(0);
                let lower = &cc.cells(k - 1)[sigma];
                let label = format!("{} -> {}", cc.cells(k)[tau], lower);
                if count != 0 && count != 2 {
                    report.bad_counts.push(format!("{label}: {count} paths"));
                }
                if count == 2 {
                    report.two_path_pairs += 1;
                    if paths_have_negative_weight(cc, &data.pairing, k, tau, sigma) {
                        report.negative_weights.push(label.clone());
                    }
                }
                if (count == 2) != predicted.contains(lower) {
                    report.shape_mismatches.push(format!(
                        "{label}: {count} paths, predicted {}",
                        predicted.contains(lower)
                    ));
                }
            }
        }
    }
    report
}

fn paths_have_negative_weight<C: CellId>(
    cc: &ChainComplex<C>,
    pairing: &Pairing,
    k: usize,
    tau: usize,
    sigma: usize,
) -> bool {
    cc.boundary_ref(k)
        .expect("dimension in range")
        .column(tau)
        .any(|(facet, _)| {
            enumerate_gradient_paths(cc, pairing, k - 1, facet, sigma)
                .iter()
                .any(|p| path_weight(cc, p) < 0)
        })
}
