//! Ordered and cyclically ordered partitions of the ground set `{1, …, n+1}`.
//!
//! A [`CyclicCell`] is stored in canonical form: the block holding `n+1`
//! (the *marked* block) comes last. Blocks are bit sets, so element order
//! inside a block is always ascending.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::Rng;
use thiserror::Error;

/// A ground-set element, `1..=n+1`.
pub type Element = u8;

/// Largest supported ground set (`n + 1`), bounded by the block bit width.
pub const MAX_GROUND: usize = 32;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PartitionError {
    #[error("element {0} appears in more than one block")]
    Overlap(Element),
    #[error("element {0} is missing from the partition")]
    Missing(Element),
    #[error("element {element} is outside 1..={max}")]
    OutOfRange { element: usize, max: usize },
    #[error("block {0} is empty")]
    EmptyBlock(usize),
    #[error("ground set of size {0} is not supported (max {MAX_GROUND})")]
    TooLarge(usize),
    #[error("a cell needs at least {needed} blocks, got {got}")]
    TooFewBlocks { needed: usize, got: usize },
    #[error("cells live over different ground sets (n={0} vs n={1})")]
    GroundMismatch(usize, usize),
    #[error("`{0}` is not in canonical form (marked block last, blocks ascending)")]
    NotCanonical(String),
    #[error("cannot parse `{0}` as a cell")]
    Parse(String),
}

/// Bit for element `e` (elements start at 1).
#[inline]
pub fn bit(e: Element) -> u32 {
    1u32 << (e - 1)
}

/// Elements of a block in ascending order.
pub fn elements(mask: u32) -> impl Iterator<Item = Element> + Clone {
    let mut m = mask;
    std::iter::from_fn(move || {
        if m == 0 {
            None
        } else {
            let e = m.trailing_zeros() as Element + 1;
            m &= m - 1;
            Some(e)
        }
    })
}

#[inline]
pub fn block_len(mask: u32) -> usize {
    mask.count_ones() as usize
}

#[inline]
pub fn max_element(mask: u32) -> Element {
    (32 - mask.leading_zeros()) as Element
}

#[inline]
pub fn min_element(mask: u32) -> Element {
    mask.trailing_zeros() as Element + 1
}

/// Lexicographic comparison of two blocks read as ascending element lists.
pub fn cmp_blocks(a: u32, b: u32) -> Ordering {
    elements(a).cmp(elements(b))
}

fn full_mask(n: usize) -> u32 {
    if n + 1 == 32 {
        u32::MAX
    } else {
        (1u32 << (n + 1)) - 1
    }
}

fn check_blocks(n: usize, blocks: &[u32]) -> Result<(), PartitionError> {
    let mut seen = 0u32;
    for (i, &b) in blocks.iter().enumerate() {
        if b == 0 {
            return Err(PartitionError::EmptyBlock(i));
        }
        if b & !full_mask(n) != 0 {
            return Err(PartitionError::OutOfRange {
                element: max_element(b) as usize,
                max: n + 1,
            });
        }
        if seen & b != 0 {
            return Err(PartitionError::Overlap(min_element(seen & b)));
        }
        seen |= b;
    }
    if seen != full_mask(n) {
        return Err(PartitionError::Missing(min_element(full_mask(n) & !seen)));
    }
    Ok(())
}

fn blocks_to_masks(n: usize, blocks: &[Vec<Element>]) -> Result<Vec<u32>, PartitionError> {
    if n + 1 > MAX_GROUND {
        return Err(PartitionError::TooLarge(n + 1));
    }
    let mut masks = Vec::with_capacity(blocks.len());
    for (i, block) in blocks.iter().enumerate() {
        if block.is_empty() {
            return Err(PartitionError::EmptyBlock(i));
        }
        let mut m = 0u32;
        for &e in block {
            if e == 0 || e as usize > n + 1 {
                return Err(PartitionError::OutOfRange {
                    element: e as usize,
                    max: n + 1,
                });
            }
            if m & bit(e) != 0 {
                return Err(PartitionError::Overlap(e));
            }
            m |= bit(e);
        }
        masks.push(m);
    }
    check_blocks(n, &masks)?;
    Ok(masks)
}

/// A linearly ordered partition of `{1, …, n+1}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct OrderedPartition {
    n: u8,
    blocks: Vec<u32>,
}

impl OrderedPartition {
    pub fn new(n: usize, blocks: &[Vec<Element>]) -> Result<Self, PartitionError> {
        let blocks = blocks_to_masks(n, blocks)?;
        Ok(Self { n: n as u8, blocks })
    }

    pub fn from_masks(n: usize, blocks: Vec<u32>) -> Result<Self, PartitionError> {
        if n + 1 > MAX_GROUND {
            return Err(PartitionError::TooLarge(n + 1));
        }
        check_blocks(n, &blocks)?;
        Ok(Self { n: n as u8, blocks })
    }

    pub fn n(&self) -> usize {
        self.n as usize
    }

    pub fn blocks(&self) -> &[u32] {
        &self.blocks
    }

    /// The cyclic rotation whose last block holds `n+1`.
    pub fn normalize_cyclic(&self) -> CyclicCell {
        CyclicCell::rotated(self.n, &self.blocks)
    }
}

/// Rotate a valid partition so that its marked block is last.
pub fn normalize_cyclic(p: &OrderedPartition) -> CyclicCell {
    p.normalize_cyclic()
}

/// One ordered bipartition `(first, second)` of block `block` of a cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Split {
    pub block: usize,
    pub first: u32,
    pub second: u32,
}

/// A facet together with the split that produced it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Facet {
    pub cell: CyclicCell,
    pub split: Split,
    /// The canonical form is a rotation of the in-place split layout
    /// (the marked block was split with `n+1` in the first part).
    pub rotated: bool,
}

/// Class of a cell: the two largest unmarked elements lying in distinct
/// blocks, listed in block order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ClassPair {
    pub i: Element,
    pub j: Element,
}

impl ClassPair {
    pub fn swapped(self) -> Self {
        Self {
            i: self.j,
            j: self.i,
        }
    }

    /// The unordered class `{i, j}` as `(min, max)`.
    pub fn unordered(self) -> (Element, Element) {
        (self.i.min(self.j), self.i.max(self.j))
    }

    pub fn is_ascending(self) -> bool {
        self.i < self.j
    }
}

impl fmt::Display for ClassPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.i, self.j)
    }
}

/// A cyclically ordered partition of `{1, …, n+1}` in canonical form.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CyclicCell {
    n: u8,
    blocks: Vec<u32>,
}

impl CyclicCell {
    fn rotated(n: u8, blocks: &[u32]) -> Self {
        let marked = bit(n + 1);
        let p = blocks
            .iter()
            .position(|b| b & marked != 0)
            .expect("validated partition");
        let mut out = Vec::with_capacity(blocks.len());
        out.extend_from_slice(&blocks[p + 1..]);
        out.extend_from_slice(&blocks[..=p]);
        Self { n, blocks: out }
    }

    /// Build from block masks in any cyclic rotation.
    pub fn from_masks(n: usize, blocks: &[u32]) -> Result<Self, PartitionError> {
        if n + 1 > MAX_GROUND {
            return Err(PartitionError::TooLarge(n + 1));
        }
        check_blocks(n, blocks)?;
        Ok(Self::rotated(n as u8, blocks))
    }

    /// Build from element lists in any cyclic rotation.
    pub fn from_blocks(n: usize, blocks: &[Vec<Element>]) -> Result<Self, PartitionError> {
        let masks = blocks_to_masks(n, blocks)?;
        Ok(Self::rotated(n as u8, &masks))
    }

    /// Parse `1|2,3|4,5|6`. Without `normalize`, only canonical text is
    /// accepted: marked block last, elements ascending inside each block.
    pub fn parse(text: &str, normalize: bool) -> Result<Self, PartitionError> {
        let bad = || PartitionError::Parse(text.to_string());
        let mut lists: Vec<Vec<Element>> = Vec::new();
        for part in text.trim().split('|') {
            let mut block = Vec::new();
            for item in part.split(',') {
                let v: usize = item.trim().parse().map_err(|_| bad())?;
                if v == 0 || v > MAX_GROUND {
                    return Err(PartitionError::OutOfRange {
                        element: v,
                        max: MAX_GROUND,
                    });
                }
                block.push(v as Element);
            }
            lists.push(block);
        }
        let total: usize = lists.iter().map(Vec::len).sum();
        if total == 0 {
            return Err(bad());
        }
        let n = total - 1;
        let masks = blocks_to_masks(n, &lists)?;
        let cell = Self::rotated(n as u8, &masks);
        if !normalize {
            let sorted = lists.iter().all(|b| b.windows(2).all(|w| w[0] < w[1]));
            if !sorted || masks != cell.blocks {
                return Err(PartitionError::NotCanonical(text.to_string()));
            }
        }
        Ok(cell)
    }

    pub fn n(&self) -> usize {
        self.n as usize
    }

    pub fn marked(&self) -> Element {
        self.n + 1
    }

    pub fn num_blocks(&self) -> usize {
        self.blocks.len()
    }

    /// Cell dimension inside the cyclopermutohedron: `n + 1 − #blocks`.
    pub fn dim(&self) -> usize {
        self.n as usize + 1 - self.blocks.len()
    }

    pub fn blocks(&self) -> &[u32] {
        &self.blocks
    }

    pub fn block_elements(&self, i: usize) -> Vec<Element> {
        elements(self.blocks[i]).collect()
    }

    /// The marked block (the one containing `n+1`).
    pub fn marked_block(&self) -> u32 {
        *self.blocks.last().expect("cells are nonempty")
    }

    /// Unmarked blocks in order.
    pub fn unmarked_blocks(&self) -> &[u32] {
        &self.blocks[..self.blocks.len() - 1]
    }

    /// All ordered bipartitions of blocks with at least two elements.
    pub fn splits(&self) -> Vec<Split> {
        let mut out = Vec::new();
        for (p, &b) in self.blocks.iter().enumerate() {
            if block_len(b) < 2 {
                continue;
            }
            let mut sub = (b - 1) & b;
            while sub != 0 {
                out.push(Split {
                    block: p,
                    first: sub,
                    second: b & !sub,
                });
                sub = (sub - 1) & b;
            }
        }
        out
    }

    /// Blocks with one block replaced in place by the two parts of `s`.
    pub fn split_layout(&self, s: &Split) -> Vec<u32> {
        let mut v = Vec::with_capacity(self.blocks.len() + 1);
        v.extend_from_slice(&self.blocks[..s.block]);
        v.push(s.first);
        v.push(s.second);
        v.extend_from_slice(&self.blocks[s.block + 1..]);
        v
    }

    pub fn apply_split(&self, s: &Split) -> Facet {
        let layout = self.split_layout(s);
        let rotated = s.first & bit(self.n + 1) != 0;
        let cell = if rotated {
            Self::rotated(self.n, &layout)
        } else {
            Self {
                n: self.n,
                blocks: layout,
            }
        };
        Facet {
            cell,
            split: *s,
            rotated,
        }
    }

    /// Facets with their splits, in split enumeration order.
    pub fn facets(&self) -> Vec<Facet> {
        self.splits().iter().map(|s| self.apply_split(s)).collect()
    }

    /// Codimension-one faces, sorted canonically.
    pub fn codim1_faces(&self) -> Vec<CyclicCell> {
        let mut v: Vec<_> = self.facets().into_iter().map(|f| f.cell).collect();
        v.sort();
        v.dedup();
        v
    }

    /// Locate the split producing `face`, if `face` is a facet.
    pub fn split_to(&self, face: &CyclicCell) -> Option<Facet> {
        if face.n != self.n || face.blocks.len() != self.blocks.len() + 1 {
            return None;
        }
        self.facets().into_iter().find(|f| &f.cell == face)
    }

    /// Whether `self` is reachable from `coarse` by successive splits.
    pub fn is_refinement_of(&self, coarse: &CyclicCell) -> Result<bool, PartitionError> {
        if self.n != coarse.n {
            return Err(PartitionError::GroundMismatch(self.n(), coarse.n()));
        }
        let k = coarse.blocks.len();
        let mut owner = Vec::with_capacity(self.blocks.len());
        for &b in &self.blocks {
            match coarse.blocks.iter().position(|&c| b & !c == 0) {
                Some(i) => owner.push(i),
                None => return Ok(false),
            }
        }
        if k == 1 {
            return Ok(true);
        }
        let m = owner.len();
        let mut changes = 0;
        for t in 0..m {
            let (a, b) = (owner[t], owner[(t + 1) % m]);
            if a != b {
                if b != (a + 1) % k {
                    return Ok(false);
                }
                changes += 1;
            }
        }
        Ok(changes == k)
    }

    /// Reverse the order of the unmarked blocks.
    pub fn reflect(&self) -> CyclicCell {
        let k = self.blocks.len();
        let mut v: Vec<u32> = self.blocks[..k - 1].iter().rev().copied().collect();
        v.push(self.blocks[k - 1]);
        Self {
            n: self.n,
            blocks: v,
        }
    }

    pub fn class_of(&self) -> Result<ClassPair, PartitionError> {
        let k = self.blocks.len();
        if k < 3 {
            return Err(PartitionError::TooFewBlocks { needed: 3, got: k });
        }
        let unmarked = &self.blocks[..k - 1];
        let (l, j) = unmarked
            .iter()
            .enumerate()
            .map(|(idx, &b)| (idx, max_element(b)))
            .max_by_key(|&(_, e)| e)
            .expect("at least two unmarked blocks");
        let (m, i) = unmarked
            .iter()
            .enumerate()
            .filter(|&(idx, _)| idx != l)
            .map(|(idx, &b)| (idx, max_element(b)))
            .max_by_key(|&(_, e)| e)
            .expect("at least two unmarked blocks");
        Ok(if m <= l {
            ClassPair { i, j }
        } else {
            ClassPair { i: j, j: i }
        })
    }

    pub fn is_ascending(&self) -> Result<bool, PartitionError> {
        Ok(self.class_of()?.is_ascending())
    }

    /// Apply the relabelling `e ↦ w[e-1]` and renormalize.
    pub fn relabel(&self, w: &[Element]) -> CyclicCell {
        let blocks: Vec<u32> = self
            .blocks
            .iter()
            .map(|&b| elements(b).fold(0, |acc, e| acc | bit(w[e as usize - 1])))
            .collect();
        Self::rotated(self.n, &blocks)
    }

    /// The all-singleton refinement listing each block in ascending order.
    pub fn principal_sequence(&self) -> Vec<Element> {
        self.blocks.iter().flat_map(|&b| elements(b)).collect()
    }
}

impl Ord for CyclicCell {
    fn cmp(&self, other: &Self) -> Ordering {
        self.n.cmp(&other.n).then_with(|| {
            for (&a, &b) in self.blocks.iter().zip(&other.blocks) {
                match cmp_blocks(a, b) {
                    Ordering::Equal => continue,
                    o => return o,
                }
            }
            self.blocks.len().cmp(&other.blocks.len())
        })
    }
}

impl PartialOrd for CyclicCell {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for CyclicCell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, &b) in self.blocks.iter().enumerate() {
            if i > 0 {
                f.write_str("|")?;
            }
            for (t, e) in elements(b).enumerate() {
                if t > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{e}")?;
            }
        }
        Ok(())
    }
}

impl FromStr for CyclicCell {
    type Err = PartitionError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::parse(s, false)
    }
}

/// Visit every canonical cyclic partition of `{1, …, n+1}` with at least
/// `min_blocks` blocks, all of which satisfy `admissible`. `admissible`
/// must be closed under taking nonempty subsets.
pub fn for_each_cyclic_partition<F, G>(n: usize, min_blocks: usize, admissible: F, mut visit: G)
where
    F: Fn(u32) -> bool,
    G: FnMut(CyclicCell),
{
    let total = n + 1;
    let mut blocks: Vec<u32> = Vec::new();
    set_partitions(
        1,
        total as u8,
        &mut blocks,
        &admissible,
        &mut |parts: &[u32]| {
            if parts.len() < min_blocks {
                return;
            }
            let marked = bit(total as u8);
            let mut rest: Vec<u32> = parts.iter().copied().filter(|b| b & marked == 0).collect();
            let last = parts
                .iter()
                .copied()
                .find(|b| b & marked != 0)
                .expect("marked block");
            permutations(&mut rest, 0, &mut |perm| {
                let mut v = perm.to_vec();
                v.push(last);
                visit(CyclicCell {
                    n: n as u8,
                    blocks: v,
                });
            });
        },
    );
}

fn set_partitions<F>(e: u8, total: u8, blocks: &mut Vec<u32>, ok: &F, out: &mut dyn FnMut(&[u32]))
where
    F: Fn(u32) -> bool,
{
    if e > total {
        out(blocks);
        return;
    }
    for i in 0..blocks.len() {
        let grown = blocks[i] | bit(e);
        if ok(grown) {
            let old = blocks[i];
            blocks[i] = grown;
            set_partitions(e + 1, total, blocks, ok, out);
            blocks[i] = old;
        }
    }
    if ok(bit(e)) {
        blocks.push(bit(e));
        set_partitions(e + 1, total, blocks, ok, out);
        blocks.pop();
    }
}

fn permutations(v: &mut Vec<u32>, k: usize, out: &mut dyn FnMut(&[u32])) {
    if k == v.len() {
        out(v);
        return;
    }
    for i in k..v.len() {
        v.swap(k, i);
        permutations(v, k + 1, out);
        v.swap(k, i);
    }
}

/// All cells of the cyclopermutohedron on `{1, …, n+1}`, grouped by
/// dimension and sorted canonically.
pub fn cyclopermutohedron_cells(n: usize) -> Vec<Vec<CyclicCell>> {
    let top = n.saturating_sub(2);
    let mut by_dim: Vec<Vec<CyclicCell>> = vec![Vec::new(); top + 1];
    for_each_cyclic_partition(n, 3, |_| true, |c| by_dim[c.dim()].push(c));
    for cells in &mut by_dim {
        cells.sort();
    }
    by_dim
}

/// A uniformly random ordering of `{1, …, n+1}` cut into `blocks` arcs,
/// returned in canonical form.
pub fn random_cell<R: Rng + ?Sized>(n: usize, blocks: usize, rng: &mut R) -> CyclicCell {
    assert!(blocks >= 1 && blocks <= n + 1, "block count out of range");
    let mut seq: Vec<Element> = (1..=(n + 1) as Element).collect();
    seq.shuffle(rng);
    let mut cuts: Vec<usize> = (1..=n).collect();
    cuts.shuffle(rng);
    let mut cuts: Vec<usize> = cuts[..blocks - 1].to_vec();
    cuts.sort_unstable();
    cuts.push(n + 1);
    let mut masks = Vec::with_capacity(blocks);
    let mut start = 0;
    for c in cuts {
        masks.push(seq[start..c].iter().fold(0, |m, &e| m | bit(e)));
        start = c;
    }
    CyclicCell::rotated(n as u8, &masks)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cell(s: &str) -> CyclicCell {
        CyclicCell::parse(s, true).unwrap()
    }

    #[test]
    fn normalizes_by_rotation() {
        let p = OrderedPartition::new(5, &[vec![4, 6], vec![1], vec![2, 3, 5]]).unwrap();
        assert_eq!(p.normalize_cyclic().to_string(), "1|2,3,5|4,6");
        let p = OrderedPartition::new(5, &[vec![2, 3, 5], vec![4, 6], vec![1]]).unwrap();
        assert_eq!(normalize_cyclic(&p).to_string(), "1|2,3,5|4,6");
        let p = OrderedPartition::new(3, &[vec![1], vec![2], vec![3], vec![4]]).unwrap();
        assert_eq!(p.normalize_cyclic().to_string(), "1|2|3|4");
    }

    #[test]
    fn rejects_malformed_partitions() {
        assert_eq!(
            OrderedPartition::new(3, &[vec![1, 2], vec![2, 3, 4]]),
            Err(PartitionError::Overlap(2))
        );
        assert_eq!(
            OrderedPartition::new(3, &[vec![1], vec![2, 4]]),
            Err(PartitionError::Missing(3))
        );
        assert_eq!(
            OrderedPartition::new(3, &[vec![1, 2], vec![], vec![3, 4]]),
            Err(PartitionError::EmptyBlock(1))
        );
        assert!(matches!(
            OrderedPartition::new(3, &[vec![1, 2, 3], vec![5]]),
            Err(PartitionError::OutOfRange { element: 5, .. })
        ));
    }

    #[test]
    fn parser_is_strict_unless_normalizing() {
        assert!("1|2,3|4,5|6".parse::<CyclicCell>().is_ok());
        assert!(matches!(
            "4,6|1|2,3,5".parse::<CyclicCell>(),
            Err(PartitionError::NotCanonical(_))
        ));
        assert!(matches!(
            "1|3,2|4".parse::<CyclicCell>(),
            Err(PartitionError::NotCanonical(_))
        ));
        assert_eq!(
            CyclicCell::parse("4,6|1|2,3,5", true).unwrap().to_string(),
            "1|2,3,5|4,6"
        );
        assert!(matches!(
            "1|x|3".parse::<CyclicCell>(),
            Err(PartitionError::Parse(_))
        ));
        assert!("1|2|2,3".parse::<CyclicCell>().is_err());
    }

    #[test]
    fn facets_of_small_cells() {
        let faces: Vec<String> = cell("1|2,3|4,5|6")
            .codim1_faces()
            .iter()
            .map(|c| c.to_string())
            .collect();
        assert_eq!(
            faces,
            ["1|2|3|4,5|6", "1|2,3|4|5|6", "1|2,3|5|4|6", "1|3|2|4,5|6"]
        );
        assert!(cell("1|2|3|4").codim1_faces().is_empty());
        let faces = cell("1,2|3|4,5").codim1_faces();
        assert_eq!(faces.len(), 4);
        assert!(faces.contains(&cell("1,2|3|4|5")));
        assert!(faces.contains(&cell("5|1,2|3|4")));
    }

    #[test]
    fn facet_count_formula() {
        let c = cell("1,2,3|4|5,6,7,8|9");
        let expected: usize = c
            .blocks()
            .iter()
            .map(|&b| (1usize << block_len(b)) - 2)
            .filter(|&x| x > 0)
            .sum();
        assert_eq!(c.codim1_faces().len(), expected);
        assert!(c.codim1_faces().iter().all(|f| f.dim() + 1 == c.dim()));
    }

    #[test]
    fn refinement_examples() {
        let coarse = cell("1|2,3|4,5|6");
        assert!(cell("1|2|3|4,5|6").is_refinement_of(&coarse).unwrap());
        assert!(!cell("2|1|3|4,5|6").is_refinement_of(&coarse).unwrap());
        assert!(coarse.is_refinement_of(&coarse).unwrap());
        assert!(cell("1|2|3|4").is_refinement_of(&coarse).is_err());
    }

    #[test]
    fn reflection_examples() {
        assert_eq!(
            cell("1,2,3|4,5|6,7,8,9").reflect(),
            cell("4,5|1,2,3|6,7,8,9")
        );
        assert_eq!(cell("1|2|3|4").reflect(), cell("3|2|1|4"));
        assert_eq!(cell("2|1|3|4").reflect(), cell("3|1|2|4"));
    }

    #[test]
    fn class_examples() {
        assert_eq!(
            cell("1|2,3|4,5|6").class_of().unwrap(),
            ClassPair { i: 3, j: 5 }
        );
        assert_eq!(
            cell("4,5|2,3|1|6").class_of().unwrap(),
            ClassPair { i: 5, j: 3 }
        );
        assert!(cell("1|2,3|4,5|6").is_ascending().unwrap());
        assert!(!cell("4,5|2,3|1|6").is_ascending().unwrap());
        assert!(cell("1,2|3,4").class_of().is_err());
    }

    #[test]
    fn half_the_cells_are_ascending() {
        let cells = cyclopermutohedron_cells(4);
        let all: Vec<_> = cells.iter().flatten().collect();
        let asc = all.iter().filter(|c| c.is_ascending().unwrap()).count();
        assert_eq!(asc * 2, all.len());
    }

    #[test]
    fn enumeration_counts() {
        let counts: Vec<usize> = cyclopermutohedron_cells(3).iter().map(Vec::len).collect();
        assert_eq!(counts, [6, 12]);
        let counts: Vec<usize> = cyclopermutohedron_cells(5).iter().map(Vec::len).collect();
        assert_eq!(counts, [120, 360, 390, 180]);
    }

    #[test]
    fn canonical_order_matches_text_for_small_cells() {
        let cells = cyclopermutohedron_cells(4);
        for dim in cells {
            assert!(dim.windows(2).all(|w| w[0] < w[1]));
        }
    }
}
