//! Moduli spaces of planar polygons with prescribed side lengths.
//!
//! A `k`-cell is a cyclically ordered partition of the sides into `k + 3`
//! short blocks. Its facets merge two cyclically adjacent blocks whose
//! union is still short.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::complex::{ChainComplex, ComplexError, FacePoset};
use crate::partitions::{
    bit, elements, for_each_cyclic_partition, CyclicCell, Element, MAX_GROUND,
};
use crate::ResourceGuard;

/// Subset scans beyond this many sides switch to meet-in-the-middle.
const BRUTE_FORCE_LIMIT: usize = 20;
const MAX_SIDES_GENERIC: usize = 48;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinkageError {
    #[error("cannot parse length {0:?}")]
    Parse(String),
    #[error("length {0} is not positive")]
    NonPositive(String),
    #[error("need at least 3 sides, got {0}")]
    TooFewSides(usize),
    #[error("{got} sides exceed the limit of {max}")]
    TooManySides { got: usize, max: usize },
    #[error("length vector is not generic: sides {witness:?} sum to half the perimeter")]
    NotGeneric { witness: Vec<usize> },
    #[error("n = {n} exceeds the resource limit {max}")]
    Guard { n: usize, max: usize },
    #[error("cell {0} is fixed by the reflection")]
    FixedCell(String),
    #[error("cell {cell} has two facets in the orbit of {facet}")]
    NotRegular { cell: String, facet: String },
    #[error(transparent)]
    Complex(#[from] ComplexError),
}

/// Positive side lengths `l_0, …, l_n`. Side `l_i` is ground element `i + 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LengthVector(Vec<BigRational>);

impl LengthVector {
    pub fn new(lengths: Vec<BigRational>) -> Result<Self, LinkageError> {
        if lengths.len() < 3 {
            return Err(LinkageError::TooFewSides(lengths.len()));
        }
        if let Some(l) = lengths.iter().find(|l| !l.is_positive()) {
            return Err(LinkageError::NonPositive(l.to_string()));
        }
        Ok(Self(lengths))
    }

    pub fn from_integers(lengths: &[i64]) -> Result<Self, LinkageError> {
        Self::new(
            lengths
                .iter()
                .map(|&l| BigRational::from_integer(l.into()))
                .collect(),
        )
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn lengths(&self) -> &[BigRational] {
        &self.0
    }

    pub fn perimeter(&self) -> BigRational {
        self.0.iter().sum()
    }

    /// Sum of the sides in a set of ground elements (`1`-based).
    fn subset_sum(&self, set: u32) -> BigRational {
        elements(set).map(|e| &self.0[e as usize - 1]).sum()
    }

    /// Whether the sides in `set` (ground elements, `1`-based) sum to less
    /// than the remaining sides.
    pub fn is_short(&self, set: u32) -> bool {
        let s = self.subset_sum(set);
        &s + &s < self.perimeter()
    }

    /// A set of sides (`0`-based) summing to exactly half the perimeter.
    pub fn tight_subset(&self) -> Result<Option<Vec<usize>>, LinkageError> {
        let m = self.0.len();
        if m > MAX_SIDES_GENERIC {
            return Err(LinkageError::TooManySides {
                got: m,
                max: MAX_SIDES_GENERIC,
            });
        }
        let half = self.perimeter() / BigRational::from_integer(BigInt::from(2));
        if m <= BRUTE_FORCE_LIMIT {
            let sums = subset_sums(&self.0);
            return Ok(sums
                .iter()
                .position(|s| *s == half)
                .map(|mask| bits_of(mask as u64, 0)));
        }
        let (left, right) = self.0.split_at(m / 2);
        let mut rs: Vec<(BigRational, usize)> = subset_sums(right)
            .into_iter()
            .enumerate()
            .map(|(i, s)| (s, i))
            .collect();
        rs.sort();
        for (lmask, ls) in subset_sums(left).iter().enumerate() {
            let want = &half - ls;
            if want.is_negative() {
                continue;
            }
            if let Ok(pos) = rs.binary_search_by(|(s, _)| s.cmp(&want)) {
                let mut w = bits_of(lmask as u64, 0);
                w.extend(bits_of(rs[pos].1 as u64, left.len()));
                return Ok(Some(w));
            }
        }
        Ok(None)
    }

    /// No subset sums to half the perimeter.
    pub fn is_generic(&self) -> Result<bool, LinkageError> {
        Ok(self.tight_subset()?.is_none())
    }

    fn require_generic(&self) -> Result<(), LinkageError> {
        match self.tight_subset()? {
            Some(witness) => Err(LinkageError::NotGeneric { witness }),
            None => Ok(()),
        }
    }
}

fn subset_sums(xs: &[BigRational]) -> Vec<BigRational> {
    let mut sums = vec![BigRational::zero()];
    for x in xs {
        let more: Vec<BigRational> = sums.iter().map(|s| s + x).collect();
        sums.extend(more);
    }
    sums
}

fn bits_of(mask: u64, offset: usize) -> Vec<usize> {
    (0..64)
        .filter(|b| mask >> b & 1 == 1)
        .map(|b| b + offset)
        .collect()
}

/// Parse one length: an integer, a fraction `p/q` or a decimal.
pub fn parse_length(text: &str) -> Result<BigRational, LinkageError> {
    let t = text.trim();
    let err = || LinkageError::Parse(text.to_string());
    if let Some((int, frac)) = t.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(err());
        }
        let digits: BigInt = format!("{int}{frac}").parse().map_err(|_| err())?;
        let scale = BigInt::from(10).pow(frac.len() as u32);
        return Ok(BigRational::new(digits, scale));
    }
    BigRational::from_str(t).map_err(|_| err())
}

impl FromStr for LengthVector {
    type Err = LinkageError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::new(s.split(',').map(parse_length).collect::<Result<_, _>>()?)
    }
}

impl fmt::Display for LengthVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(ToString::to_string).collect();
        f.write_str(&parts.join(","))
    }
}

/// Merges of two cyclically adjacent blocks whose union is short, keeping
/// at least three blocks.
pub fn linkage_facets(c: &CyclicCell, ell: &LengthVector) -> Vec<CyclicCell> {
    let b = c.blocks();
    let k = b.len();
    if k <= 3 {
        return Vec::new();
    }
    (0..k)
        .filter(|&p| ell.is_short(b[p] | b[(p + 1) % k]))
        .map(|p| {
            let q = (p + 1) % k;
            let merged: Vec<u32> = (0..k)
                .filter(|&r| r != q)
                .map(|r| if r == p { b[p] | b[q] } else { b[r] })
                .collect();
            CyclicCell::from_masks(c.n(), &merged).expect("merging keeps a partition")
        })
        .collect()
}

fn check_size(ell: &LengthVector, guard: &ResourceGuard) -> Result<usize, LinkageError> {
    let n = ell.len() - 1;
    if ell.len() > MAX_GROUND {
        return Err(LinkageError::TooManySides {
            got: ell.len(),
            max: MAX_GROUND,
        });
    }
    if !guard.allows(n) {
        return Err(LinkageError::Guard {
            n,
            max: guard.max_n,
        });
    }
    ell.require_generic()?;
    Ok(n)
}

/// Cells of the moduli complex by dimension, sorted.
pub fn linkage_cells(ell: &LengthVector, n: usize) -> Vec<Vec<CyclicCell>> {
    let mut by_dim: Vec<Vec<CyclicCell>> = vec![Vec::new(); n.saturating_sub(1)];
    for_each_cyclic_partition(
        n,
        3,
        |b| ell.is_short(b),
        |c| {
            let d = c.num_blocks() - 3;
            by_dim[d].push(c);
        },
    );
    for v in &mut by_dim {
        v.sort();
    }
    while by_dim.len() > 1 && by_dim.last().is_some_and(Vec::is_empty) {
        by_dim.pop();
    }
    by_dim
}

/// The cell structure on the moduli space of polygons with sides `ell`.
pub fn build_moduli_complex(
    ell: &LengthVector,
    guard: &ResourceGuard,
) -> Result<ChainComplex<CyclicCell>, LinkageError> {
    let n = check_size(ell, guard)?;
    let cells = linkage_cells(ell, n);
    let poset = FacePoset::from_facet_fn(cells, |c| linkage_facets(c, ell));
    Ok(poset.solve_incidence_signs()?)
}

/// Reverse the cyclic order; representatives are the smaller of the two.
fn orbit_rep(c: &CyclicCell) -> CyclicCell {
    let r = c.reflect();
    if r < *c {
        r
    } else {
        c.clone()
    }
}

/// The moduli space modulo the reflection of the plane.
pub fn build_reduced_moduli(
    ell: &LengthVector,
    guard: &ResourceGuard,
) -> Result<ChainComplex<CyclicCell>, LinkageError> {
    let n = check_size(ell, guard)?;
    let full = linkage_cells(ell, n);
    let mut cells = Vec::with_capacity(full.len());
    for layer in &full {
        let mut reps = Vec::new();
        for c in layer {
            if c.reflect() == *c {
                return Err(LinkageError::FixedCell(c.to_string()));
            }
            if orbit_rep(c) == *c {
                reps.push(c.clone());
            }
        }
        cells.push(reps);
    }
    for layer in &cells {
        for c in layer {
            let mut fs: Vec<CyclicCell> = linkage_facets(c, ell).iter().map(orbit_rep).collect();
            fs.sort();
            if let Some(w) = fs.windows(2).find(|w| w[0] == w[1]) {
                return Err(LinkageError::NotRegular {
                    cell: c.to_string(),
                    facet: w[0].to_string(),
                });
            }
        }
    }
    let poset = FacePoset::from_facet_fn(cells, |c| {
        linkage_facets(c, ell).iter().map(orbit_rep).collect()
    });
    Ok(poset.solve_incidence_signs()?)
}

/// Ground elements whose single side is short.
pub fn short_singletons(ell: &LengthVector) -> Vec<Element> {
    (1..=ell.len() as Element)
        .filter(|&e| ell.is_short(bit(e)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::homology::homology_z;

    fn ell(s: &str) -> LengthVector {
        s.parse().unwrap()
    }

    #[test]
    fn parsing() {
        let l = ell("1, 3/2,0.25");
        assert_eq!(l.to_string(), "1,3/2,1/4");
        assert!(matches!(
            "1,0,1".parse::<LengthVector>(),
            Err(LinkageError::NonPositive(_))
        ));
        assert!(matches!(
            "1,x,1".parse::<LengthVector>(),
            Err(LinkageError::Parse(_))
        ));
        assert!(matches!(
            "1,1".parse::<LengthVector>(),
            Err(LinkageError::TooFewSides(2))
        ));
    }

    #[test]
    fn shortness() {
        let l = ell("1,1,1,1,1");
        assert!(l.is_short(bit(1) | bit(2)));
        assert!(!l.is_short(bit(1) | bit(2) | bit(3)));
        assert!(l.is_short(0));
    }

    #[test]
    fn genericity() {
        assert!(ell("1,1,1,1,1").is_generic().unwrap());
        assert_eq!(
            ell("1,1,1,1").tight_subset().unwrap().map(|w| w.len()),
            Some(2)
        );
        assert!(ell("1,1,1,1,11/10").is_generic().unwrap());
        let mut many = vec!["1"; 22];
        many.push("2");
        let l = ell(&many.join(","));
        let w = l.tight_subset().unwrap().unwrap();
        let s: BigRational = w.iter().map(|&i| l.lengths()[i].clone()).sum();
        assert_eq!(s * BigRational::from_integer(2.into()), l.perimeter());
        assert!(!ell(&vec!["1"; 22].join(",")).is_generic().unwrap());
        assert!(ell(&vec!["1"; 23].join(",")).is_generic().unwrap());
    }

    #[test]
    fn pentagon() {
        let g = ResourceGuard::default();
        let cc = build_moduli_complex(&ell("1,1,1,1,1"), &g).unwrap();
        assert_eq!(cc.cell_counts(), [30, 60, 24]);
        cc.verify_boundary_squared().unwrap();
        let h = homology_z(&cc).unwrap();
        assert_eq!(h.betti, [1, 8, 1]);
        assert!(h.is_torsion_free());
        let red = build_reduced_moduli(&ell("1,1,1,1,1"), &g).unwrap();
        assert_eq!(red.cell_counts(), [15, 30, 12]);
        let h = homology_z(&red).unwrap();
        assert_eq!(h.to_string(), "(Z; Z^4 + Z2; 0)");
        assert_eq!(h.betti_mod2, [1, 5, 1]);
    }

    #[test]
    fn non_generic_refused() {
        let err = build_moduli_complex(&ell("1,1,1,1"), &ResourceGuard::default()).unwrap_err();
        assert!(matches!(err, LinkageError::NotGeneric { .. }));
    }

    #[test]
    fn long_side() {
        let cc = build_moduli_complex(&ell("3,1,1,1,1"), &ResourceGuard::default()).unwrap();
        let h = homology_z(&cc).unwrap();
        assert_eq!(h.betti[0], 1);
        assert_eq!(*h.betti.last().unwrap(), 1);
        assert_eq!(short_singletons(&ell("5,1,1,1,1")), [2, 3, 4, 5]);
    }
}
