use std::collections::{BTreeSet, VecDeque};

use cyclo_core::bicyclopermutohedron::{ascending_representative, higher, reflection_sign, sgn};
use cyclo_core::partitions::{cyclopermutohedron_cells, random_cell, CyclicCell, Element};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// A random cell of the cyclopermutohedron on `{1, …, n+1}`.
fn cell_strategy(max_n: usize) -> impl Strategy<Value = CyclicCell> {
    (3..=max_n, any::<u64>()).prop_flat_map(|(n, seed)| {
        (3..=n + 1)
            .prop_map(move |blocks| random_cell(n, blocks, &mut ChaCha8Rng::seed_from_u64(seed)))
    })
}

fn shuffled(n: usize, seed: u64) -> Vec<Element> {
    let mut w: Vec<Element> = (1..=(n + 1) as Element).collect();
    w.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    w
}

fn closure(c: &CyclicCell) -> BTreeSet<CyclicCell> {
    let mut seen = BTreeSet::from([c.clone()]);
    let mut queue = VecDeque::from([c.clone()]);
    while let Some(x) = queue.pop_front() {
        for f in x.codim1_faces() {
            if seen.insert(f.clone()) {
                queue.push_back(f);
            }
        }
    }
    seen
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn reflect_is_an_involution(c in cell_strategy(9)) {
        prop_assert_eq!(c.reflect().reflect(), c);
    }

    #[test]
    fn normalize_is_idempotent(c in cell_strategy(9), rot in 0usize..10) {
        let blocks: Vec<String> = (0..c.num_blocks())
            .map(|i| {
                let mut e = c.block_elements(i);
                e.reverse();
                e.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
            })
            .collect();
        let k = rot % blocks.len();
        let text = [&blocks[k..], &blocks[..k]].concat().join("|");
        let parsed = CyclicCell::parse(&text, true).unwrap();
        prop_assert_eq!(&parsed, &c);
        prop_assert_eq!(CyclicCell::parse(&parsed.to_string(), false).unwrap(), parsed);
    }

    #[test]
    fn reflection_swaps_the_class(c in cell_strategy(9)) {
        let cl = c.class_of().unwrap();
        prop_assert_eq!(c.reflect().class_of().unwrap(), cl.swapped());
        prop_assert!(c.is_ascending().unwrap() != c.reflect().is_ascending().unwrap());
        let rep = ascending_representative(&c).unwrap();
        prop_assert!(rep.rep().is_ascending().unwrap());
        prop_assert_eq!(ascending_representative(rep.rep()).unwrap(), rep.clone());
        prop_assert!(higher(&rep, &rep));
    }

    #[test]
    fn relabel_commutes_with_facets(c in cell_strategy(8), seed in any::<u64>()) {
        let w = shuffled(c.n(), seed);
        let mut mapped: Vec<CyclicCell> = c.codim1_faces().iter().map(|f| f.relabel(&w)).collect();
        mapped.sort();
        prop_assert_eq!(c.relabel(&w).codim1_faces(), mapped);
    }

    #[test]
    fn facets_drop_one_dimension(c in cell_strategy(9)) {
        for f in c.facets() {
            prop_assert_eq!(f.cell.dim() + 1, c.dim());
            prop_assert!(f.cell.is_refinement_of(&c).unwrap());
        }
    }

    #[test]
    fn reflection_sign_is_a_sign(c in cell_strategy(12)) {
        let e = reflection_sign(&c);
        prop_assert!(e == 1 || e == -1);
        prop_assert_eq!(reflection_sign(&c.reflect()), e);
    }

    #[test]
    fn sgn_has_period_four(s in 0i64..1000) {
        prop_assert_eq!(sgn(s + 4).unwrap(), sgn(s).unwrap());
    }
}

#[test]
fn refinement_matches_face_closure() {
    let cells: Vec<CyclicCell> = cyclopermutohedron_cells(4).into_iter().flatten().collect();
    for c in &cells {
        let faces = closure(c);
        for f in &cells {
            assert_eq!(
                f.is_refinement_of(c).unwrap(),
                faces.contains(f),
                "{f} in {c}"
            );
        }
    }
}
