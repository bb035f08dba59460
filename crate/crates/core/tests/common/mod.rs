//! Seeded random corpora shared by the integration tests and the
//! acceptance suite.
#![allow(dead_code)]

use omegacoalg::indexed::{IndexedCoalgebra, IndexedContainer};
use omegacoalg::{Container, FiniteCoalgebra};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const MAX_STATES: usize = 6;
pub const MAX_LABELS: usize = 4;
pub const MAX_ARITY: usize = 3;
pub const MAX_SORTS: usize = 3;
pub const MAX_SORT_LABELS: usize = 3;
pub const MAX_SORT_ARITY: usize = 2;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A finite coalgebra with at most 6 states and 4 labels of arity at most 3.
pub fn random_coalgebra(rng: &mut impl Rng) -> FiniteCoalgebra<u8> {
    let labels = rng.gen_range(1..=MAX_LABELS);
    let arities: Vec<usize> = (0..labels).map(|_| rng.gen_range(0..=MAX_ARITY)).collect();
    let container = Container::finite(arities.iter().enumerate().map(|(l, &n)| (l as u8, n))).unwrap();
    let states = rng.gen_range(1..=MAX_STATES);
    let transitions = (0..states)
        .map(|_| {
            let l = rng.gen_range(0..labels);
            (l as u8, (0..arities[l]).map(|_| rng.gen_range(0..states)).collect())
        })
        .collect();
    FiniteCoalgebra::new(container, transitions).unwrap()
}

pub fn corpus(seed: u64, count: usize) -> Vec<FiniteCoalgebra<u8>> {
    let mut r = rng(seed);
    (0..count).map(|_| random_coalgebra(&mut r)).collect()
}

/// A stream coalgebra: every state has one successor.
pub fn random_stream_coalgebra(rng: &mut impl Rng) -> FiniteCoalgebra<u8> {
    let states = rng.gen_range(1..=MAX_STATES);
    let transitions = (0..states)
        .map(|_| (rng.gen_range(0..MAX_LABELS as u8), vec![rng.gen_range(0..states)]))
        .collect();
    FiniteCoalgebra::new(Container::uniform(1), transitions).unwrap()
}

/// An indexed coalgebra over at most 3 sorts, 3 labels per sort, arity 2
/// and 6 states. Every sort has at least one
/// label and one state, so any choice of child sorts can be closed.
pub fn random_indexed(rng: &mut impl Rng) -> IndexedCoalgebra<u8, u8> {
    let sorts = rng.gen_range(1..=MAX_SORTS);
    let mut entries = Vec::new();
    let mut by_sort: Vec<Vec<(u8, Vec<u8>)>> = Vec::new();
    for i in 0..sorts {
        let labels = rng.gen_range(1..=MAX_SORT_LABELS);
        let mut here = Vec::new();
        for l in 0..labels {
            let arity = rng.gen_range(0..=MAX_SORT_ARITY);
            let child_sorts: Vec<u8> = (0..arity).map(|_| rng.gen_range(0..sorts) as u8).collect();
            entries.push((i as u8, l as u8, child_sorts.clone()));
            here.push((l as u8, child_sorts));
        }
        by_sort.push(here);
    }
    let container = IndexedContainer::new((0..sorts as u8).collect(), entries).unwrap();
    let per_sort: Vec<usize> = (0..sorts).map(|_| rng.gen_range(1..=MAX_STATES / sorts)).collect();
    let name = |i: usize, k: usize| format!("s{i}_{k}");
    let mut states = Vec::new();
    for (i, &count) in per_sort.iter().enumerate() {
        for k in 0..count {
            let (label, child_sorts) = &by_sort[i][rng.gen_range(0..by_sort[i].len())];
            let children = child_sorts
                .iter()
                .map(|&j| name(j as usize, rng.gen_range(0..per_sort[j as usize])))
                .collect();
            states.push((name(i, k), i as u8, *label, children));
        }
    }
    IndexedCoalgebra::new(container, states).unwrap()
}

pub fn indexed_corpus(seed: u64, count: usize) -> Vec<IndexedCoalgebra<u8, u8>> {
    let mut r = rng(seed);
    (0..count).map(|_| random_indexed(&mut r)).collect()
}
