//! Bisimulations on a single coalgebra, the coinduction principle at finite
//! depth, and a partition-refinement decision procedure.
//!
//! Bisimulations between two coalgebras are handled by first forming their
//! disjoint union.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;

use crate::container::Label;
use crate::error::{Error, Result};
use crate::mtype::{unroll, Coalgebra, FiniteCoalgebra, Memo};

/// A relation on states together with, for each related pair, a transition
/// of the relation: a shared label and one related pair per position.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BisimWitness<S, L> {
    relation: BTreeSet<(S, S)>,
    alpha: BTreeMap<(S, S), (L, Vec<(S, S)>)>,
}

impl<S: Clone + Ord, L: Label> BisimWitness<S, L> {
    pub fn new(relation: BTreeSet<(S, S)>, alpha: BTreeMap<(S, S), (L, Vec<(S, S)>)>) -> Self {
        Self { relation, alpha }
    }

    /// The witness whose structure map is determined by `γ`: each pair
    /// `(s, t)` steps to the label of `s` and the pairs of corresponding
    /// children. It verifies exactly when `pairs` is a bisimulation.
    pub fn forced<C>(c: &C, pairs: impl IntoIterator<Item = (S, S)>) -> Result<Self>
    where
        C: Coalgebra<State = S, Label = L>,
    {
        let relation: BTreeSet<(S, S)> = pairs.into_iter().collect();
        let mut alpha = BTreeMap::new();
        for (s, t) in &relation {
            let gs = c.transition(s)?;
            let gt = c.transition(t)?;
            let children = gs
                .children()
                .iter()
                .cloned()
                .zip(gt.children().iter().cloned())
                .collect();
            alpha.insert((s.clone(), t.clone()), (gs.label().clone(), children));
        }
        Ok(Self { relation, alpha })
    }

    pub fn relation(&self) -> &BTreeSet<(S, S)> {
        &self.relation
    }

    pub fn contains(&self, s: &S, t: &S) -> bool {
        self.relation.contains(&(s.clone(), t.clone()))
    }

    pub fn step(&self, s: &S, t: &S) -> Option<&(L, Vec<(S, S)>)> {
        self.alpha.get(&(s.clone(), t.clone()))
    }
}

/// The identity relation, which is always a bisimulation.
pub fn diagonal_bisim<C: Coalgebra>(c: &C) -> Result<BisimWitness<C::State, C::Label>> {
    let states = c.states().ok_or(Error::NeedsFiniteStates)?;
    BisimWitness::forced(c, states.into_iter().map(|s| (s.clone(), s)))
}

/// Checks every clause of the witness: both sides step to the witness's
/// label, there is one pair per position, each pair is the pair of actual
/// children, and each pair is again related.
pub fn verify_bisim<C: Coalgebra>(c: &C, w: &BisimWitness<C::State, C::Label>) -> Result<()> {
    let invalid = |reason: String| Err(Error::InvalidWitness { reason });
    for (s, t) in &w.relation {
        let pair = || alloc::format!("({}, {})", c.describe(s), c.describe(t));
        let Some((label, steps)) = w.alpha.get(&(s.clone(), t.clone())) else {
            return invalid(alloc::format!("no structure for pair {}", pair()));
        };
        let gs = c.transition(s)?;
        let gt = c.transition(t)?;
        if gs.label() != label || gt.label() != label {
            return invalid(alloc::format!(
                "pair {} has labels {:?}/{:?}, witness says {:?}",
                pair(),
                gs.label(),
                gt.label(),
                label
            ));
        }
        let arity = c.container().arity_of(label)?;
        if steps.len() != arity || gs.arity() != arity || gt.arity() != arity {
            return invalid(alloc::format!("pair {} has the wrong number of positions", pair()));
        }
        for (b, (x, y)) in steps.iter().enumerate() {
            if &gs.children()[b] != x || &gt.children()[b] != y {
                return invalid(alloc::format!(
                    "position {b} of pair {} is not the pair of children",
                    pair()
                ));
            }
            if !w.relation.contains(&(x.clone(), y.clone())) {
                return invalid(alloc::format!(
                    "position {b} of pair {} leaves the relation at ({}, {})",
                    pair(),
                    c.describe(x),
                    c.describe(y)
                ));
            }
        }
    }
    Ok(())
}

/// Smallest depth `n ≤ max` at which the approximations of `s` and `t`
/// differ. Once they differ they differ at every greater depth.
pub fn distinguishing_depth<C: Coalgebra>(c: &C, s: &C::State, t: &C::State, max: usize) -> Result<Option<usize>> {
    let mut memo: Memo<C::State, C::Label> = Memo::new();
    for n in 0..=max {
        let step = |x: &C::State| {
            let (label, children) = c.transition(x)?.into_parts();
            c.container().check_arity(&label, children.len())?;
            Ok((label, children))
        };
        let a = unroll(s, n, &mut memo, step)?;
        let b = unroll(t, n, &mut memo, step)?;
        if !a.tree_equal(&b) {
            return Ok(Some(n));
        }
    }
    Ok(None)
}

/// Equal approximations at every depth `≤ depth`.
pub fn bounded_bisim<C: Coalgebra>(c: &C, s: &C::State, t: &C::State, depth: usize) -> Result<bool> {
    Ok(distinguishing_depth(c, s, t, depth)?.is_none())
}

/// A partition of a finite state space into disjoint nonempty blocks.
/// Members of a block are sorted and blocks are ordered by their smallest
/// member.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Partition<S> {
    blocks: Vec<Vec<S>>,
    block_of: BTreeMap<S, usize>,
}

impl<S: Clone + Ord> Partition<S> {
    fn from_ids(states: &[S], ids: &[usize]) -> Self {
        let mut grouped: BTreeMap<usize, Vec<S>> = BTreeMap::new();
        for (s, &id) in states.iter().zip(ids) {
            grouped.entry(id).or_default().push(s.clone());
        }
        let mut blocks: Vec<Vec<S>> = grouped.into_values().collect();
        for b in &mut blocks {
            b.sort();
        }
        blocks.sort();
        let block_of = blocks
            .iter()
            .enumerate()
            .flat_map(|(i, b)| b.iter().map(move |s| (s.clone(), i)))
            .collect();
        Self { blocks, block_of }
    }

    pub fn blocks(&self) -> &[Vec<S>] {
        &self.blocks
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn block_of(&self, s: &S) -> Option<usize> {
        self.block_of.get(s).copied()
    }

    pub fn same_block(&self, s: &S, t: &S) -> bool {
        matches!((self.block_of(s), self.block_of(t)), (Some(a), Some(b)) if a == b)
    }
}

/// The coarsest bisimulation of a finite coalgebra.
///
/// Starts from the partition by label and splits blocks whose members send
/// some position to different blocks, until nothing splits. Each round
/// either adds a block or stops, so there are at most `|states|` rounds.
pub fn partition_refine<C: Coalgebra>(c: &C) -> Result<Partition<C::State>> {
    let states = c.states().ok_or(Error::NeedsFiniteStates)?;
    let index: BTreeMap<C::State, usize> = states.iter().cloned().enumerate().map(|(i, s)| (s, i)).collect();
    let mut labels = Vec::with_capacity(states.len());
    let mut successors = Vec::with_capacity(states.len());
    for s in &states {
        let (label, children) = c.transition(s)?.into_parts();
        c.container().check_arity(&label, children.len())?;
        let ids = children
            .iter()
            .map(|x| {
                index
                    .get(x)
                    .copied()
                    .ok_or_else(|| Error::UnknownState { state: c.describe(x) })
            })
            .collect::<Result<Vec<_>>>()?;
        labels.push(label);
        successors.push(ids);
    }

    let mut ids = renumber(labels.iter());
    let mut count = distinct(&ids);
    loop {
        let signatures: Vec<(usize, Vec<usize>)> = successors
            .iter()
            .zip(&ids)
            .map(|(succ, &own)| (own, succ.iter().map(|&x| ids[x]).collect()))
            .collect();
        let next = renumber(signatures.iter());
        let next_count = distinct(&next);
        ids = next;
        if next_count == count {
            break;
        }
        count = next_count;
    }
    Ok(Partition::from_ids(&states, &ids))
}

fn renumber<'a, K: Ord + 'a>(keys: impl Iterator<Item = &'a K>) -> Vec<usize> {
    let mut table: BTreeMap<&K, usize> = BTreeMap::new();
    keys.map(|k| {
        let next = table.len();
        *table.entry(k).or_insert(next)
    })
    .collect()
}

fn distinct(ids: &[usize]) -> usize {
    ids.iter().collect::<BTreeSet<_>>().len()
}

/// The bisimulation relating every pair of states that share a block.
pub fn witness_from_partition<C: Coalgebra>(
    c: &C,
    partition: &Partition<C::State>,
) -> Result<BisimWitness<C::State, C::Label>> {
    let pairs = partition.blocks().iter().flat_map(|b| {
        b.iter()
            .flat_map(move |s| b.iter().map(move |t| (s.clone(), t.clone())))
    });
    BisimWitness::forced(c, pairs)
}

/// Related states of a verified witness have equal approximations; this
/// checks that at every depth `≤ depth`.
pub fn coinduction_transfer<C: Coalgebra>(
    c: &C,
    w: &BisimWitness<C::State, C::Label>,
    s: &C::State,
    t: &C::State,
    depth: usize,
) -> Result<bool> {
    verify_bisim(c, w)?;
    if !w.contains(s, t) {
        return Err(Error::PairNotRelated {
            left: c.describe(s),
            right: c.describe(t),
        });
    }
    bounded_bisim(c, s, t, depth)
}

/// A coalgebra quotiented by its coarsest bisimulation.
#[derive(Clone, Debug)]
pub struct Quotient<S, L: Label> {
    pub coalgebra: FiniteCoalgebra<L>,
    pub partition: Partition<S>,
    block_names: BTreeMap<S, usize>,
}

impl<S: Clone + Ord, L: Label> Quotient<S, L> {
    /// State of the quotient that `s` is sent to.
    pub fn project(&self, s: &S) -> Option<usize> {
        self.block_names.get(s).copied()
    }
}

/// The quotient coalgebra on the blocks of [`partition_refine`]. Each block
/// is named after its smallest member name, and quotient states are
/// ordered by those names.
pub fn minimize<C: Coalgebra>(c: &C) -> Result<Quotient<C::State, C::Label>> {
    let partition = partition_refine(c)?;
    let mut named: Vec<(String, usize)> = partition
        .blocks()
        .iter()
        .enumerate()
        .map(|(i, b)| {
            let name = b.iter().map(|s| c.describe(s)).min().unwrap_or_default();
            (name, i)
        })
        .collect();
    named.sort();
    let mut position = alloc::vec![0; named.len()];
    for (new, (_, old)) in named.iter().enumerate() {
        position[*old] = new;
    }
    let mut transitions = Vec::with_capacity(named.len());
    for (_, old) in &named {
        let representative = &partition.blocks()[*old][0];
        let step = c.transition(representative)?;
        let children = step
            .children()
            .iter()
            .map(|x| {
                partition
                    .block_of(x)
                    .map(|b| position[b])
                    .ok_or_else(|| Error::UnknownState { state: c.describe(x) })
            })
            .collect::<Result<Vec<_>>>()?;
        transitions.push((step.label().clone(), children));
    }
    let names = named.iter().map(|(n, _)| n.clone()).collect();
    let coalgebra = FiniteCoalgebra::with_names(c.container().clone(), names, transitions)?;
    let block_names = partition
        .blocks()
        .iter()
        .enumerate()
        .flat_map(|(i, b)| {
            let target = position[i];
            b.iter().map(move |s| (s.clone(), target))
        })
        .collect();
    Ok(Quotient {
        coalgebra,
        partition,
        block_names,
    })
}
