//! Indexed containers: labels and positions fibred over a set of sorts,
//! with each position assigned the sort of the subtree that sits there.
//!
//! Trees carry the sort of their root. The machinery is the plain one with
//! sort discipline checked on the way in and threaded on the way out.

use core::fmt;

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use crate::bisim::{distinguishing_depth, partition_refine, Partition};
use crate::container::{Container, Label, PValue};
use crate::error::{show, Error, Result};
use crate::mtype::{into_unchecked, out, unfold_with, unroll, FiniteCoalgebra, MElement, DEFAULT_MAX_DEPTH};
use crate::tree::ApproxTree;

/// `(I, A, B, r)` with finite arities; `r` is tabulated per position.
#[derive(Clone, Debug)]
pub struct IndexedContainer<I, L> {
    sorts: Vec<I>,
    labels: BTreeMap<I, Vec<L>>,
    positions: BTreeMap<(I, L), Vec<I>>,
}

impl<I: Label, L: Label> IndexedContainer<I, L> {
    /// `entries` are `(sort, label, child sorts)`; the arity is the number of
    /// child sorts. Every sort mentioned must be declared.
    pub fn new(sorts: Vec<I>, entries: Vec<(I, L, Vec<I>)>) -> Result<Self> {
        let declared: BTreeSet<&I> = sorts.iter().collect();
        if declared.len() != sorts.len() {
            return Err(Error::DuplicateState { state: show(&sorts) });
        }
        let known = |i: &I| {
            if declared.contains(i) {
                Ok(())
            } else {
                Err(Error::UnknownSort { sort: show(i) })
            }
        };
        let mut labels: BTreeMap<I, Vec<L>> = sorts.iter().map(|i| (i.clone(), Vec::new())).collect();
        let mut positions = BTreeMap::new();
        for (sort, label, child_sorts) in entries {
            known(&sort)?;
            for c in &child_sorts {
                known(c)?;
            }
            if positions.insert((sort.clone(), label.clone()), child_sorts).is_some() {
                return Err(Error::DuplicateLabel { label: show(&label) });
            }
            labels.entry(sort).or_default().push(label);
        }
        Ok(Self {
            sorts,
            labels,
            positions,
        })
    }

    /// A plain finite container as the indexed container over one sort.
    pub fn from_plain(container: &Container<L>, sort: I) -> Result<Self> {
        let labels = container.labels().ok_or(Error::NeedsFiniteLabels)?;
        let entries = labels
            .iter()
            .map(|l| Ok((sort.clone(), l.clone(), vec![sort.clone(); container.arity_of(l)?])))
            .collect::<Result<Vec<_>>>()?;
        Self::new(vec![sort], entries)
    }

    pub fn sorts(&self) -> &[I] {
        &self.sorts
    }

    pub fn labels_at(&self, sort: &I) -> &[L] {
        self.labels.get(sort).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn arity(&self, sort: &I, label: &L) -> Option<usize> {
        self.child_sorts(sort, label).map(<[I]>::len)
    }

    pub fn child_sorts(&self, sort: &I, label: &L) -> Option<&[I]> {
        self.positions.get(&(sort.clone(), label.clone())).map(Vec::as_slice)
    }

    /// `r(sort, label, position)`.
    pub fn child_sort(&self, sort: &I, label: &L, position: usize) -> Option<&I> {
        self.child_sorts(sort, label)?.get(position)
    }

    fn sorts_for(&self, sort: &I, label: &L) -> Result<&[I]> {
        self.child_sorts(sort, label).ok_or_else(|| Error::SortMismatch {
            expected: alloc::format!("a label of sort {sort:?}"),
            found: show(label),
        })
    }

    /// The plain container over `(sort, label)` pairs.
    pub fn erase(&self) -> Container<(I, L)> {
        Container::finite(
            self.positions
                .iter()
                .map(|((i, l), cs)| ((i.clone(), l.clone()), cs.len())),
        )
        .expect("positions are keyed uniquely")
    }
}

struct IndexedInner<I, L> {
    base: IndexedContainer<I, L>,
    names: Vec<String>,
    index: BTreeMap<String, usize>,
    sorts: Vec<I>,
    transitions: Vec<(L, Vec<usize>)>,
}

/// A finite coalgebra for an indexed container; every state has a sort and
/// transitions respect the sorts of positions.
pub struct IndexedCoalgebra<I, L> {
    inner: Arc<IndexedInner<I, L>>,
}

impl<I, L> Clone for IndexedCoalgebra<I, L> {
    fn clone(&self) -> Self {
        Self {
            inner: Arc::clone(&self.inner),
        }
    }
}

impl<I: Label, L: Label> fmt::Debug for IndexedCoalgebra<I, L> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut map = f.debug_map();
        for (i, name) in self.inner.names.iter().enumerate() {
            map.entry(name, &(&self.inner.sorts[i], &self.inner.transitions[i]));
        }
        map.finish()
    }
}

impl<I: Label, L: Label> IndexedCoalgebra<I, L> {
    /// `entries` are `(name, sort, label, child names)`.
    pub fn new<N: AsRef<str>>(base: IndexedContainer<I, L>, entries: Vec<(N, I, L, Vec<N>)>) -> Result<Self> {
        let mut index = BTreeMap::new();
        for (i, (name, ..)) in entries.iter().enumerate() {
            if index.insert(String::from(name.as_ref()), i).is_some() {
                return Err(Error::DuplicateState {
                    state: String::from(name.as_ref()),
                });
            }
        }
        let sorts: Vec<I> = entries.iter().map(|(_, i, _, _)| i.clone()).collect();
        let mut transitions = Vec::with_capacity(entries.len());
        for (_, sort, label, children) in &entries {
            if !base.sorts.contains(sort) {
                return Err(Error::UnknownSort { sort: show(sort) });
            }
            let expected = base.sorts_for(sort, label)?;
            if expected.len() != children.len() {
                return Err(Error::ArityMismatch {
                    label: show(label),
                    expected: expected.len(),
                    found: children.len(),
                });
            }
            let mut ids = Vec::with_capacity(children.len());
            for (want, child) in expected.iter().zip(children) {
                let id = *index.get(child.as_ref()).ok_or_else(|| Error::UnknownState {
                    state: String::from(child.as_ref()),
                })?;
                if &sorts[id] != want {
                    return Err(Error::SortMismatch {
                        expected: show(want),
                        found: show(&sorts[id]),
                    });
                }
                ids.push(id);
            }
            transitions.push((label.clone(), ids));
        }
        Ok(Self {
            inner: Arc::new(IndexedInner {
                base,
                names: entries.iter().map(|(n, ..)| String::from(n.as_ref())).collect(),
                index,
                sorts,
                transitions,
            }),
        })
    }

    /// A plain finite coalgebra with every state placed at `sort`.
    pub fn from_plain(c: &FiniteCoalgebra<L>, sort: I) -> Result<Self> {
        use crate::mtype::Coalgebra;
        let base = IndexedContainer::from_plain(c.container(), sort.clone())?;
        let entries = (0..c.len())
            .map(|s| {
                let step = c.step(s);
                (
                    String::from(c.name(s)),
                    sort.clone(),
                    step.label().clone(),
                    step.children().iter().map(|&x| String::from(c.name(x))).collect(),
                )
            })
            .collect();
        Self::new(base, entries)
    }

    pub fn base(&self) -> &IndexedContainer<I, L> {
        &self.inner.base
    }

    pub fn len(&self) -> usize {
        self.inner.transitions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn state(&self, name: &str) -> Option<usize> {
        self.inner.index.get(name).copied()
    }

    pub fn name(&self, state: usize) -> &str {
        &self.inner.names[state]
    }

    pub fn names(&self) -> &[String] {
        &self.inner.names
    }

    pub fn sort_of(&self, state: usize) -> &I {
        &self.inner.sorts[state]
    }

    pub fn step(&self, state: usize) -> (&L, &[usize]) {
        let (l, cs) = &self.inner.transitions[state];
        (l, cs)
    }

    fn checked(&self, state: usize) -> Result<()> {
        if state < self.len() {
            Ok(())
        } else {
            Err(Error::UnknownState { state: show(&state) })
        }
    }

    /// The plain coalgebra over `(sort, label)` pairs; two states of the
    /// same sort are bisimilar here iff they are bisimilar as sorted states.
    pub fn erase(&self) -> FiniteCoalgebra<(I, L)> {
        let transitions = self
            .inner
            .transitions
            .iter()
            .zip(&self.inner.sorts)
            .map(|((l, cs), i)| ((i.clone(), l.clone()), cs.clone()))
            .collect();
        FiniteCoalgebra::with_names(self.inner.base.erase(), self.inner.names.clone(), transitions)
            .expect("validated on construction")
    }
}

/// An approximation tree together with the sort of its root.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SortedApproxTree<I: Label, L: Label> {
    pub sort: I,
    pub tree: ApproxTree<L>,
}

/// Labels sit at their sort and children have the sorts `r` assigns.
pub fn well_sorted<I: Label, L: Label>(ic: &IndexedContainer<I, L>, t: &SortedApproxTree<I, L>) -> bool {
    let mut seen = BTreeSet::new();
    let mut stack = vec![(t.sort.clone(), &t.tree)];
    while let Some((sort, tree)) = stack.pop() {
        if !seen.insert((sort.clone(), tree.addr())) {
            continue;
        }
        let Some(label) = tree.label() else { continue };
        let Some(child_sorts) = ic.child_sorts(&sort, label) else {
            return false;
        };
        if child_sorts.len() != tree.children().len() {
            return false;
        }
        stack.extend(child_sorts.iter().cloned().zip(tree.children()));
    }
    true
}

fn indexed_step<I: Label, L: Label>(c: &IndexedCoalgebra<I, L>) -> impl Fn(&usize) -> Result<(L, Vec<usize>)> + '_ {
    move |s| {
        c.checked(*s)?;
        let (l, cs) = c.step(*s);
        Ok((l.clone(), cs.to_vec()))
    }
}

pub fn iapproximate<I: Label, L: Label>(
    c: &IndexedCoalgebra<I, L>,
    state: usize,
    n: usize,
) -> Result<SortedApproxTree<I, L>> {
    if n > DEFAULT_MAX_DEPTH {
        return Err(Error::DepthBoundExceeded {
            requested: n,
            bound: DEFAULT_MAX_DEPTH,
        });
    }
    c.checked(state)?;
    let tree = unroll(&state, n, &mut crate::mtype::Memo::new(), indexed_step(c))?;
    Ok(SortedApproxTree {
        sort: c.sort_of(state).clone(),
        tree,
    })
}

/// An element of the indexed final coalgebra at a given sort.
#[derive(Clone, Debug)]
pub struct SortedMElement<I: Label, L: Label> {
    pub sort: I,
    pub element: MElement<L>,
}

impl<I: Label, L: Label> SortedMElement<I, L> {
    pub fn at(&self, n: usize) -> SortedApproxTree<I, L> {
        SortedApproxTree {
            sort: self.sort.clone(),
            tree: self.element.at(n),
        }
    }

    pub fn observe_eq(&self, other: &Self, depth: usize) -> bool {
        self.sort == other.sort && self.element.observe_eq(&other.element, depth)
    }
}

pub fn iunfold<I: Label, L: Label>(c: &IndexedCoalgebra<I, L>, state: usize) -> Result<SortedMElement<I, L>> {
    c.checked(state)?;
    let owned = c.clone();
    let element = unfold_with(String::from(c.name(state)), state, move |s| indexed_step(&owned)(s));
    Ok(SortedMElement {
        sort: c.sort_of(state).clone(),
        element,
    })
}

/// `out` at a sort: the root label and the children at their sorts.
pub fn i_out<I: Label, L: Label>(
    ic: &IndexedContainer<I, L>,
    m: &SortedMElement<I, L>,
) -> Result<(L, Vec<SortedMElement<I, L>>)> {
    let (label, children) = out(&m.element)?.into_parts();
    let sorts = ic.sorts_for(&m.sort, &label)?;
    if sorts.len() != children.len() {
        return Err(Error::ArityMismatch {
            label: show(&label),
            expected: sorts.len(),
            found: children.len(),
        });
    }
    let children = sorts
        .iter()
        .cloned()
        .zip(children)
        .map(|(sort, element)| SortedMElement { sort, element })
        .collect();
    Ok((label, children))
}

/// `into` at a sort; each child must already have the sort of its position.
pub fn i_into<I: Label, L: Label>(
    ic: &IndexedContainer<I, L>,
    sort: I,
    label: L,
    children: Vec<SortedMElement<I, L>>,
) -> Result<SortedMElement<I, L>> {
    let sorts = ic.sorts_for(&sort, &label)?;
    if sorts.len() != children.len() {
        return Err(Error::ArityMismatch {
            label: show(&label),
            expected: sorts.len(),
            found: children.len(),
        });
    }
    for (want, child) in sorts.iter().zip(&children) {
        if want != &child.sort {
            return Err(Error::SortMismatch {
                expected: show(want),
                found: show(&child.sort),
            });
        }
    }
    let v = PValue::from_parts(label, children.into_iter().map(|c| c.element).collect());
    Ok(SortedMElement {
        sort,
        element: into_unchecked(v),
    })
}

fn same_sort<I: Label, L: Label>(c: &IndexedCoalgebra<I, L>, s: usize, t: usize) -> Result<()> {
    c.checked(s)?;
    c.checked(t)?;
    if c.sort_of(s) != c.sort_of(t) {
        return Err(Error::SortMismatch {
            expected: show(c.sort_of(s)),
            found: show(c.sort_of(t)),
        });
    }
    Ok(())
}

/// Smallest depth at which two states of the same sort differ.
pub fn idistinguishing_depth<I: Label, L: Label>(
    c: &IndexedCoalgebra<I, L>,
    s: usize,
    t: usize,
    max: usize,
) -> Result<Option<usize>> {
    same_sort(c, s, t)?;
    distinguishing_depth(&c.erase(), &s, &t, max)
}

pub fn ibounded_bisim<I: Label, L: Label>(
    c: &IndexedCoalgebra<I, L>,
    s: usize,
    t: usize,
    depth: usize,
) -> Result<bool> {
    Ok(idistinguishing_depth(c, s, t, depth)?.is_none())
}

/// Coarsest bisimulation, refined separately inside each sort.
pub fn ipartition_refine<I: Label, L: Label>(c: &IndexedCoalgebra<I, L>) -> Result<Partition<usize>> {
    partition_refine(&c.erase())
}

/// The morphism square for a sorted map `f`, checked at every stage
/// `≤ depth` for every state; `f(s)` must also live at the sort of `s`.
pub fn iverify_morphism<I, L, F>(c: &IndexedCoalgebra<I, L>, f: F, depth: usize) -> Result<()>
where
    I: Label,
    L: Label,
    F: Fn(usize) -> SortedMElement<I, L>,
{
    for s in 0..c.len() {
        let fail = |stage| Error::NotAMorphism {
            state: String::from(c.name(s)),
            stage,
        };
        let image = f(s);
        if &image.sort != c.sort_of(s) {
            return Err(fail(0));
        }
        let (label, children) = c.step(s);
        let Ok((out_label, out_children)) = i_out(c.base(), &image) else {
            return Err(fail(0));
        };
        if &out_label != label {
            return Err(fail(0));
        }
        let images: Vec<SortedMElement<I, L>> = children.iter().map(|&x| f(x)).collect();
        for n in 0..=depth {
            let agree = out_children.iter().zip(&images).all(|(a, b)| {
                a.sort == b.sort
                    && matches!((a.element.try_at(n), b.element.try_at(n)), (Ok(x), Ok(y)) if x.tree_equal(&y))
            });
            if !agree {
                return Err(fail(n));
            }
        }
    }
    Ok(())
}

/// A verified sorted morphism agrees with [`iunfold`] up to `depth`.
pub fn iuniqueness_probe<I, L, F>(c: &IndexedCoalgebra<I, L>, f: F, depth: usize) -> Result<bool>
where
    I: Label,
    L: Label,
    F: Fn(usize) -> SortedMElement<I, L>,
{
    iverify_morphism(c, &f, depth)?;
    for s in 0..c.len() {
        if !f(s).observe_eq(&iunfold(c, s)?, depth) {
            return Ok(false);
        }
    }
    Ok(true)
}
