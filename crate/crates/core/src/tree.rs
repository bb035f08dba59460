//! Depth-`n` approximation trees, i.e. elements of the chain stage `Pⁿ(1)`.
//!
//! Subtrees are reference counted and may be shared, so a tree built from a
//! cyclic coalgebra is a DAG whose size grows with depth times the number of
//! states rather than exponentially. Every traversal in this module is
//! iterative and memoized on node identity, so depths in the tens of
//! thousands are fine.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::container::{Container, Label, PValue};
use crate::error::{Error, Result};

/// Default cap on the number of trees [`enumerate_w`] may produce.
pub const DEFAULT_ENUMERATION_BOUND: usize = 1_000_000;

/// The observation of a coinductive tree up to some depth. Depth 0 is the
/// single truncation marker; a node of depth `d + 1` has exactly
/// `arity(label)` children, all of depth `d`.
pub struct ApproxTree<L>(Arc<Shape<L>>);

enum Shape<L> {
    Trunc,
    Node {
        label: L,
        depth: usize,
        children: Vec<ApproxTree<L>>,
    },
}

impl<L> Clone for ApproxTree<L> {
    fn clone(&self) -> Self {
        Self(Arc::clone(&self.0))
    }
}

impl<L> Drop for ApproxTree<L> {
    // Unlink uniquely owned descendants onto a heap stack so that dropping a
    // very deep tree does not recurse.
    fn drop(&mut self) {
        let mut stack = Vec::new();
        if let Some(Shape::Node { children, .. }) = Arc::get_mut(&mut self.0) {
            stack.append(children);
        }
        while let Some(mut tree) = stack.pop() {
            if let Some(Shape::Node { children, .. }) = Arc::get_mut(&mut tree.0) {
                stack.append(children);
            }
        }
    }
}

impl<L: Label> ApproxTree<L> {
    /// The unique depth-0 tree.
    pub fn trunc() -> Self {
        Self(Arc::new(Shape::Trunc))
    }

    /// Builds `label(children…)`, checking the arity and that all children
    /// sit at the same depth. A zero-arity node gets depth 1; see
    /// [`ApproxTree::leaf`] for leaves deeper in the chain.
    pub fn node(container: &Container<L>, label: L, children: Vec<Self>) -> Result<Self> {
        container.check_arity(&label, children.len())?;
        let depth = match children.split_first() {
            None => 0,
            Some((first, rest)) => {
                let expected = first.depth();
                if let Some(bad) = rest.iter().find(|c| c.depth() != expected) {
                    return Err(Error::RaggedDepth {
                        expected,
                        found: bad.depth(),
                    });
                }
                expected
            }
        };
        Ok(Self::node_unchecked(label, depth + 1, children))
    }

    /// A zero-arity node at stage `depth ≥ 1`.
    pub fn leaf(container: &Container<L>, label: L, depth: usize) -> Result<Self> {
        container.check_arity(&label, 0)?;
        if depth == 0 {
            return Err(Error::RaggedDepth { expected: 1, found: 0 });
        }
        Ok(Self::node_unchecked(label, depth, Vec::new()))
    }

    pub(crate) fn node_unchecked(label: L, depth: usize, children: Vec<Self>) -> Self {
        Self(Arc::new(Shape::Node { label, depth, children }))
    }

    pub fn depth(&self) -> usize {
        match &*self.0 {
            Shape::Trunc => 0,
            Shape::Node { depth, .. } => *depth,
        }
    }

    pub fn is_trunc(&self) -> bool {
        matches!(&*self.0, Shape::Trunc)
    }

    /// Root label, `None` for the truncation marker.
    pub fn label(&self) -> Option<&L> {
        match &*self.0 {
            Shape::Trunc => None,
            Shape::Node { label, .. } => Some(label),
        }
    }

    pub fn children(&self) -> &[Self] {
        match &*self.0 {
            Shape::Trunc => &[],
            Shape::Node { children, .. } => children,
        }
    }

    /// Reads a depth-`n + 1` tree as an element of `P(Wₙ)`.
    pub fn as_pvalue(&self) -> Option<PValue<L, Self>> {
        match &*self.0 {
            Shape::Trunc => None,
            Shape::Node { label, children, .. } => Some(PValue::from_parts(label.clone(), children.clone())),
        }
    }

    /// The chain projection `Wₙ₊₁ → Wₙ`: drops the deepest layer.
    pub fn truncate(&self) -> Result<Self> {
        match self.depth() {
            0 => Err(Error::CannotTruncateUnit),
            d => Ok(self.cut(1, d)),
        }
    }

    /// Composite of projections down to depth `m`.
    pub fn truncate_to(&self, m: usize) -> Result<Self> {
        let depth = self.depth();
        if m > depth {
            return Err(Error::DepthTooLarge { requested: m, depth });
        }
        Ok(self.cut(depth - m, depth))
    }

    /// Structural equality. Same as `==`.
    pub fn tree_equal(&self, other: &Self) -> bool {
        let mut seen = BTreeSet::new();
        let mut stack = vec![(self, other)];
        while let Some((a, b)) = stack.pop() {
            if Arc::ptr_eq(&a.0, &b.0) || !seen.insert((a.addr(), b.addr())) {
                continue;
            }
            match (&*a.0, &*b.0) {
                (Shape::Trunc, Shape::Trunc) => {}
                (
                    Shape::Node {
                        label: la,
                        depth: da,
                        children: ca,
                    },
                    Shape::Node {
                        label: lb,
                        depth: db,
                        children: cb,
                    },
                ) if la == lb && da == db && ca.len() == cb.len() => {
                    stack.extend(ca.iter().zip(cb.iter()));
                }
                _ => return false,
            }
        }
        true
    }

    /// Checks the depth/arity discipline against `container`.
    pub fn is_well_formed(&self, container: &Container<L>) -> bool {
        let mut seen = BTreeSet::new();
        let mut stack = vec![self];
        while let Some(t) = stack.pop() {
            if !seen.insert(t.addr()) {
                continue;
            }
            if let Shape::Node { label, depth, children } = &*t.0 {
                if container.arity(label) != Some(children.len()) || children.iter().any(|c| c.depth() + 1 != *depth) {
                    return false;
                }
                stack.extend(children.iter());
            }
        }
        true
    }

    /// Number of distinct shared nodes, a measure of the DAG's real size.
    pub fn shared_size(&self) -> usize {
        let mut seen = BTreeSet::new();
        let mut stack = vec![self];
        while let Some(t) = stack.pop() {
            if seen.insert(t.addr()) {
                stack.extend(t.children());
            }
        }
        seen.len()
    }

    /// Number of nodes (truncation markers included) once sharing is
    /// unfolded, saturating at `u128::MAX`. Cheap even when the result is
    /// astronomically large.
    pub fn expanded_size(&self) -> u128 {
        let mut size: BTreeMap<usize, u128> = BTreeMap::new();
        let mut stack = vec![(self, false)];
        while let Some((t, expanded)) = stack.pop() {
            if size.contains_key(&t.addr()) {
                continue;
            }
            if expanded {
                let total = t
                    .children()
                    .iter()
                    .fold(1u128, |acc, c| acc.saturating_add(size[&c.addr()]));
                size.insert(t.addr(), total);
            } else {
                stack.push((t, true));
                stack.extend(t.children().iter().map(|c| (c, false)));
            }
        }
        size[&self.addr()]
    }

    /// Removes the bottom `levels` layers of a tree of depth `depth`.
    fn cut(&self, levels: usize, depth: usize) -> Self {
        if levels == 0 {
            return self.clone();
        }
        if levels == depth {
            return Self::trunc();
        }
        let trunc = Self::trunc();
        let mut done: BTreeMap<usize, Self> = BTreeMap::new();
        let mut stack = vec![(self, false)];
        while let Some((t, expanded)) = stack.pop() {
            if done.contains_key(&t.addr()) {
                continue;
            }
            match &*t.0 {
                Shape::Node { label, depth, children } if *depth > levels => {
                    if expanded {
                        let kids = children.iter().map(|c| done[&c.addr()].clone()).collect();
                        done.insert(t.addr(), Self::node_unchecked(label.clone(), depth - levels, kids));
                    } else {
                        stack.push((t, true));
                        stack.extend(
                            children
                                .iter()
                                .filter(|c| !done.contains_key(&c.addr()))
                                .map(|c| (c, false)),
                        );
                    }
                }
                _ => {
                    done.insert(t.addr(), trunc.clone());
                }
            }
        }
        done.remove(&self.addr()).unwrap_or(trunc)
    }
}

impl<L> ApproxTree<L> {
    pub(crate) fn addr(&self) -> usize {
        Arc::as_ptr(&self.0) as *const () as usize
    }

    fn render(
        &self,
        f: &mut fmt::Formatter<'_>,
        label: impl Fn(&L, &mut fmt::Formatter<'_>) -> fmt::Result,
    ) -> fmt::Result {
        enum Tok<'a, L> {
            Tree(&'a ApproxTree<L>),
            Text(&'static str),
        }
        let mut stack = vec![Tok::Tree(self)];
        while let Some(tok) = stack.pop() {
            let tree = match tok {
                Tok::Text(s) => {
                    f.write_str(s)?;
                    continue;
                }
                Tok::Tree(t) => t,
            };
            match &*tree.0 {
                Shape::Trunc => f.write_str("·")?,
                Shape::Node { label: l, children, .. } => {
                    label(l, f)?;
                    if children.is_empty() {
                        continue;
                    }
                    f.write_str("(")?;
                    let sep = if children.iter().all(|c| matches!(&*c.0, Shape::Trunc)) {
                        ","
                    } else {
                        ", "
                    };
                    stack.push(Tok::Text(")"));
                    for (i, c) in children.iter().enumerate().rev() {
                        stack.push(Tok::Tree(c));
                        if i > 0 {
                            stack.push(Tok::Text(sep));
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

impl<L: Label> PartialEq for ApproxTree<L> {
    fn eq(&self, other: &Self) -> bool {
        self.tree_equal(other)
    }
}

impl<L: Label> Eq for ApproxTree<L> {}

/// `b(a, b(·,·))`: `·` marks truncation, zero-arity nodes print as their
/// bare label. Display only, not meant to be parsed back.
impl<L: fmt::Display> fmt::Display for ApproxTree<L> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.render(f, |l, f| fmt::Display::fmt(l, f))
    }
}

impl<L: fmt::Debug> fmt::Debug for ApproxTree<L> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.render(f, |l, f| fmt::Debug::fmt(l, f))
    }
}

/// `|Wₙ|` by the recurrence `|W₀| = 1`, `|Wₙ₊₁| = Σₐ |Wₙ|^arity(a)`,
/// saturating at `u128::MAX`.
pub fn count_w<L: Label>(container: &Container<L>, n: usize) -> Result<u128> {
    let labels = container.labels().ok_or(Error::NeedsFiniteLabels)?;
    let mut size: u128 = 1;
    for _ in 0..n {
        let mut next: u128 = 0;
        for label in labels {
            let arity = container.arity_of(label)?;
            let term = u32::try_from(arity)
                .ok()
                .and_then(|a| size.checked_pow(a))
                .unwrap_or(u128::MAX);
            next = next.saturating_add(term);
        }
        size = next;
    }
    Ok(size)
}

/// All trees of depth `n` over a finite signature, in label-enumeration
/// order with children varying lexicographically.
pub fn enumerate_w<L: Label>(container: &Container<L>, n: usize, bound: usize) -> Result<Vec<ApproxTree<L>>> {
    let labels = container.labels().ok_or(Error::NeedsFiniteLabels)?;
    if count_w(container, n)? > bound as u128 {
        return Err(Error::SizeBoundExceeded { bound });
    }
    let mut stage = vec![ApproxTree::trunc()];
    for depth in 1..=n {
        let mut next = Vec::new();
        for label in labels {
            let arity = container.arity_of(label)?;
            // odometer over stage^arity
            let mut digits = vec![0usize; arity];
            loop {
                let kids = digits.iter().map(|&i| stage[i].clone()).collect();
                next.push(ApproxTree::node_unchecked(label.clone(), depth, kids));
                let mut exhausted = true;
                for digit in digits.iter_mut().rev() {
                    *digit += 1;
                    if *digit < stage.len() {
                        exhausted = false;
                        break;
                    }
                    *digit = 0;
                }
                if exhausted {
                    break;
                }
            }
        }
        stage = next;
    }
    Ok(stage)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    fn fig1() -> Container<char> {
        Container::finite([('a', 0), ('b', 2), ('c', 3)]).unwrap()
    }

    fn leaf(c: &Container<char>, l: char) -> ApproxTree<char> {
        ApproxTree::node(c, l, vec![]).unwrap()
    }

    fn fig1_depth2() -> ApproxTree<char> {
        let c = fig1();
        let inner = ApproxTree::node(&c, 'b', vec![ApproxTree::trunc(), ApproxTree::trunc()]).unwrap();
        ApproxTree::node(&c, 'b', vec![leaf(&c, 'a'), inner]).unwrap()
    }

    #[test]
    fn trunc_is_unique_and_depth_zero() {
        let t: ApproxTree<char> = ApproxTree::trunc();
        assert_eq!(t.depth(), 0);
        assert_eq!(t, ApproxTree::trunc());
    }

    #[test]
    fn make_node_depths() {
        let c = fig1();
        assert_eq!(leaf(&c, 'a').depth(), 1);
        assert_eq!(fig1_depth2().depth(), 2);
        assert_eq!(fig1_depth2().to_string(), "b(a, b(·,·))");
        let deep = ApproxTree::leaf(&c, 'a', 2).unwrap();
        let t = ApproxTree::node(&c, 'b', vec![deep, fig1_depth2()]).unwrap();
        assert_eq!(t.depth(), 3);
        assert!(t.is_well_formed(&c));
        assert!(ApproxTree::leaf(&c, 'b', 2).is_err());
        assert!(ApproxTree::leaf(&c, 'a', 0).is_err());
        assert_eq!(fig1_depth2().expanded_size(), 5);
        assert_eq!(ApproxTree::<char>::trunc().expanded_size(), 1);
    }

    #[test]
    fn make_node_errors() {
        let c = fig1();
        let err = ApproxTree::node(&c, 'b', vec![leaf(&c, 'a')]).unwrap_err();
        assert!(matches!(
            err,
            Error::ArityMismatch {
                expected: 2,
                found: 1,
                ..
            }
        ));
        let err = ApproxTree::node(&c, 'b', vec![leaf(&c, 'a'), ApproxTree::trunc()]).unwrap_err();
        assert_eq!(err, Error::RaggedDepth { expected: 1, found: 0 });
        let err = ApproxTree::node(&c, 'z', vec![]).unwrap_err();
        assert!(matches!(err, Error::UnknownLabel { .. }));
    }

    #[test]
    fn truncate_examples() {
        let c = fig1();
        assert!(leaf(&c, 'a').truncate().unwrap().is_trunc());
        let expected = ApproxTree::node(&c, 'b', vec![ApproxTree::trunc(), ApproxTree::trunc()]).unwrap();
        assert_eq!(fig1_depth2().truncate().unwrap(), expected);
        assert_eq!(
            ApproxTree::<char>::trunc().truncate().unwrap_err(),
            Error::CannotTruncateUnit
        );
    }

    #[test]
    fn truncate_to_examples() {
        let c = Container::finite([('Z', 0), ('S', 1)]).unwrap();
        let mut t = ApproxTree::trunc();
        for _ in 0..3 {
            t = ApproxTree::node(&c, 'S', vec![t]).unwrap();
        }
        let s1 = ApproxTree::node(&c, 'S', vec![ApproxTree::trunc()]).unwrap();
        assert_eq!(t.truncate_to(1).unwrap(), s1);
        assert_eq!(t.truncate_to(3).unwrap(), t);
        assert!(t.truncate_to(0).unwrap().is_trunc());
        assert_eq!(
            t.truncate_to(4).unwrap_err(),
            Error::DepthTooLarge { requested: 4, depth: 3 }
        );
    }

    #[test]
    fn equality_examples() {
        let c = fig1();
        let b = ApproxTree::node(&c, 'b', vec![ApproxTree::trunc(), ApproxTree::trunc()]).unwrap();
        assert_ne!(leaf(&c, 'a'), b);
        let t = fig1_depth2();
        assert!(t.tree_equal(&t.truncate_to(t.depth()).unwrap()));
    }

    #[test]
    fn deep_chain_survives_traversal_and_drop() {
        let c = Container::finite([('Z', 0), ('S', 1)]).unwrap();
        let mut t = ApproxTree::trunc();
        for _ in 0..200_000 {
            t = ApproxTree::node(&c, 'S', vec![t]).unwrap();
        }
        let u = t.truncate().unwrap();
        assert_eq!(u.depth(), 199_999);
        assert!(t.truncate_to(199_999).unwrap().tree_equal(&u));
        assert!(t.is_well_formed(&c));
        drop(t);
        drop(u);
    }

    #[test]
    fn shared_dag_sizes() {
        let c = fig1();
        let mut t = ApproxTree::trunc();
        for _ in 0..100 {
            t = ApproxTree::node(&c, 'b', vec![t.clone(), t]).unwrap();
        }
        assert_eq!(t.shared_size(), 101);
        assert_eq!(t.expanded_size(), (1u128 << 101) - 1);
        for _ in 0..30 {
            t = ApproxTree::node(&c, 'b', vec![t.clone(), t]).unwrap();
        }
        assert_eq!(t.expanded_size(), u128::MAX);
    }

    #[test]
    fn enumerate_fig1_counts() {
        let c = fig1();
        let sizes: Vec<usize> = (0..3)
            .map(|n| enumerate_w(&c, n, DEFAULT_ENUMERATION_BOUND).unwrap().len())
            .collect();
        assert_eq!(sizes, vec![1, 3, 37]);
        assert_eq!(count_w(&c, 2).unwrap(), 37);
    }

    #[test]
    fn enumerate_is_duplicate_free_and_well_formed() {
        let c = fig1();
        let all = enumerate_w(&c, 2, DEFAULT_ENUMERATION_BOUND).unwrap();
        for (i, a) in all.iter().enumerate() {
            assert!(a.is_well_formed(&c));
            assert_eq!(a.depth(), 2);
            for b in &all[i + 1..] {
                assert_ne!(a, b);
            }
        }
    }

    #[test]
    fn enumerate_errors() {
        let c = fig1();
        assert_eq!(
            enumerate_w(&c, 3, 1000).unwrap_err(),
            Error::SizeBoundExceeded { bound: 1000 }
        );
        let s: Container<u8> = Container::uniform(1);
        assert_eq!(enumerate_w(&s, 1, 10).unwrap_err(), Error::NeedsFiniteLabels);
        assert_eq!(enumerate_w(&s, 0, 10).unwrap_err(), Error::NeedsFiniteLabels);
        assert_eq!(enumerate_w(&c, 0, 10).unwrap().len(), 1);
    }
}
