//! Signatures (containers) and the values of their polynomial functor.
//!
//! A container pairs a domain of labels with an arity per label. Positions
//! below a label `a` are the indices `0..arity(a)`. The polynomial functor
//! sends a payload type `X` to pairs of a label and one payload per position,
//! which is what [`PValue`] stores.

use alloc::collections::BTreeMap;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{show, Error, Result};

/// Node labels. Equality must be decidable; ordering is used for
/// deterministic output and for keyed lookups.
pub trait Label: Clone + Ord + fmt::Debug + Send + Sync + 'static {}

impl<T: Clone + Ord + fmt::Debug + Send + Sync + 'static> Label for T {}

type ArityFn<L> = Arc<dyn Fn(&L) -> Option<usize> + Send + Sync>;

#[derive(Clone)]
enum Arity<L> {
    Table(BTreeMap<L, usize>),
    Uniform(usize),
    Computed(ArityFn<L>),
}

/// A signature: which labels exist and how many children each one has.
#[derive(Clone)]
pub struct Container<L> {
    arity: Arity<L>,
    labels: Option<Arc<[L]>>,
}

impl<L: Label> Container<L> {
    /// A finite signature given by `(label, arity)` entries, in enumeration order.
    pub fn finite<I>(entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (L, usize)>,
    {
        let mut table = BTreeMap::new();
        let mut labels = Vec::new();
        for (label, arity) in entries {
            if table.insert(label.clone(), arity).is_some() {
                return Err(Error::DuplicateLabel { label: show(&label) });
            }
            labels.push(label);
        }
        Ok(Self {
            arity: Arity::Table(table),
            labels: Some(labels.into()),
        })
    }

    /// Every value of `L` is a label with the same arity. There is no
    /// enumeration, so this suits e.g. streams over the integers.
    pub fn uniform(arity: usize) -> Self {
        Self {
            arity: Arity::Uniform(arity),
            labels: None,
        }
    }

    /// Signature whose label domain is whatever `arity` returns `Some` on.
    pub fn from_fn<F>(arity: F) -> Self
    where
        F: Fn(&L) -> Option<usize> + Send + Sync + 'static,
    {
        Self {
            arity: Arity::Computed(Arc::new(arity)),
            labels: None,
        }
    }

    pub fn arity(&self, label: &L) -> Option<usize> {
        match &self.arity {
            Arity::Table(table) => table.get(label).copied(),
            Arity::Uniform(n) => Some(*n),
            Arity::Computed(f) => f(label),
        }
    }

    /// Like [`Container::arity`] but reports labels outside the domain.
    pub fn arity_of(&self, label: &L) -> Result<usize> {
        self.arity(label)
            .ok_or_else(|| Error::UnknownLabel { label: show(label) })
    }

    /// The label enumeration, when the signature is finite.
    pub fn labels(&self) -> Option<&[L]> {
        self.labels.as_deref()
    }

    pub fn contains(&self, label: &L) -> bool {
        self.arity(label).is_some()
    }

    pub(crate) fn check_arity(&self, label: &L, found: usize) -> Result<()> {
        let expected = self.arity_of(label)?;
        if expected != found {
            return Err(Error::ArityMismatch {
                label: show(label),
                expected,
                found,
            });
        }
        Ok(())
    }
}

impl<L: fmt::Debug> fmt::Debug for Container<L> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.arity {
            Arity::Table(table) => f.debug_map().entries(table.iter()).finish(),
            Arity::Uniform(n) => write!(f, "Container(uniform arity {n})"),
            Arity::Computed(_) => f.write_str("Container(<computed>)"),
        }
    }
}

/// An element of `P(X)`: a label together with one payload per position.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct PValue<L, X> {
    label: L,
    children: Vec<X>,
}

impl<L: Label, X> PValue<L, X> {
    /// Checks that `children` has exactly `arity(label)` entries.
    pub fn new(container: &Container<L>, label: L, children: Vec<X>) -> Result<Self> {
        container.check_arity(&label, children.len())?;
        Ok(Self { label, children })
    }

    /// For values whose arity is already established by other means.
    pub(crate) fn from_parts(label: L, children: Vec<X>) -> Self {
        Self { label, children }
    }

    pub fn label(&self) -> &L {
        &self.label
    }

    pub fn children(&self) -> &[X] {
        &self.children
    }

    /// Payload at position `b`.
    pub fn child(&self, b: usize) -> Option<&X> {
        self.children.get(b)
    }

    pub fn arity(&self) -> usize {
        self.children.len()
    }

    pub fn into_parts(self) -> (L, Vec<X>) {
        (self.label, self.children)
    }

    /// The action of the polynomial functor on a map: keep the label,
    /// post-compose the child assignment with `f`.
    pub fn pmap<Y, F>(&self, mut f: F) -> PValue<L, Y>
    where
        F: FnMut(&X) -> Y,
    {
        PValue {
            label: self.label.clone(),
            children: self.children.iter().map(&mut f).collect(),
        }
    }

    pub fn try_pmap<Y, E, F>(&self, mut f: F) -> core::result::Result<PValue<L, Y>, E>
    where
        F: FnMut(&X) -> core::result::Result<Y, E>,
    {
        Ok(PValue {
            label: self.label.clone(),
            children: self
                .children
                .iter()
                .map(&mut f)
                .collect::<core::result::Result<_, E>>()?,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::String;
    use alloc::vec;

    fn fig1() -> Container<char> {
        Container::finite([('a', 0), ('b', 2), ('c', 3)]).unwrap()
    }

    #[test]
    fn finite_signature_arities() {
        let c = fig1();
        assert_eq!(c.arity(&'c'), Some(3));
        assert_eq!(c.arity(&'d'), None);
        assert_eq!(c.labels(), Some(&['a', 'b', 'c'][..]));
        assert!(matches!(c.arity_of(&'z'), Err(Error::UnknownLabel { .. })));
    }

    #[test]
    fn duplicate_labels_rejected() {
        let err = Container::finite([('a', 0), ('a', 1)]).unwrap_err();
        assert!(matches!(err, Error::DuplicateLabel { .. }));
    }

    #[test]
    fn uniform_has_no_enumeration() {
        let c: Container<u64> = Container::uniform(1);
        assert_eq!(c.arity(&12345), Some(1));
        assert!(c.labels().is_none());
    }

    #[test]
    fn pvalue_checks_arity() {
        let c = fig1();
        assert!(PValue::new(&c, 'b', vec![1, 2]).is_ok());
        assert!(matches!(
            PValue::new(&c, 'b', vec![1]),
            Err(Error::ArityMismatch {
                expected: 2,
                found: 1,
                ..
            })
        ));
    }

    #[test]
    fn pmap_renames_children() {
        let c = fig1();
        let v = PValue::new(&c, 'b', vec!["s0", "s1"]).unwrap();
        let renamed = v.pmap(|s| {
            let mut s = String::from(*s);
            s.push('\'');
            s
        });
        assert_eq!(renamed.label(), &'b');
        assert_eq!(renamed.children(), &["s0'", "s1'"]);
    }

    #[test]
    fn pmap_identity_and_composition() {
        let c = fig1();
        let v = PValue::new(&c, 'c', vec![1u32, 2, 3]).unwrap();
        assert_eq!(v.pmap(|x| *x), v);
        let f = |x: &u32| x * 10;
        let g = |x: &u32| x + 1;
        assert_eq!(v.pmap(|x| g(&f(x))), v.pmap(f).pmap(g));
    }
}
