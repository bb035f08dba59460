//! ω-chains `X₀ ← X₁ ← X₂ ← …` and their limits.
//!
//! A limit element is a compatible family `(xₙ)` with `πₙ(xₙ₊₁) = xₙ`. No
//! finite value stores such a family, so [`LimitElement`] holds a generator
//! for the stages and caches what has been asked for. Families built by this
//! crate are compatible by construction; hand-built ones can be audited
//! with [`LimitElement::check_compat`].
//!
//! Stage equality is decidable ([`Chain::stage_eq`]). Wherever the usual
//! construction needs an equality of stages, this module checks one.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;
use core::marker::PhantomData;

use crate::container::{Label, PValue};
use crate::error::{show, Error, Result};
use crate::tree::ApproxTree;

/// How deep cone laws and label stability are verified eagerly.
pub const DEFAULT_VERIFY_DEPTH: usize = 16;

/// A chain: stage values plus the projections between consecutive stages.
pub trait Chain: Send + Sync + 'static {
    type Stage: Clone + Send + Sync + 'static;

    /// `πₙ : Xₙ₊₁ → Xₙ`.
    fn project(&self, n: usize, upper: &Self::Stage) -> Result<Self::Stage>;

    fn stage_eq(&self, n: usize, a: &Self::Stage, b: &Self::Stage) -> bool;
}

/// The chain `1 ← P1 ← P²1 ← …` of a signature. Projections drop the
/// deepest layer of a tree.
pub struct WChain<L>(PhantomData<fn() -> L>);

impl<L> WChain<L> {
    pub fn new() -> Self {
        Self(PhantomData)
    }
}

impl<L> Default for WChain<L> {
    fn default() -> Self {
        Self::new()
    }
}

impl<L: Label> Chain for WChain<L> {
    type Stage = ApproxTree<L>;

    fn project(&self, n: usize, upper: &ApproxTree<L>) -> Result<ApproxTree<L>> {
        if upper.depth() != n + 1 {
            return Err(Error::RaggedDepth {
                expected: n + 1,
                found: upper.depth(),
            });
        }
        upper.truncate()
    }

    fn stage_eq(&self, _n: usize, a: &ApproxTree<L>, b: &ApproxTree<L>) -> bool {
        a.tree_equal(b)
    }
}

/// `X'ₙ = Xₙ₊₁`, `π'ₙ = πₙ₊₁`.
pub struct Shifted<C>(pub Arc<C>);

impl<C: Chain> Chain for Shifted<C> {
    type Stage = C::Stage;

    fn project(&self, n: usize, upper: &C::Stage) -> Result<C::Stage> {
        self.0.project(n + 1, upper)
    }

    fn stage_eq(&self, n: usize, a: &C::Stage, b: &C::Stage) -> bool {
        self.0.stage_eq(n + 1, a, b)
    }
}

/// The chain `P(X₀) ← P(X₁) ← …` with projections `P(πₙ)`.
pub struct Applied<L, C> {
    inner: Arc<C>,
    _label: PhantomData<fn() -> L>,
}

impl<L, C> Applied<L, C> {
    pub fn new(inner: Arc<C>) -> Self {
        Self {
            inner,
            _label: PhantomData,
        }
    }

    pub fn inner(&self) -> &Arc<C> {
        &self.inner
    }
}

impl<L: Label, C: Chain> Chain for Applied<L, C> {
    type Stage = PValue<L, C::Stage>;

    fn project(&self, n: usize, upper: &Self::Stage) -> Result<Self::Stage> {
        upper.try_pmap(|x| self.inner.project(n, x))
    }

    fn stage_eq(&self, n: usize, a: &Self::Stage, b: &Self::Stage) -> bool {
        a.label() == b.label()
            && a.arity() == b.arity()
            && a.children()
                .iter()
                .zip(b.children())
                .all(|(x, y)| self.inner.stage_eq(n, x, y))
    }
}

type Generator<S> = Arc<dyn Fn(usize) -> Result<S> + Send + Sync>;

struct LimitInner<C: Chain> {
    chain: Arc<C>,
    generator: Generator<C::Stage>,
    cache: spin::Mutex<BTreeMap<usize, C::Stage>>,
    provenance: String,
}

/// An element of the limit of a chain, evaluated lazily stage by stage.
///
/// Cloning is cheap and clones share the stage cache. The cache only
/// grows; concurrent callers may both compute a stage but the first value
/// stored is the one everybody sees.
pub struct LimitElement<C: Chain> {
    inner: Arc<LimitInner<C>>,
}

impl<C: Chain> Clone for LimitElement<C> {
    fn clone(&self) -> Self {
        Self {
            inner: Arc::clone(&self.inner),
        }
    }
}

impl<C: Chain> fmt::Debug for LimitElement<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("LimitElement")
            .field("provenance", &self.inner.provenance)
            .field("cached_stages", &self.inner.cache.lock().len())
            .finish()
    }
}

impl<C: Chain> LimitElement<C> {
    /// Wraps a stage generator. Compatibility is not checked here.
    pub fn from_fn<F>(chain: Arc<C>, provenance: impl Into<String>, generator: F) -> Self
    where
        F: Fn(usize) -> Result<C::Stage> + Send + Sync + 'static,
    {
        Self {
            inner: Arc::new(LimitInner {
                chain,
                generator: Arc::new(generator),
                cache: spin::Mutex::new(BTreeMap::new()),
                provenance: provenance.into(),
            }),
        }
    }

    pub fn chain(&self) -> &Arc<C> {
        &self.inner.chain
    }

    pub(crate) fn identity(&self) -> usize {
        Arc::as_ptr(&self.inner) as *const () as usize
    }

    pub fn provenance(&self) -> &str {
        &self.inner.provenance
    }

    /// Stage `n`, computing and caching it if needed.
    pub fn try_at(&self, n: usize) -> Result<C::Stage> {
        if let Some(v) = self.inner.cache.lock().get(&n) {
            return Ok(v.clone());
        }
        // Generate without holding the lock: generators may evaluate other
        // limit elements.
        let value = (self.inner.generator)(n)?;
        Ok(self.inner.cache.lock().entry(n).or_insert(value).clone())
    }

    /// Stage `n`.
    ///
    /// # Panics
    ///
    /// If the generator fails, which only happens for hand-built families
    /// that are not compatible. Use [`LimitElement::try_at`] to observe the
    /// error instead.
    pub fn at(&self, n: usize) -> C::Stage {
        match self.try_at(n) {
            Ok(v) => v,
            Err(e) => panic!("stage {n} of {} is not observable: {e}", self.inner.provenance),
        }
    }

    /// First `n < upto` where `πₙ(xₙ₊₁) ≠ xₙ`, or where a stage cannot be
    /// produced at all.
    pub fn first_incompatibility(&self, upto: usize) -> Option<usize> {
        let chain = &self.inner.chain;
        let mut lower = match upto {
            0 => return None,
            _ => self.try_at(0).ok(),
        };
        for n in 0..upto {
            let upper = self.try_at(n + 1).ok();
            let ok = match (&lower, &upper) {
                (Some(lo), Some(up)) => chain.project(n, up).map(|p| chain.stage_eq(n, &p, lo)).unwrap_or(false),
                _ => false,
            };
            if !ok {
                return Some(n);
            }
            lower = upper;
        }
        None
    }

    /// `πₙ(xₙ₊₁) = xₙ` for every `n < upto`.
    pub fn check_compat(&self, upto: usize) -> bool {
        self.first_incompatibility(upto).is_none()
    }

    /// Stage-wise equality for every stage `n ≤ upto`.
    pub fn observe_eq(&self, other: &Self, upto: usize) -> bool {
        (0..=upto).all(|n| match (self.try_at(n), other.try_at(n)) {
            (Ok(a), Ok(b)) => self.inner.chain.stage_eq(n, &a, &b),
            _ => false,
        })
    }

    /// Re-reads every stage through `f` as a family over another chain.
    pub fn map_stages<D, F>(&self, chain: Arc<D>, provenance: impl Into<String>, f: F) -> LimitElement<D>
    where
        D: Chain,
        F: Fn(usize, C::Stage) -> Result<D::Stage> + Send + Sync + 'static,
    {
        let source = self.clone();
        LimitElement::from_fn(chain, provenance, move |n| f(n, source.try_at(n)?))
    }
}

/// A cone over a chain with apex values of type `A`: legs `fₙ : A → Xₙ`
/// that should commute with the projections.
pub struct Cone<C: Chain, A> {
    chain: Arc<C>,
    legs: Arc<dyn Fn(usize, &A) -> C::Stage + Send + Sync>,
}

impl<C: Chain, A> Clone for Cone<C, A> {
    fn clone(&self) -> Self {
        Self {
            chain: Arc::clone(&self.chain),
            legs: Arc::clone(&self.legs),
        }
    }
}

impl<C: Chain, A: fmt::Debug> Cone<C, A> {
    pub fn new<F>(chain: Arc<C>, legs: F) -> Self
    where
        F: Fn(usize, &A) -> C::Stage + Send + Sync + 'static,
    {
        Self {
            chain,
            legs: Arc::new(legs),
        }
    }

    pub fn leg(&self, n: usize, apex: &A) -> C::Stage {
        (self.legs)(n, apex)
    }

    pub fn chain(&self) -> &Arc<C> {
        &self.chain
    }

    /// Checks `πₙ ∘ fₙ₊₁ = fₙ` for `n < depth` on the given apex values.
    pub fn verify(&self, apexes: &[A], depth: usize) -> Result<()> {
        for apex in apexes {
            let mut lower = self.leg(0, apex);
            for n in 0..depth {
                let upper = self.leg(n + 1, apex);
                let commutes = self
                    .chain
                    .project(n, &upper)
                    .map(|p| self.chain.stage_eq(n, &p, &lower))
                    .unwrap_or(false);
                if !commutes {
                    return Err(Error::ConeLawViolation {
                        stage: n,
                        apex: show(apex),
                    });
                }
                lower = upper;
            }
        }
        Ok(())
    }
}

/// The map into the limit that a verified cone corresponds to.
pub struct ConeMap<C: Chain, A> {
    cone: Cone<C, A>,
}

impl<C: Chain, A> ConeMap<C, A>
where
    A: Clone + fmt::Debug + Send + Sync + 'static,
{
    /// `h(x)`, whose stage `n` is the leg `fₙ(x)`.
    pub fn apply(&self, apex: &A) -> LimitElement<C> {
        let legs = Arc::clone(&self.cone.legs);
        let x = apex.clone();
        LimitElement::from_fn(
            Arc::clone(&self.cone.chain),
            alloc::format!("cone at {x:?}"),
            move |n| Ok(legs(n, &x)),
        )
    }
}

/// Cones to maps: the commutation law is verified on `apexes` up to
/// `depth` first.
pub fn cone_to_map<C, A>(cone: &Cone<C, A>, apexes: &[A], depth: usize) -> Result<ConeMap<C, A>>
where
    C: Chain,
    A: Clone + fmt::Debug + Send + Sync + 'static,
{
    cone.verify(apexes, depth)?;
    Ok(ConeMap { cone: cone.clone() })
}

/// Maps to cones: the legs are the stage projections of `h`.
pub fn map_to_cone<C, A, H>(chain: Arc<C>, h: H) -> Cone<C, A>
where
    C: Chain,
    A: fmt::Debug,
    H: Fn(&A) -> LimitElement<C> + Send + Sync + 'static,
{
    Cone::new(chain, move |n, x: &A| h(x).at(n))
}

/// The element at index `n` of the cochain `x₀ → x₁ → …` with
/// `xₙ₊₁ = step(n, xₙ)`. A cochain tuple is fixed by its first element.
pub fn iterate_cochain<X, F>(x0: X, mut step: F, n: usize) -> X
where
    F: FnMut(usize, X) -> X,
{
    (0..n).fold(x0, |x, k| step(k, x))
}

/// `L → L'`: drop the first stage.
pub fn shift_forward<C: Chain>(l: &LimitElement<C>) -> LimitElement<Shifted<C>> {
    let source = l.clone();
    LimitElement::from_fn(
        Arc::new(Shifted(Arc::clone(l.chain()))),
        alloc::format!("shift of {}", l.provenance()),
        move |n| source.try_at(n + 1),
    )
}

/// `L' → L`: stage 0 is forced to `π₀(y₀)`, later stages are taken from
/// the shifted family.
pub fn shift_back<C: Chain>(l: &LimitElement<Shifted<C>>) -> LimitElement<C> {
    let source = l.clone();
    let chain = Arc::clone(&l.chain().0);
    let project_chain = Arc::clone(&chain);
    LimitElement::from_fn(
        chain,
        alloc::format!("unshift of {}", l.provenance()),
        move |n| match n {
            0 => project_chain.project(0, &source.try_at(0)?),
            _ => source.try_at(n - 1),
        },
    )
}

/// `α : P(L) → L^P`, with stage `n` equal to `P(pₙ)(a, g) = (a, pₙ ∘ g)`.
pub fn poly_limit_to<L, C>(chain: Arc<C>, v: &PValue<L, LimitElement<C>>) -> LimitElement<Applied<L, C>>
where
    L: Label,
    C: Chain,
{
    let v = v.clone();
    LimitElement::from_fn(
        Arc::new(Applied::new(chain)),
        alloc::format!("alpha at {:?}", v.label()),
        move |n| v.try_pmap(|child| child.try_at(n)),
    )
}

/// `α⁻¹ : L^P → P(L)`. The label is read at stage 0 and must stay the same
/// at every later stage; that is checked eagerly up to `verify_depth` and
/// lazily whenever a child stage is evaluated.
pub fn poly_limit_from<L, C>(l: &LimitElement<Applied<L, C>>, verify_depth: usize) -> Result<PValue<L, LimitElement<C>>>
where
    L: Label,
    C: Chain,
{
    let root = l.try_at(0)?;
    let label = root.label().clone();
    let arity = root.arity();
    for n in 1..=verify_depth {
        let stage = l.try_at(n)?;
        check_label(&stage, &label, arity, n)?;
    }
    let inner = Arc::clone(l.chain().inner());
    let children: Vec<LimitElement<C>> = (0..arity)
        .map(|b| {
            let source = l.clone();
            let expected = label.clone();
            LimitElement::from_fn(
                Arc::clone(&inner),
                alloc::format!("child {b} of {}", l.provenance()),
                move |n| {
                    let stage = source.try_at(n)?;
                    check_label(&stage, &expected, arity, n)?;
                    Ok(stage.children()[b].clone())
                },
            )
        })
        .collect();
    Ok(PValue::from_parts(label, children))
}

fn check_label<L: Label, X>(stage: &PValue<L, X>, label: &L, arity: usize, n: usize) -> Result<()> {
    if stage.label() != label || stage.arity() != arity {
        return Err(Error::LabelDrift {
            stage: n,
            expected: show(label),
            found: show(stage.label()),
        });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::container::Container;
    use alloc::vec;

    /// The chain of natural numbers truncated at each stage: `Xₙ = {0..=n}`
    /// with `πₙ(x) = min(x, n)`.
    struct Saturating;

    impl Chain for Saturating {
        type Stage = u64;
        fn project(&self, n: usize, upper: &u64) -> Result<u64> {
            Ok((*upper).min(n as u64))
        }
        fn stage_eq(&self, _n: usize, a: &u64, b: &u64) -> bool {
            a == b
        }
    }

    fn saturating(k: u64) -> LimitElement<Saturating> {
        LimitElement::from_fn(Arc::new(Saturating), "sat", move |n| Ok(k.min(n as u64)))
    }

    fn stream_tree(label: u32, depth: usize) -> ApproxTree<u32> {
        let c = Container::uniform(1);
        (0..depth).fold(ApproxTree::trunc(), |t, _| {
            ApproxTree::node(&c, label, vec![t]).unwrap()
        })
    }

    fn constant7() -> LimitElement<WChain<u32>> {
        LimitElement::from_fn(Arc::new(WChain::new()), "const 7", |n| Ok(stream_tree(7, n)))
    }

    #[test]
    fn compat_vacuous_and_positive() {
        assert!(saturating(3).check_compat(0));
        assert!(saturating(3).check_compat(50));
        assert!(constant7().check_compat(50));
    }

    #[test]
    fn compat_detects_mismatch() {
        let bad = LimitElement::from_fn(Arc::new(WChain::<u32>::new()), "bad", |n| {
            Ok(stream_tree(if n == 2 { 8 } else { 7 }, n))
        });
        assert_eq!(bad.first_incompatibility(5), Some(1));
        assert!(!bad.check_compat(5));
        assert!(bad.check_compat(1));
    }

    #[test]
    fn cache_is_shared_between_clones() {
        let l = constant7();
        let m = l.clone();
        let a = l.at(10);
        let b = m.at(10);
        assert!(a.tree_equal(&b));
        assert_eq!(a.shared_size(), b.shared_size());
    }

    #[test]
    fn cone_round_trip() {
        let chain = Arc::new(Saturating);
        let cone: Cone<Saturating, u64> = Cone::new(Arc::clone(&chain), |n, x: &u64| (*x).min(n as u64));
        let h = cone_to_map(&cone, &[0, 1, 5, 100], 16).unwrap();
        for x in [0u64, 1, 5, 100] {
            let hx = h.apply(&x);
            for n in 0..30 {
                assert_eq!(hx.at(n), cone.leg(n, &x));
            }
        }
        let back = map_to_cone(Arc::clone(&chain), move |x: &u64| h.apply(x));
        for x in [0u64, 3, 9] {
            for n in 0..30 {
                assert_eq!(back.leg(n, &x), cone.leg(n, &x));
            }
        }
    }

    #[test]
    fn cone_of_limit_projections_is_identity() {
        let chain = Arc::new(Saturating);
        let cone = map_to_cone(Arc::clone(&chain), |l: &LimitElement<Saturating>| l.clone());
        let elements = [saturating(2), saturating(40)];
        let h = cone_to_map(&cone, &elements, 16).unwrap();
        for l in &elements {
            assert!(h.apply(l).observe_eq(l, 50));
        }
    }

    #[test]
    fn cone_law_violation() {
        let cone: Cone<Saturating, u64> = Cone::new(Arc::new(Saturating), |n, x: &u64| x + n as u64);
        let err = cone_to_map(&cone, &[1], 16).err().unwrap();
        assert_eq!(
            err,
            Error::ConeLawViolation {
                stage: 0,
                apex: "1".into()
            }
        );
    }

    #[test]
    fn constant_stream_cone_gives_constant_stream() {
        let cone: Cone<WChain<u32>, ()> = Cone::new(Arc::new(WChain::new()), |n, _| stream_tree(7, n));
        let h = cone_to_map(&cone, &[()], 16).unwrap();
        assert!(h.apply(&()).observe_eq(&constant7(), 5));
    }

    #[test]
    fn cochain_iteration() {
        assert_eq!(iterate_cochain(0, |_, x| x + 1, 5), 5);
        assert_eq!(iterate_cochain(42, |_, x| x * 2, 0), 42);
        let indices = iterate_cochain(
            vec![],
            |n, mut xs: Vec<usize>| {
                xs.push(n);
                xs
            },
            4,
        );
        assert_eq!(indices, vec![0, 1, 2, 3]);
    }

    #[test]
    fn shift_round_trips() {
        let l = constant7();
        let fwd = shift_forward(&l);
        for n in 0..=5 {
            assert!(fwd.at(n).tree_equal(&l.at(n + 1)));
        }
        assert!(fwd.check_compat(20));
        assert!(shift_back(&fwd).observe_eq(&l, 30));
        let back = shift_back(&fwd);
        assert!(shift_forward(&back).observe_eq(&fwd, 30));
    }

    #[test]
    fn poly_limit_stages() {
        let chain: Arc<WChain<u32>> = Arc::new(WChain::new());
        let v = PValue::from_parts(5u32, vec![constant7()]);
        let to = poly_limit_to(Arc::clone(&chain), &v);
        let s0 = to.at(0);
        assert_eq!(s0.label(), &5);
        assert!(s0.children()[0].is_trunc());
        let s1 = to.at(1);
        assert!(s1.children()[0].tree_equal(&stream_tree(7, 1)));
        assert!(to.check_compat(20));

        let from = poly_limit_from(&to, DEFAULT_VERIFY_DEPTH).unwrap();
        assert_eq!(from.label(), &5);
        assert!(from.children()[0].observe_eq(&constant7(), 30));
        assert!(poly_limit_to(chain, &from).observe_eq(&to, 30));
    }

    #[test]
    fn poly_limit_zero_arity() {
        let chain: Arc<WChain<u32>> = Arc::new(WChain::new());
        let v: PValue<u32, LimitElement<WChain<u32>>> = PValue::from_parts(1, vec![]);
        let to = poly_limit_to(chain, &v);
        for n in 0..10 {
            assert_eq!(to.at(n).label(), &1);
            assert_eq!(to.at(n).arity(), 0);
        }
    }

    #[test]
    fn poly_limit_label_drift() {
        let chain: Arc<Applied<u32, WChain<u32>>> = Arc::new(Applied::new(Arc::new(WChain::new())));
        let l = LimitElement::from_fn(chain, "drifting", |n| {
            let label = if n == 0 { 5 } else { 6 };
            Ok(PValue::from_parts(label, vec![stream_tree(7, n)]))
        });
        let err = poly_limit_from(&l, DEFAULT_VERIFY_DEPTH).unwrap_err();
        assert!(matches!(err, Error::LabelDrift { stage: 1, .. }));
    }

    #[test]
    fn lazy_drift_past_verify_depth() {
        let chain: Arc<Applied<u32, WChain<u32>>> = Arc::new(Applied::new(Arc::new(WChain::new())));
        let l = LimitElement::from_fn(chain, "late drift", |n| {
            let label = if n < 4 { 5 } else { 6 };
            Ok(PValue::from_parts(label, vec![stream_tree(7, n)]))
        });
        let from = poly_limit_from(&l, 2).unwrap();
        assert!(from.children()[0].try_at(3).is_ok());
        assert!(matches!(
            from.children()[0].try_at(4),
            Err(Error::LabelDrift { stage: 4, .. })
        ));
    }
}
