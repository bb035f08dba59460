//! The final coalgebra of a container.
//!
//! Its carrier is the limit of the chain `1 ← P1 ← P²1 ← …`: an element is
//! a compatible family of approximation trees ([`MElement`]). A coalgebra
//! state is sent there by [`unfold`], whose stage `n` is the depth-`n`
//! unrolling of the state ([`approximate`]). `out` and `into` are the two
//! directions of `P(L) ≅ L`, obtained by composing the limit-commutation
//! map with the shift of the chain.
//!
//! The laws that make this final (every coalgebra has exactly one morphism
//! into it) are observational here: [`verify_morphism`] and
//! [`uniqueness_probe`] check them stage by stage up to a finite depth.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use crate::chain::{self, Applied, LimitElement, Shifted, WChain, DEFAULT_VERIFY_DEPTH};
use crate::container::{Container, Label, PValue};
use crate::error::{show, Error, Result};
use crate::tree::ApproxTree;

/// Default bound on explicitly requested approximation depths.
pub const DEFAULT_MAX_DEPTH: usize = 10_000;

/// A coalgebra `γ : C → P(C)` for a container.
///
/// `transition` must be pure: the library may call it several times for
/// the same state and caches results freely.
pub trait Coalgebra {
    type Label: Label;
    type State: Clone + Ord + fmt::Debug;

    fn container(&self) -> &Container<Self::Label>;

    fn transition(&self, state: &Self::State) -> Result<PValue<Self::Label, Self::State>>;

    /// All states, when the state space is finite and closed under `γ`.
    fn states(&self) -> Option<Vec<Self::State>> {
        None
    }

    /// Human-readable name of a state, used in diagnostics and output.
    fn describe(&self, state: &Self::State) -> String {
        show(state)
    }
}

struct FiniteInner<L> {
    container: Container<L>,
    names: Vec<String>,
    index: BTreeMap<String, usize>,
    transitions: Vec<PValue<L, usize>>,
}

/// A finitely presented coalgebra: states `0..n` with names and a table of
/// transitions, validated for arity and closure on construction.
pub struct FiniteCoalgebra<L> {
    inner: Arc<FiniteInner<L>>,
}

impl<L> Clone for FiniteCoalgebra<L> {
    fn clone(&self) -> Self {
        Self {
            inner: Arc::clone(&self.inner),
        }
    }
}

impl<L: Label> FiniteCoalgebra<L> {
    /// States are named `s0, s1, …`.
    pub fn new(container: Container<L>, transitions: Vec<(L, Vec<usize>)>) -> Result<Self> {
        let names = (0..transitions.len()).map(|i| alloc::format!("s{i}")).collect();
        Self::with_names(container, names, transitions)
    }

    pub fn with_names(container: Container<L>, names: Vec<String>, transitions: Vec<(L, Vec<usize>)>) -> Result<Self> {
        assert_eq!(names.len(), transitions.len(), "one name per state");
        let mut index = BTreeMap::new();
        for (i, name) in names.iter().enumerate() {
            if index.insert(name.clone(), i).is_some() {
                return Err(Error::DuplicateState { state: name.clone() });
            }
        }
        let count = transitions.len();
        let transitions = transitions
            .into_iter()
            .map(|(label, children)| {
                if let Some(&bad) = children.iter().find(|&&c| c >= count) {
                    return Err(Error::UnknownState { state: show(&bad) });
                }
                PValue::new(&container, label, children)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            inner: Arc::new(FiniteInner {
                container,
                names,
                index,
                transitions,
            }),
        })
    }

    /// States given by name: `(name, label, child names)`.
    pub fn from_named<N: AsRef<str>>(container: Container<L>, entries: Vec<(N, L, Vec<N>)>) -> Result<Self> {
        let names: Vec<String> = entries.iter().map(|(n, _, _)| String::from(n.as_ref())).collect();
        let lookup: BTreeMap<&str, usize> = names.iter().enumerate().map(|(i, n)| (n.as_str(), i)).collect();
        let transitions = entries
            .iter()
            .map(|(_, label, children)| {
                let ids = children
                    .iter()
                    .map(|c| {
                        lookup.get(c.as_ref()).copied().ok_or_else(|| Error::UnknownState {
                            state: String::from(c.as_ref()),
                        })
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok((label.clone(), ids))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::with_names(container, names, transitions)
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

    pub fn step(&self, state: usize) -> &PValue<L, usize> {
        &self.inner.transitions[state]
    }
}

impl<L: Label> Coalgebra for FiniteCoalgebra<L> {
    type Label = L;
    type State = usize;

    fn container(&self) -> &Container<L> {
        &self.inner.container
    }

    fn transition(&self, state: &usize) -> Result<PValue<L, usize>> {
        self.inner
            .transitions
            .get(*state)
            .cloned()
            .ok_or_else(|| Error::UnknownState { state: show(state) })
    }

    fn states(&self) -> Option<Vec<usize>> {
        Some((0..self.len()).collect())
    }

    fn describe(&self, state: &usize) -> String {
        self.inner.names.get(*state).cloned().unwrap_or_else(|| show(state))
    }
}

impl<L: Label> fmt::Debug for FiniteCoalgebra<L> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut map = f.debug_map();
        for (name, t) in self.inner.names.iter().zip(&self.inner.transitions) {
            map.entry(name, t);
        }
        map.finish()
    }
}

/// A coalgebra given by a transition closure, possibly on an infinite
/// state space.
pub struct FnCoalgebra<L, S, F> {
    container: Container<L>,
    step: Arc<F>,
    states: Option<Arc<[S]>>,
}

impl<L: Clone, S, F> Clone for FnCoalgebra<L, S, F> {
    fn clone(&self) -> Self {
        Self {
            container: self.container.clone(),
            step: Arc::clone(&self.step),
            states: self.states.clone(),
        }
    }
}

impl<L, S, F> FnCoalgebra<L, S, F>
where
    L: Label,
    S: Clone + Ord + fmt::Debug,
    F: Fn(&S) -> Result<PValue<L, S>>,
{
    pub fn new(container: Container<L>, step: F) -> Self {
        Self {
            container,
            step: Arc::new(step),
            states: None,
        }
    }

    /// Declares a finite, closed state enumeration.
    pub fn with_states(mut self, states: Vec<S>) -> Self {
        self.states = Some(states.into());
        self
    }
}

impl<L, S, F> Coalgebra for FnCoalgebra<L, S, F>
where
    L: Label,
    S: Clone + Ord + fmt::Debug,
    F: Fn(&S) -> Result<PValue<L, S>>,
{
    type Label = L;
    type State = S;

    fn container(&self) -> &Container<L> {
        &self.container
    }

    fn transition(&self, state: &S) -> Result<PValue<L, S>> {
        (self.step)(state)
    }

    fn states(&self) -> Option<Vec<S>> {
        self.states.as_ref().map(|s| s.to_vec())
    }
}

/// Unrolled subtrees per `(state, depth)` plus the transitions already
/// taken. Keeping the transitions matters when `step` hands out fresh
/// states on every call, as `out` does: reusing them is what lets later
/// depths hit the tree memo.
pub(crate) struct Memo<S, L> {
    trees: BTreeMap<(S, usize), ApproxTree<L>>,
    steps: BTreeMap<S, (L, Vec<S>)>,
}

impl<S, L> Memo<S, L> {
    pub(crate) fn new() -> Self {
        Self {
            trees: BTreeMap::new(),
            steps: BTreeMap::new(),
        }
    }

    fn size(&self) -> usize {
        self.trees.len() + self.steps.len()
    }
}

/// Depth-`n` unrolling from `root` along `step`, sharing subtrees per
/// `(state, depth)`. Iterative, so `n` is limited by memory only.
pub(crate) fn unroll<S, L, F>(root: &S, n: usize, memo: &mut Memo<S, L>, mut step: F) -> Result<ApproxTree<L>>
where
    S: Clone + Ord,
    L: Label,
    F: FnMut(&S) -> Result<(L, Vec<S>)>,
{
    if n == 0 {
        return Ok(ApproxTree::trunc());
    }
    if let Some(t) = memo.trees.get(&(root.clone(), n)) {
        return Ok(t.clone());
    }
    struct Frame<S, L> {
        state: S,
        depth: usize,
        label: L,
        children: Vec<S>,
        next: usize,
    }
    let Memo {
        trees,
        steps: transitions,
    } = memo;
    let mut expand = |state: &S, depth: usize| -> Result<Frame<S, L>> {
        let (label, children) = match transitions.get(state) {
            Some(t) => t.clone(),
            None => {
                let t = step(state)?;
                transitions.insert(state.clone(), t.clone());
                t
            }
        };
        Ok(Frame {
            state: state.clone(),
            depth,
            label,
            children,
            next: 0,
        })
    };
    let trunc = ApproxTree::trunc();
    let mut stack = alloc::vec![expand(root, n)?];
    while let Some(top) = stack.last_mut() {
        let child_depth = top.depth - 1;
        let mut pending = None;
        while top.next < top.children.len() {
            let child = &top.children[top.next];
            if child_depth > 0 && !trees.contains_key(&(child.clone(), child_depth)) {
                pending = Some(child.clone());
                break;
            }
            top.next += 1;
        }
        match pending {
            Some(child) => {
                let frame = expand(&child, child_depth)?;
                stack.push(frame);
            }
            None => {
                let frame = stack.pop().expect("non-empty stack");
                let kids = frame
                    .children
                    .iter()
                    .map(|c| match child_depth {
                        0 => trunc.clone(),
                        d => trees[&(c.clone(), d)].clone(),
                    })
                    .collect();
                let tree = ApproxTree::node_unchecked(frame.label, frame.depth, kids);
                trees.insert((frame.state, frame.depth), tree);
            }
        }
    }
    Ok(trees[&(root.clone(), n)].clone())
}

fn checked_step<C: Coalgebra>(c: &C, state: &C::State) -> Result<(C::Label, Vec<C::State>)> {
    let (label, children) = c.transition(state)?.into_parts();
    c.container().check_arity(&label, children.len())?;
    Ok((label, children))
}

/// The depth-`n` observation of `state`:
/// `approximate(s, 0) = ·` and
/// `approximate(s, n + 1) = a(approximate(s₀, n), …)` where `γ(s) = (a, [s₀, …])`.
pub fn approximate<C: Coalgebra>(c: &C, state: &C::State, n: usize) -> Result<ApproxTree<C::Label>> {
    approximate_bounded(c, state, n, DEFAULT_MAX_DEPTH)
}

pub fn approximate_bounded<C: Coalgebra>(
    c: &C,
    state: &C::State,
    n: usize,
    bound: usize,
) -> Result<ApproxTree<C::Label>> {
    if n > bound {
        return Err(Error::DepthBoundExceeded { requested: n, bound });
    }
    unroll(state, n, &mut Memo::new(), |s| checked_step(c, s))
}

/// An element of the final coalgebra: a compatible family of
/// approximation trees, stage `n` having depth `n`.
#[derive(Clone)]
pub struct MElement<L: Label> {
    limit: LimitElement<WChain<L>>,
    origin: Option<String>,
}

impl<L: Label> fmt::Debug for MElement<L> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MElement")
            .field("origin", &self.origin)
            .field("provenance", &self.limit.provenance())
            .finish()
    }
}

impl<L: Label> MElement<L> {
    /// Wraps a family of trees. Nothing is checked; see
    /// [`MElement::check_compat`].
    pub fn from_stages<F>(provenance: impl Into<String>, stages: F) -> Self
    where
        F: Fn(usize) -> Result<ApproxTree<L>> + Send + Sync + 'static,
    {
        Self::from_limit(LimitElement::from_fn(Arc::new(WChain::new()), provenance, stages))
    }

    pub fn from_limit(limit: LimitElement<WChain<L>>) -> Self {
        Self { limit, origin: None }
    }

    pub fn limit(&self) -> &LimitElement<WChain<L>> {
        &self.limit
    }

    /// The generating state, for elements produced by [`unfold`].
    pub fn origin(&self) -> Option<&str> {
        self.origin.as_deref()
    }

    /// # Panics
    ///
    /// On hand-built families whose stages cannot be produced. Library-built
    /// elements never panic here.
    pub fn at(&self, n: usize) -> ApproxTree<L> {
        self.limit.at(n)
    }

    pub fn try_at(&self, n: usize) -> Result<ApproxTree<L>> {
        self.limit.try_at(n)
    }

    pub fn check_compat(&self, upto: usize) -> bool {
        self.limit.check_compat(upto)
    }

    /// Equal approximations at every depth `≤ depth`.
    pub fn observe_eq(&self, other: &Self, depth: usize) -> bool {
        self.limit.observe_eq(&other.limit, depth)
    }

    /// First depth at which the approximations differ, if any up to `max`.
    pub fn first_difference(&self, other: &Self, max: usize) -> Option<usize> {
        (0..=max).find(|&n| match (self.try_at(n), other.try_at(n)) {
            (Ok(a), Ok(b)) => !a.tree_equal(&b),
            _ => true,
        })
    }

    pub fn out(&self) -> Result<PValue<L, MElement<L>>> {
        out(self)
    }
}

/// Builds the unfold of `state` with a per-element `(state, depth)` memo.
pub(crate) fn unfold_with<S, L, F>(origin: String, root: S, step: F) -> MElement<L>
where
    S: Clone + Ord + Send + Sync + 'static,
    L: Label,
    F: Fn(&S) -> Result<(L, Vec<S>)> + Send + Sync + 'static,
{
    let memo: spin::Mutex<Memo<S, L>> = spin::Mutex::new(Memo::new());
    let limit = LimitElement::from_fn(Arc::new(WChain::new()), alloc::format!("unfold {origin}"), move |n| {
        // Work on a private copy so `step` may freely evaluate other elements.
        let mut local = core::mem::replace(&mut *memo.lock(), Memo::new());
        let result = unroll(&root, n, &mut local, &step);
        let mut shared = memo.lock();
        if shared.size() < local.size() {
            *shared = local;
        }
        result
    });
    MElement {
        limit,
        origin: Some(origin),
    }
}

/// The unique coalgebra morphism into the final coalgebra, at `state`.
pub fn unfold<C>(c: &C, state: &C::State) -> MElement<C::Label>
where
    C: Coalgebra + Clone + Send + Sync + 'static,
    C::State: Send + Sync + 'static,
{
    let coalgebra = c.clone();
    unfold_with(c.describe(state), state.clone(), move |s| checked_step(&coalgebra, s))
}

/// `out : L → P(L)`, the shift `L ≅ L'` followed by `α⁻¹`.
pub fn out<L: Label>(m: &MElement<L>) -> Result<PValue<L, MElement<L>>> {
    let w: Arc<WChain<L>> = Arc::clone(m.limit.chain());
    let shifted = chain::shift_forward(&m.limit);
    // W_{n+1} is P(W_n) on the nose; this only changes the view.
    let applied = shifted.map_stages(Arc::new(Applied::new(w)), "unrolled", |n, tree| {
        tree.as_pvalue().ok_or(Error::RaggedDepth {
            expected: n + 1,
            found: 0,
        })
    });
    let v = chain::poly_limit_from(&applied, DEFAULT_VERIFY_DEPTH)?;
    Ok(v.pmap(|l| MElement::from_limit(l.clone())))
}

/// `into : P(L) → L`, i.e. `α` followed by the shift back. Stage `n + 1`
/// of the result is `a(m₀ at n, m₁ at n, …)`.
pub fn into<L: Label>(container: &Container<L>, v: PValue<L, MElement<L>>) -> Result<MElement<L>> {
    container.check_arity(v.label(), v.arity())?;
    Ok(into_unchecked(v))
}

pub(crate) fn into_unchecked<L: Label>(v: PValue<L, MElement<L>>) -> MElement<L> {
    let w: Arc<WChain<L>> = Arc::new(WChain::new());
    let v = v.pmap(|m| m.limit.clone());
    let alpha = chain::poly_limit_to(Arc::clone(&w), &v);
    let rolled = alpha.map_stages(Arc::new(Shifted(w)), "rolled", |n, pv| {
        let (label, children) = pv.into_parts();
        if let Some(bad) = children.iter().find(|c| c.depth() != n) {
            return Err(Error::RaggedDepth {
                expected: n,
                found: bad.depth(),
            });
        }
        Ok(ApproxTree::node_unchecked(label, n + 1, children))
    });
    MElement::from_limit(chain::shift_back(&rolled))
}

/// Wrapper ordering an element by identity, so elements can serve as
/// coalgebra states. Two distinct handles may still be observationally
/// equal.
#[derive(Clone, Debug)]
pub struct ElementRef<L: Label>(pub MElement<L>);

impl<L: Label> ElementRef<L> {
    fn addr(&self) -> usize {
        self.0.limit.identity()
    }
}

impl<L: Label> PartialEq for ElementRef<L> {
    fn eq(&self, other: &Self) -> bool {
        self.addr() == other.addr()
    }
}

impl<L: Label> Eq for ElementRef<L> {}

impl<L: Label> PartialOrd for ElementRef<L> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<L: Label> Ord for ElementRef<L> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.addr().cmp(&other.addr())
    }
}

/// The final coalgebra `(L, out)` of a container.
///
/// Its states are element handles, and `out` returns fresh handles, so
/// unfolding this coalgebra finds no shared subtrees: the cost grows with
/// the full tree size of the element, which is exponential in depth for
/// anything that branches infinitely often.
#[derive(Clone)]
pub struct FinalCoalgebra<L> {
    container: Container<L>,
}

impl<L: Label> FinalCoalgebra<L> {
    pub fn new(container: Container<L>) -> Self {
        Self { container }
    }

    pub fn out(&self, m: &MElement<L>) -> Result<PValue<L, MElement<L>>> {
        out(m)
    }

    pub fn into(&self, v: PValue<L, MElement<L>>) -> Result<MElement<L>> {
        into(&self.container, v)
    }
}

impl<L: Label> Coalgebra for FinalCoalgebra<L> {
    type Label = L;
    type State = ElementRef<L>;

    fn container(&self) -> &Container<L> {
        &self.container
    }

    fn transition(&self, state: &ElementRef<L>) -> Result<PValue<L, ElementRef<L>>> {
        Ok(out(&state.0)?.pmap(|m| ElementRef(m.clone())))
    }
}

/// Which states a depth-bounded check visits.
#[derive(Clone, Debug)]
pub enum Scope<S> {
    /// Every state of the coalgebra's enumeration.
    All,
    Sample(Vec<S>),
}

impl<S: Clone> Scope<S> {
    pub(crate) fn resolve<C: Coalgebra<State = S>>(&self, c: &C) -> Result<Vec<S>> {
        match self {
            Scope::All => c.states().ok_or(Error::NeedsFiniteStates),
            Scope::Sample(states) => Ok(states.clone()),
        }
    }
}

/// A map from a coalgebra's states into the final coalgebra, not yet known
/// to be a morphism.
pub struct MorphismCandidate<C: Coalgebra> {
    pub source: C,
    map: Arc<dyn Fn(&C::State) -> MElement<C::Label> + Send + Sync>,
}

impl<C: Coalgebra> MorphismCandidate<C> {
    pub fn new<F>(source: C, map: F) -> Self
    where
        F: Fn(&C::State) -> MElement<C::Label> + Send + Sync + 'static,
    {
        Self {
            source,
            map: Arc::new(map),
        }
    }

    pub fn apply(&self, state: &C::State) -> MElement<C::Label> {
        (self.map)(state)
    }
}

impl<C> MorphismCandidate<C>
where
    C: Coalgebra + Clone + Send + Sync + 'static,
    C::State: Send + Sync + 'static,
{
    /// `unfold` itself as a candidate.
    pub fn unfold(source: C) -> Self {
        let c = source.clone();
        Self::new(source, move |s| unfold(&c, s))
    }
}

/// Checks the morphism square `out ∘ f = P(f) ∘ γ` at every stage
/// `n ≤ depth` for the states in `scope`.
///
/// A violation is reported as [`Error::NotAMorphism`] naming the first
/// failing state and stage.
pub fn verify_morphism<C: Coalgebra>(mc: &MorphismCandidate<C>, scope: &Scope<C::State>, depth: usize) -> Result<()> {
    let c = &mc.source;
    for s in scope.resolve(c)? {
        let fail = |stage| Error::NotAMorphism {
            state: c.describe(&s),
            stage,
        };
        let (label, children) = checked_step(c, &s)?;
        let lhs = match out(&mc.apply(&s)) {
            Ok(v) => v,
            Err(_) => return Err(fail(0)),
        };
        if lhs.label() != &label || lhs.arity() != children.len() {
            return Err(fail(0));
        }
        let rhs: Vec<MElement<C::Label>> = children.iter().map(|x| mc.apply(x)).collect();
        for n in 0..=depth {
            let agree = lhs
                .children()
                .iter()
                .zip(&rhs)
                .all(|(a, b)| match (a.try_at(n), b.try_at(n)) {
                    (Ok(x), Ok(y)) => x.tree_equal(&y),
                    _ => false,
                });
            if !agree {
                return Err(fail(n));
            }
        }
    }
    Ok(())
}

/// For a verified candidate, checks that it agrees with [`unfold`] at every
/// stage `≤ depth`: the observable content of uniqueness.
pub fn uniqueness_probe<C>(mc: &MorphismCandidate<C>, scope: &Scope<C::State>, depth: usize) -> Result<bool>
where
    C: Coalgebra + Clone + Send + Sync + 'static,
    C::State: Send + Sync + 'static,
{
    verify_morphism(mc, scope, depth)?;
    let c = &mc.source;
    for s in scope.resolve(c)? {
        if !mc.apply(&s).observe_eq(&unfold(c, &s), depth) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Checks that `h` is a coalgebra morphism between two coalgebras:
/// `γ_target(h(s)) = P(h)(γ_source(s))` for all states in `scope`.
pub fn check_state_morphism<C, D, H>(source: &C, target: &D, h: H, scope: &Scope<C::State>) -> Result<()>
where
    C: Coalgebra,
    D: Coalgebra<Label = C::Label>,
    H: Fn(&C::State) -> D::State,
{
    for s in scope.resolve(source)? {
        let image = h(&s);
        let lhs = target.transition(&image)?;
        let rhs = source.transition(&s)?.pmap(&h);
        if lhs != rhs {
            return Err(Error::NotAMorphism {
                state: source.describe(&s),
                stage: 0,
            });
        }
    }
    Ok(())
}
