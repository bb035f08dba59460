//! Final coalgebras of containers, constructed as limits of the chain of
//! finite-depth approximations.
//!
//! * [`container`]: signatures and the polynomial functor on values.
//! * [`tree`]: approximation trees, the stages `Pⁿ(1)` of the chain.
//! * [`chain`]: generic chains, limits, cones, shifts and the
//!   limit-commutation map.
//! * [`mtype`]: coalgebras, `approximate`, `unfold`, `out`/`into` and the
//!   finality probes.
//! * [`bisim`]: bisimulation witnesses and partition refinement.
//! * [`indexed`]: the sorted generalization.
//! * [`catalog`]: streams, conaturals and the other standard examples.
//!
//! Equality of infinite objects is observational throughout: two elements
//! agree when all their approximations up to a chosen depth agree.

#![no_std]

extern crate alloc;

pub mod bisim;
pub mod catalog;
pub mod chain;
pub mod container;
mod error;
pub mod indexed;
pub mod mtype;
pub mod tree;

pub use chain::{Chain, LimitElement, WChain};
pub use container::{Container, Label, PValue};
pub use error::{Error, Result};
pub use mtype::{
    approximate, into, out, unfold, Coalgebra, FiniteCoalgebra, FnCoalgebra, MElement, MorphismCandidate, Scope,
};
pub use tree::ApproxTree;
