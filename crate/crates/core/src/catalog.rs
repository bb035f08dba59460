//! Worked instances: streams, conatural numbers, the three-label tree
//! signature and a two-sorted parity example.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::container::{Container, Label, PValue};
use crate::error::Result;
use crate::indexed::{IndexedCoalgebra, IndexedContainer};
use crate::mtype::{into_unchecked, out, unfold, unfold_with, ElementRef, FiniteCoalgebra, MElement};

/// Streams: every label has exactly one position.
pub fn stream_container<L: Label>() -> Container<L> {
    Container::uniform(1)
}

pub fn head<L: Label>(m: &MElement<L>) -> Result<L> {
    Ok(out(m)?.into_parts().0)
}

pub fn tail<L: Label>(m: &MElement<L>) -> Result<MElement<L>> {
    let (_, mut children) = out(m)?.into_parts();
    Ok(children.pop().expect("stream nodes have one child"))
}

pub fn cons<L: Label>(a: L, m: MElement<L>) -> MElement<L> {
    into_unchecked(PValue::from_parts(a, vec![m]))
}

pub fn constant_stream<L: Label>(a: L) -> MElement<L> {
    unfold_with(format!("constant {a:?}"), (), move |_| Ok((a.clone(), vec![()])))
}

/// `a, b, a, b, ...`
pub fn alternating_stream<L: Label>(a: L, b: L) -> MElement<L> {
    unfold_with(format!("alternating {a:?} {b:?}"), false, move |odd| {
        Ok((if *odd { b.clone() } else { a.clone() }, vec![!*odd]))
    })
}

/// The unfold of `(xs, ys) ↦ ((head xs, head ys), (tail xs, tail ys))`.
pub fn zip<A: Label, B: Label>(xs: &MElement<A>, ys: &MElement<B>) -> MElement<(A, B)> {
    let root = (ElementRef(xs.clone()), ElementRef(ys.clone()));
    unfold_with(String::from("zip"), root, |(x, y)| {
        let (a, xt) = out(&x.0)?.into_parts();
        let (b, yt) = out(&y.0)?.into_parts();
        let next = xt.into_iter().zip(yt).map(|(x, y)| (ElementRef(x), ElementRef(y)));
        Ok(((a, b), next.collect()))
    })
}

/// The stream `g(0), g(1), ...`.
pub fn stream_from_function<L, G>(g: G) -> MElement<L>
where
    L: Label,
    G: Fn(usize) -> L + Send + Sync + 'static,
{
    unfold_with(String::from("function"), 0usize, move |k| Ok((g(*k), vec![k + 1])))
}

/// `k ↦ head(tailᵏ(m))`, read off the stage `k + 1` approximation.
pub fn stream_to_function<L: Label>(m: &MElement<L>) -> impl Fn(usize) -> L {
    let m = m.clone();
    move |k| {
        let mut t = m.at(k + 1);
        for _ in 0..k {
            t = t.children()[0].clone();
        }
        t.label().expect("stage k+1 has a label at layer k").clone()
    }
}

/// `a` a leaf, `b` binary, `c` ternary.
pub fn fig1_signature() -> Container<&'static str> {
    Container::finite([("a", 0), ("b", 2), ("c", 3)]).expect("distinct labels")
}

/// `t ↦ b(u, t)`, `u ↦ a`.
pub fn fig1_coalgebra() -> FiniteCoalgebra<&'static str> {
    FiniteCoalgebra::from_named(fig1_signature(), vec![("t", "b", vec!["u", "t"]), ("u", "a", vec![])])
        .expect("closed and well-arity")
}

/// `Z` a leaf, `S` unary.
pub fn conat_signature() -> Container<&'static str> {
    Container::finite([("Z", 0), ("S", 1)]).expect("distinct labels")
}

/// States `inf` (an `S` loop) and `0..=k` with `i ↦ S(i-1)`, `0 ↦ Z`.
pub fn conat_coalgebra(k: usize) -> FiniteCoalgebra<&'static str> {
    let mut entries: Vec<(String, &'static str, Vec<String>)> =
        vec![(String::from("inf"), "S", vec![String::from("inf")])];
    entries.push((String::from("0"), "Z", vec![]));
    for i in 1..=k {
        entries.push((format!("{i}"), "S", vec![format!("{}", i - 1)]));
    }
    FiniteCoalgebra::from_named(conat_signature(), entries).expect("closed and well-arity")
}

pub fn conat_infinity() -> MElement<&'static str> {
    unfold(&conat_coalgebra(0), &0)
}

pub fn conat_of(k: usize) -> MElement<&'static str> {
    let c = conat_coalgebra(k);
    let s = c.state(&format!("{k}")).expect("state k exists");
    unfold(&c, &s)
}

/// Sorts `e`, `o`; `E` at `e` has one child of sort `o` and vice versa.
pub fn parity_container() -> IndexedContainer<&'static str, &'static str> {
    IndexedContainer::new(vec!["e", "o"], vec![("e", "E", vec!["o"]), ("o", "O", vec!["e"])])
        .expect("sorts are declared")
}

/// `p : e ↦ E(q)`, `q : o ↦ O(p)`.
pub fn parity_coalgebra() -> IndexedCoalgebra<&'static str, &'static str> {
    IndexedCoalgebra::new(
        parity_container(),
        vec![("p", "e", "E", vec!["q"]), ("q", "o", "O", vec!["p"])],
    )
    .expect("well sorted")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bisim::bounded_bisim;
    use crate::mtype::approximate;
    use crate::tree::{enumerate_w, ApproxTree, DEFAULT_ENUMERATION_BOUND};
    use alloc::string::ToString;

    fn node<L: Label>(label: L, children: Vec<ApproxTree<L>>) -> ApproxTree<L> {
        let depth = children.iter().map(|c| c.depth()).max().unwrap_or(0) + 1;
        ApproxTree::node_unchecked(label, depth, children)
    }

    #[test]
    fn head_tail_cons() {
        let seven = constant_stream(7u32);
        assert_eq!(head(&seven).unwrap(), 7);
        assert!(tail(&seven).unwrap().observe_eq(&seven, 5));
        let s = cons(3, seven.clone());
        assert_eq!(s.at(2), node(3, vec![node(7, vec![ApproxTree::trunc()])]));
        assert_eq!(head(&s).unwrap(), 3);
        let back = cons(head(&seven).unwrap(), tail(&seven).unwrap());
        assert!(back.observe_eq(&seven, 20));
    }

    #[test]
    fn zip_example() {
        let z = zip(&alternating_stream(0u32, 1), &constant_stream(7u32));
        assert_eq!(z.at(2), node((0, 7), vec![node((1, 7), vec![ApproxTree::trunc()])]));
        assert_eq!(head(&z).unwrap(), (0, 7));
        assert!(z.check_compat(20));
    }

    #[test]
    fn zip_law() {
        let xs = stream_from_function(|k| (k * k % 5) as u8);
        let ys = alternating_stream('a', 'b');
        let z = zip(&xs, &ys);
        let rhs = cons(
            (head(&xs).unwrap(), head(&ys).unwrap()),
            zip(&tail(&xs).unwrap(), &tail(&ys).unwrap()),
        );
        assert!(z.observe_eq(&rhs, 50));
    }

    #[test]
    fn stream_function_round_trip() {
        let s = stream_from_function(|k| k);
        assert_eq!(
            s.at(3),
            node(0, vec![node(1, vec![node(2, vec![ApproxTree::trunc()])])])
        );
        let g = stream_to_function(&s);
        assert!((0..=100).all(|k| g(k) == k));
        let again = stream_from_function(stream_to_function_owned(&s));
        assert!(again.observe_eq(&s, 100));
        let mut t = s.clone();
        for k in 0..10 {
            assert_eq!(head(&t).unwrap(), g(k));
            t = tail(&t).unwrap();
        }
    }

    fn stream_to_function_owned<L: Label>(m: &MElement<L>) -> impl Fn(usize) -> L + Send + Sync + 'static {
        let m = m.clone();
        move |k| stream_to_function(&m)(k)
    }

    #[test]
    fn fig1() {
        let sig = fig1_signature();
        assert_eq!(sig.arity(&"c"), Some(3));
        assert_eq!(enumerate_w(&sig, 2, DEFAULT_ENUMERATION_BOUND).unwrap().len(), 37);
        let c = fig1_coalgebra();
        let t = c.state("t").unwrap();
        assert_eq!(approximate(&c, &t, 1).unwrap().to_string(), "b(·,·)");
        assert_eq!(approximate(&c, &t, 2).unwrap().to_string(), "b(a, b(·,·))");
    }

    #[test]
    fn conats() {
        assert_eq!(conat_infinity().at(2).to_string(), "S(S(·))");
        for n in 1..5 {
            assert_eq!(conat_of(0).at(n).to_string(), "Z");
        }
        assert_eq!(conat_of(2).at(5).to_string(), "S(S(Z))");
        assert_eq!(conat_of(3).at(2).to_string(), "S(S(·))");
        let c = conat_coalgebra(10);
        let inf = c.state("inf").unwrap();
        for k in 0..=10 {
            let s = c.state(&k.to_string()).unwrap();
            assert!(!bounded_bisim(&c, &inf, &s, k + 1).unwrap());
            assert!(bounded_bisim(&c, &inf, &s, k).unwrap());
        }
        // first difference at min + 1, and still apart at max + 1
        assert_eq!(conat_of(2).first_difference(&conat_of(4), 10), Some(3));
        assert!(!conat_of(2).observe_eq(&conat_of(4), 5));
    }

    #[test]
    fn parity() {
        let c = parity_coalgebra();
        assert_eq!(c.sort_of(c.state("q").unwrap()), &"o");
        assert_eq!(c.base().child_sort(&"e", &"E", 0), Some(&"o"));
    }
}
