//! Built-in example specs.

use omegacoalg::catalog::{conat_coalgebra, fig1_coalgebra, parity_coalgebra};
use omegacoalg::indexed::{IndexedCoalgebra, IndexedContainer};
use omegacoalg::{Coalgebra, Container, FiniteCoalgebra};

use crate::label::CliLabel;
use crate::spec::{IndexedSpec, PlainSpec, Spec};
use crate::DemoName;

/// Largest finite conatural in the conat demo.
const CONAT_MAX: usize = 3;

fn plain(c: &FiniteCoalgebra<&'static str>) -> Spec {
    let sig = c.container();
    let source = sig.labels().expect("catalog signatures are finite");
    let labels: Vec<CliLabel> = source.iter().map(|&l| l.into()).collect();
    let container = Container::finite(
        source
            .iter()
            .map(|l| (CliLabel::from(*l), sig.arity(l).expect("label of the signature"))),
    )
    .expect("catalog signatures are valid");
    let transitions = (0..c.len())
        .map(|s| {
            let step = c.step(s);
            ((*step.label()).into(), step.children().to_vec())
        })
        .collect();
    let coalgebra =
        FiniteCoalgebra::with_names(container, c.names().to_vec(), transitions).expect("catalog coalgebras are valid");
    Spec::Plain(PlainSpec { labels, coalgebra })
}

/// `zip` of the alternating 0/1 stream with the constant 7 stream, as a
/// two-state coalgebra over pair labels.
fn stream() -> Spec {
    let labels: Vec<CliLabel> = [0, 1]
        .iter()
        .map(|&a| CliLabel::Tuple(vec![CliLabel::Int(a), CliLabel::Int(7)]))
        .collect();
    let sig = Container::finite(labels.iter().map(|l| (l.clone(), 1))).expect("valid signature");
    let coalgebra = FiniteCoalgebra::with_names(
        sig,
        vec!["z0".into(), "z1".into()],
        vec![(labels[0].clone(), vec![1]), (labels[1].clone(), vec![0])],
    )
    .expect("valid coalgebra");
    Spec::Plain(PlainSpec { labels, coalgebra })
}

fn parity() -> Spec {
    let c = parity_coalgebra();
    let base = c.base();
    let entries = base
        .sorts()
        .iter()
        .flat_map(|s| {
            base.labels_at(s).iter().map(move |l| {
                let cs = base.child_sorts(s, l).expect("declared label");
                (
                    s.to_string(),
                    CliLabel::from(*l),
                    cs.iter().map(|x| x.to_string()).collect(),
                )
            })
        })
        .collect();
    let container = IndexedContainer::new(base.sorts().iter().map(|s| s.to_string()).collect(), entries)
        .expect("valid indexed container");
    let states = (0..c.len())
        .map(|s| {
            let (label, kids) = c.step(s);
            (
                c.name(s).to_owned(),
                c.sort_of(s).to_string(),
                CliLabel::from(*label),
                kids.iter().map(|&k| c.name(k).to_owned()).collect(),
            )
        })
        .collect();
    Spec::Indexed(IndexedSpec {
        coalgebra: IndexedCoalgebra::new(container, states).expect("valid indexed coalgebra"),
    })
}

pub fn spec(name: DemoName) -> Spec {
    match name {
        DemoName::Stream => stream(),
        DemoName::Conat => plain(&conat_coalgebra(CONAT_MAX)),
        DemoName::Fig1 => plain(&fig1_coalgebra()),
        DemoName::Parity => parity(),
    }
}
