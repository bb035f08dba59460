//! The subcommands, as functions from a loaded spec to printed output and
//! an exit code.

use omegacoalg::bisim::{
    diagonal_bisim, distinguishing_depth, minimize as quotient, partition_refine, verify_bisim, witness_from_partition,
    Partition,
};
use omegacoalg::indexed::{
    i_into, i_out, iapproximate, idistinguishing_depth, ipartition_refine, iunfold, iuniqueness_probe,
    iverify_morphism, well_sorted, IndexedCoalgebra,
};
use omegacoalg::mtype::{uniqueness_probe, verify_morphism};
use omegacoalg::{approximate, into, out, unfold, Coalgebra, FiniteCoalgebra, MorphismCandidate, Scope};
use serde_json::{json, Value};

use crate::label::CliLabel;
use crate::render;
use crate::spec::{indexed_quotient, Spec};
use crate::{Algorithm, CliError, Format, Outcome};

pub const DEFAULT_CHECK_DEPTH: usize = 30;

pub fn approx(spec: &Spec, state: &str, depth: usize, format: Format) -> Result<Outcome, CliError> {
    let s = spec.state(state)?;
    let (tree, sort) = match spec {
        Spec::Plain(p) => (approximate(&p.coalgebra, &s, depth)?, None),
        Spec::Indexed(ix) => {
            let t = iapproximate(&ix.coalgebra, s, depth)?;
            (t.tree, Some(t.sort))
        }
    };
    render::printable(&tree)?;
    let stdout = match (format, sort) {
        (Format::Text, _) => format!("{tree}\n"),
        (Format::Json, None) => format!("{}\n", render::tree_json(&tree)),
        (Format::Json, Some(sort)) => {
            format!(
                "{{\"sort\":{},\"tree\":{}}}\n",
                Value::from(sort),
                render::tree_json(&tree)
            )
        }
    };
    Ok(Outcome::ok(stdout))
}

fn distinguish(spec: &Spec, s: usize, t: usize, max: usize) -> Result<Option<usize>, CliError> {
    Ok(match spec {
        Spec::Plain(p) => distinguishing_depth(&p.coalgebra, &s, &t, max)?,
        Spec::Indexed(ix) => idistinguishing_depth(&ix.coalgebra, s, t, max)?,
    })
}

fn partition(spec: &Spec) -> Result<Partition<usize>, CliError> {
    Ok(match spec {
        Spec::Plain(p) => partition_refine(&p.coalgebra)?,
        Spec::Indexed(ix) => ipartition_refine(&ix.coalgebra)?,
    })
}

fn sort_of(spec: &Spec, s: usize) -> Option<&str> {
    match spec {
        Spec::Plain(_) => None,
        Spec::Indexed(ix) => Some(ix.coalgebra.sort_of(s)),
    }
}

/// Classes of states with equal approximations at `depth`.
fn bounded_classes(spec: &Spec, depth: usize) -> Result<Vec<Vec<usize>>, CliError> {
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for s in 0..spec.state_names().len() {
        let mut home = None;
        for (i, class) in classes.iter().enumerate() {
            let r = class[0];
            if sort_of(spec, r) == sort_of(spec, s) && distinguish(spec, r, s, depth)?.is_none() {
                home = Some(i);
                break;
            }
        }
        match home {
            Some(i) => classes[i].push(s),
            None => classes.push(vec![s]),
        }
    }
    Ok(classes)
}

pub fn bisim(
    spec: &Spec,
    pair: Option<(&str, &str)>,
    algorithm: Algorithm,
    depth: Option<usize>,
    format: Format,
) -> Result<Outcome, CliError> {
    let bounded_depth = match (algorithm, depth) {
        (Algorithm::Bounded, None) => {
            return Err(CliError::Usage("--algorithm bounded needs --depth N".into()));
        }
        (Algorithm::Bounded, Some(d)) => Some(d),
        (Algorithm::Partition, _) => None,
    };
    let names = spec.state_names();
    let Some((left, right)) = pair else {
        let classes = match bounded_depth {
            Some(d) => bounded_classes(spec, d)?,
            None => partition(spec)?.blocks().to_vec(),
        };
        let mut blocks: Vec<Vec<&str>> = classes
            .iter()
            .map(|b| {
                let mut b: Vec<&str> = b.iter().map(|&s| names[s].as_str()).collect();
                b.sort_unstable();
                b
            })
            .collect();
        blocks.sort_unstable();
        let stdout = match format {
            Format::Text => blocks.iter().map(|b| format!("{}\n", b.join(" "))).collect(),
            Format::Json => render::line(&json!({ "blocks": blocks })),
        };
        return Ok(Outcome::ok(stdout));
    };
    let (s, t) = (spec.state(left)?, spec.state(right)?);
    if let (Some(a), Some(b)) = (sort_of(spec, s), sort_of(spec, t)) {
        if a != b {
            return Err(CliError::SortMismatch {
                left: left.to_owned(),
                right: right.to_owned(),
                left_sort: a.to_owned(),
                right_sort: b.to_owned(),
            });
        }
    }
    let verdict = match bounded_depth {
        Some(d) => distinguish(spec, s, t, d)?,
        None if partition(spec)?.same_block(&s, &t) => None,
        // states that are not bisimilar differ within |S| steps
        None => {
            Some(distinguish(spec, s, t, names.len())?.expect("states in different blocks differ within |S| steps"))
        }
    };
    let stdout = match (format, verdict) {
        (Format::Text, None) => "bisimilar\n".to_owned(),
        (Format::Text, Some(k)) => format!("distinguishable at depth {k}\n"),
        (Format::Json, None) => render::line(&json!({"bisimilar": true})),
        (Format::Json, Some(k)) => render::line(&json!({"bisimilar": false, "depth": k})),
    };
    Ok(Outcome {
        stdout,
        code: if verdict.is_none() { 0 } else { 1 },
    })
}

pub fn minimize(spec: &Spec) -> Result<Outcome, CliError> {
    Ok(Outcome::ok(render::document(&spec.minimized()?.to_json())))
}

type Check = (&'static str, Result<(), String>);

fn all_states<F: FnMut(usize) -> Result<(), String>>(n: usize, f: F) -> Result<(), String> {
    (0..n).try_for_each(f)
}

fn plain_checks(c: &FiniteCoalgebra<CliLabel>, depth: usize) -> Vec<Check> {
    let n = c.len();
    let err = |e: omegacoalg::Error| e.to_string();
    vec![
        (
            "compatibility",
            all_states(n, |s| match unfold(c, &s).limit().first_incompatibility(depth) {
                None => Ok(()),
                Some(k) => Err(format!("unfold({}) breaks compatibility at stage {k}", c.name(s))),
            }),
        ),
        (
            "out/into round trip",
            all_states(n, |s| {
                let m = unfold(c, &s);
                let v = out(&m).map_err(err)?;
                if v.label() != c.step(s).label() {
                    return Err(format!("out(unfold({})) has the wrong label", c.name(s)));
                }
                for (child, &x) in v.children().iter().zip(c.step(s).children()) {
                    if !child.observe_eq(&unfold(c, &x), depth) {
                        return Err(format!("out(unfold({})) has the wrong child {}", c.name(s), c.name(x)));
                    }
                }
                let back = into(c.container(), v).map_err(err)?;
                if !back.observe_eq(&m, depth) {
                    return Err(format!("into(out(m)) differs from m at {}", c.name(s)));
                }
                Ok(())
            }),
        ),
        (
            "unfold is a morphism",
            verify_morphism(&MorphismCandidate::unfold(c.clone()), &Scope::All, depth).map_err(err),
        ),
        ("uniqueness through the quotient", {
            quotient(c).map_err(err).and_then(|q| {
                let candidate = MorphismCandidate::new(c.clone(), move |s| {
                    unfold(&q.coalgebra, &q.project(s).expect("every state has a block"))
                });
                match uniqueness_probe(&candidate, &Scope::All, depth).map_err(err)? {
                    true => Ok(()),
                    false => Err("the quotient map disagrees with unfold".into()),
                }
            })
        }),
        (
            "bisimulation witnesses",
            diagonal_bisim(c)
                .and_then(|d| verify_bisim(c, &d))
                .and_then(|_| partition_refine(c))
                .and_then(|p| witness_from_partition(c, &p))
                .and_then(|w| verify_bisim(c, &w))
                .map_err(err),
        ),
        (
            "partition agrees with bounded",
            partition_refine(c).map_err(err).and_then(|p| {
                all_states(n, |s| {
                    all_states(n, |t| {
                        let bounded = distinguishing_depth(c, &s, &t, n).map_err(err)?.is_none();
                        match bounded == p.same_block(&s, &t) {
                            true => Ok(()),
                            false => Err(format!("disagreement on ({}, {})", c.name(s), c.name(t))),
                        }
                    })
                })
            }),
        ),
    ]
}

fn indexed_checks(c: &IndexedCoalgebra<String, CliLabel>, depth: usize) -> Vec<Check> {
    let n = c.len();
    let ic = c.base();
    let err = |e: omegacoalg::Error| e.to_string();
    let unfolded = |s: usize| iunfold(c, s).map_err(err);
    vec![
        (
            "well-sortedness",
            all_states(n, |s| {
                for k in 0..=depth {
                    if !well_sorted(ic, &iapproximate(c, s, k).map_err(err)?) {
                        return Err(format!("approximation of {} at depth {k} is ill-sorted", c.name(s)));
                    }
                }
                Ok(())
            }),
        ),
        (
            "compatibility",
            all_states(n, |s| match unfolded(s)?.element.limit().first_incompatibility(depth) {
                None => Ok(()),
                Some(k) => Err(format!("unfold({}) breaks compatibility at stage {k}", c.name(s))),
            }),
        ),
        (
            "out/into round trip",
            all_states(n, |s| {
                let m = unfolded(s)?;
                let (label, children) = i_out(ic, &m).map_err(err)?;
                for (child, &x) in children.iter().zip(c.step(s).1) {
                    if !child.observe_eq(&unfolded(x)?, depth) {
                        return Err(format!("out(unfold({})) has the wrong child {}", c.name(s), c.name(x)));
                    }
                }
                let back = i_into(ic, m.sort.clone(), label, children).map_err(err)?;
                if !back.observe_eq(&m, depth) {
                    return Err(format!("into(out(m)) differs from m at {}", c.name(s)));
                }
                Ok(())
            }),
        ),
        ("unfold is a morphism", {
            let owned = c.clone();
            iverify_morphism(c, move |s| iunfold(&owned, s).expect("states are valid"), depth).map_err(err)
        }),
        ("uniqueness through the quotient", {
            match indexed_quotient(c).map_err(|e| e.to_string()).and_then(|(qc, q)| {
                let f = move |s: usize| {
                    iunfold(&qc, q.project(&s).expect("every state has a block")).expect("states are valid")
                };
                iuniqueness_probe(c, f, depth).map_err(err)
            }) {
                Ok(true) => Ok(()),
                Ok(false) => Err("the quotient map disagrees with unfold".into()),
                Err(e) => Err(e),
            }
        }),
        ("bisimulation witnesses", {
            let erased = c.erase();
            diagonal_bisim(&erased)
                .and_then(|d| verify_bisim(&erased, &d))
                .and_then(|_| partition_refine(&erased))
                .and_then(|p| witness_from_partition(&erased, &p))
                .and_then(|w| verify_bisim(&erased, &w))
                .map_err(err)
        }),
        (
            "partition agrees with bounded",
            ipartition_refine(c).map_err(err).and_then(|p| {
                all_states(n, |s| {
                    all_states(n, |t| {
                        let bounded =
                            c.sort_of(s) == c.sort_of(t) && idistinguishing_depth(c, s, t, n).map_err(err)?.is_none();
                        match bounded == p.same_block(&s, &t) {
                            true => Ok(()),
                            false => Err(format!("disagreement on ({}, {})", c.name(s), c.name(t))),
                        }
                    })
                })
            }),
        ),
    ]
}

pub fn check(spec: &Spec, depth: usize, format: Format) -> Result<Outcome, CliError> {
    let checks = match spec {
        Spec::Plain(p) => plain_checks(&p.coalgebra, depth),
        Spec::Indexed(ix) => indexed_checks(&ix.coalgebra, depth),
    };
    let passed = checks.iter().all(|(_, r)| r.is_ok());
    let stdout = match format {
        Format::Text => checks
            .iter()
            .map(|(name, r)| match r {
                Ok(()) => format!("PASS {name}\n"),
                Err(detail) => format!("FAIL {name}: {detail}\n"),
            })
            .collect(),
        Format::Json => {
            let rows: Vec<Value> = checks
                .iter()
                .map(|(name, r)| match r {
                    Ok(()) => json!({"name": name, "passed": true}),
                    Err(detail) => json!({"name": name, "passed": false, "detail": detail}),
                })
                .collect();
            render::line(&json!({"checks": rows, "depth": depth, "passed": passed}))
        }
    };
    Ok(Outcome {
        stdout,
        code: if passed { 0 } else { 1 },
    })
}
