//! Spec documents: loading with path-precise validation, and writing back
//! with sorted keys.
//!
//! A document carries `"schema_version": "1"` and either a `signature` with
//! a `coalgebra`, or a self-contained `indexed` fragment.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use omegacoalg::bisim::{minimize, Quotient};
use omegacoalg::indexed::{IndexedCoalgebra, IndexedContainer};
use omegacoalg::{Container, FiniteCoalgebra};
use serde_json::{json, Map, Value};

use crate::label::CliLabel;
use crate::CliError;

pub const SCHEMA_VERSION: &str = "1";

#[derive(Clone, Debug)]
pub struct PlainSpec {
    /// Declaration order, kept so documents round-trip.
    pub labels: Vec<CliLabel>,
    pub coalgebra: FiniteCoalgebra<CliLabel>,
}

#[derive(Clone, Debug)]
pub struct IndexedSpec {
    pub coalgebra: IndexedCoalgebra<String, CliLabel>,
}

#[derive(Clone, Debug)]
pub enum Spec {
    Plain(PlainSpec),
    Indexed(IndexedSpec),
}

fn invalid(path: &str, message: impl Into<String>) -> CliError {
    CliError::Invalid {
        path: path.to_owned(),
        message: message.into(),
    }
}

fn join(path: &str, key: &str) -> String {
    if path.is_empty() {
        key.to_owned()
    } else {
        format!("{path}.{key}")
    }
}

fn object<'a>(v: &'a Value, path: &str) -> Result<&'a Map<String, Value>, CliError> {
    v.as_object().ok_or_else(|| invalid(path, "expected an object"))
}

fn array<'a>(v: &'a Value, path: &str) -> Result<&'a Vec<Value>, CliError> {
    v.as_array().ok_or_else(|| invalid(path, "expected an array"))
}

fn string<'a>(v: &'a Value, path: &str) -> Result<&'a str, CliError> {
    v.as_str().ok_or_else(|| invalid(path, "expected a string"))
}

fn natural(v: &Value, path: &str) -> Result<usize, CliError> {
    v.as_u64()
        .and_then(|n| usize::try_from(n).ok())
        .ok_or_else(|| invalid(path, "expected a non-negative integer"))
}

/// Rejects keys outside `allowed` and returns the fields in `required`.
fn fields<'a, const N: usize>(
    map: &'a Map<String, Value>,
    path: &str,
    required: [&str; N],
    allowed: &[&str],
) -> Result<[&'a Value; N], CliError> {
    if let Some(k) = map
        .keys()
        .find(|k| !required.contains(&k.as_str()) && !allowed.contains(&k.as_str()))
    {
        return Err(invalid(&join(path, k), "unexpected key"));
    }
    let mut out = Vec::with_capacity(N);
    for k in required {
        out.push(map.get(k).ok_or_else(|| invalid(&join(path, k), "missing"))?);
    }
    Ok(out.try_into().expect("one value per required key"))
}

/// Unique strings, in order.
fn names(v: &Value, path: &str) -> Result<Vec<String>, CliError> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for (i, x) in array(v, path)?.iter().enumerate() {
        let p = format!("{path}[{i}]");
        let s = string(x, &p)?;
        if !seen.insert(s) {
            return Err(invalid(&p, format!("duplicate entry '{s}'")));
        }
        out.push(s.to_owned());
    }
    Ok(out)
}

/// `gamma` must have exactly one entry per state.
fn gamma_entries<'a>(
    v: &'a Value,
    path: &str,
    states: &'a [String],
) -> Result<Vec<(&'a str, &'a Value, Vec<&'a str>, String)>, CliError> {
    let map = object(v, path)?;
    if let Some(k) = map.keys().find(|k| !states.contains(k)) {
        return Err(invalid(&join(path, k), "not a declared state"));
    }
    let mut out = Vec::new();
    for name in states {
        let p = join(path, name);
        let entry = map
            .get(name)
            .ok_or_else(|| invalid(path, format!("missing entry for state '{name}'")))?;
        let [label, children] = fields(object(entry, &p)?, &p, ["label", "children"], &[])?;
        let cp = join(&p, "children");
        let kids = array(children, &cp)?
            .iter()
            .enumerate()
            .map(|(i, c)| string(c, &format!("{cp}[{i}]")))
            .collect::<Result<Vec<_>, _>>()?;
        out.push((name.as_str(), label, kids, p));
    }
    Ok(out)
}

fn state_index(states: &[String]) -> BTreeMap<&str, usize> {
    states.iter().enumerate().map(|(i, s)| (s.as_str(), i)).collect()
}

fn child_ids(kids: &[&str], index: &BTreeMap<&str, usize>, path: &str) -> Result<Vec<usize>, CliError> {
    kids.iter()
        .enumerate()
        .map(|(i, k)| {
            index
                .get(k)
                .copied()
                .ok_or_else(|| invalid(&format!("{path}.children[{i}]"), format!("unknown state '{k}'")))
        })
        .collect()
}

fn parse_plain(signature: &Value, coalgebra: &Value) -> Result<PlainSpec, CliError> {
    let [labels_v, arity_v] = fields(object(signature, "signature")?, "signature", ["labels", "arity"], &[])?;
    let mut labels = Vec::new();
    let mut by_key: BTreeMap<String, CliLabel> = BTreeMap::new();
    for (i, v) in array(labels_v, "signature.labels")?.iter().enumerate() {
        let p = format!("signature.labels[{i}]");
        let l = CliLabel::from_json(v)
            .ok_or_else(|| invalid(&p, "a label is a string, an integer or an array of labels"))?;
        if by_key.insert(l.key(), l.clone()).is_some() {
            return Err(invalid(&p, format!("duplicate label {l:?}")));
        }
        labels.push(l);
    }
    let arity_map = object(arity_v, "signature.arity")?;
    if let Some(k) = arity_map.keys().find(|k| !by_key.contains_key(*k)) {
        return Err(invalid(&format!("signature.arity.{k}"), "not a declared label"));
    }
    let mut arity = BTreeMap::new();
    for l in &labels {
        let key = l.key();
        let v = arity_map
            .get(&key)
            .ok_or_else(|| invalid("signature.arity", format!("missing arity for label {l:?}")))?;
        arity.insert(l.clone(), natural(v, &format!("signature.arity.{key}"))?);
    }
    let container = Container::finite(arity.iter().map(|(l, n)| (l.clone(), *n)))?;

    let [states_v, gamma_v] = fields(object(coalgebra, "coalgebra")?, "coalgebra", ["states", "gamma"], &[])?;
    let states = names(states_v, "coalgebra.states")?;
    let index = state_index(&states);
    let mut transitions = Vec::new();
    for (_, label_v, kids, p) in gamma_entries(gamma_v, "coalgebra.gamma", &states)? {
        let lp = join(&p, "label");
        let label = CliLabel::from_json(label_v)
            .and_then(|l| by_key.get(&l.key()).filter(|d| **d == l).cloned())
            .ok_or_else(|| invalid(&lp, format!("{label_v} is not a declared label")))?;
        let want = arity[&label];
        if kids.len() != want {
            return Err(invalid(
                &join(&p, "children"),
                format!("label {label:?} has arity {want}, found {} children", kids.len()),
            ));
        }
        transitions.push((label, child_ids(&kids, &index, &p)?));
    }
    let coalgebra = FiniteCoalgebra::with_names(container, states, transitions)?;
    Ok(PlainSpec { labels, coalgebra })
}

fn parse_indexed(v: &Value) -> Result<IndexedSpec, CliError> {
    let [sorts_v, labels_v, states_v, gamma_v] = fields(
        object(v, "indexed")?,
        "indexed",
        ["sorts", "labels", "states", "gamma"],
        &[],
    )?;
    let sorts = names(sorts_v, "indexed.sorts")?;
    let mut entries = Vec::new();
    let mut positions: BTreeMap<(&str, &str), Vec<String>> = BTreeMap::new();
    for (sort, per_sort) in object(labels_v, "indexed.labels")? {
        let sp = format!("indexed.labels.{sort}");
        if !sorts.contains(sort) {
            return Err(invalid(&sp, "not a declared sort"));
        }
        for (label, entry) in object(per_sort, &sp)? {
            let p = join(&sp, label);
            let [arity_v, child_v] = fields(object(entry, &p)?, &p, ["arity", "child_sorts"], &[])?;
            let arity = natural(arity_v, &join(&p, "arity"))?;
            let cp = join(&p, "child_sorts");
            let child_sorts = array(child_v, &cp)?
                .iter()
                .enumerate()
                .map(|(i, c)| {
                    let ip = format!("{cp}[{i}]");
                    let s = string(c, &ip)?;
                    if sorts.iter().any(|x| x == s) {
                        Ok(s.to_owned())
                    } else {
                        Err(invalid(&ip, format!("'{s}' is not a declared sort")))
                    }
                })
                .collect::<Result<Vec<_>, _>>()?;
            if child_sorts.len() != arity {
                return Err(invalid(
                    &cp,
                    format!("arity is {arity} but {} child sorts are given", child_sorts.len()),
                ));
            }
            positions.insert((sort.as_str(), label.as_str()), child_sorts.clone());
            entries.push((sort.clone(), CliLabel::from(label.as_str()), child_sorts));
        }
    }
    let container = IndexedContainer::new(sorts.clone(), entries)?;

    let state_sorts = object(states_v, "indexed.states")?;
    let mut states = Vec::new();
    let mut sort_of = BTreeMap::new();
    for (name, sort_v) in state_sorts {
        let p = format!("indexed.states.{name}");
        let sort = string(sort_v, &p)?;
        if !sorts.iter().any(|s| s == sort) {
            return Err(invalid(&p, format!("'{sort}' is not a declared sort")));
        }
        states.push(name.clone());
        sort_of.insert(name.as_str(), sort);
    }
    let mut out = Vec::new();
    for (name, label_v, kids, p) in gamma_entries(gamma_v, "indexed.gamma", &states)? {
        let sort = sort_of[name];
        let lp = join(&p, "label");
        let label = string(label_v, &lp)?;
        let child_sorts = positions
            .get(&(sort, label))
            .ok_or_else(|| invalid(&lp, format!("'{label}' is not a label of sort '{sort}'")))?;
        if kids.len() != child_sorts.len() {
            return Err(invalid(
                &join(&p, "children"),
                format!(
                    "label '{label}' has arity {}, found {} children",
                    child_sorts.len(),
                    kids.len()
                ),
            ));
        }
        for (i, (kid, want)) in kids.iter().zip(child_sorts).enumerate() {
            let cp = format!("{p}.children[{i}]");
            let found = sort_of
                .get(kid)
                .ok_or_else(|| invalid(&cp, format!("unknown state '{kid}'")))?;
            if found != want {
                return Err(invalid(
                    &cp,
                    format!("sort mismatch: position needs sort '{want}', '{kid}' has sort '{found}'"),
                ));
            }
        }
        out.push((
            name.to_owned(),
            sort.to_owned(),
            CliLabel::from(label),
            kids.iter().map(|k| k.to_string()).collect(),
        ));
    }
    Ok(IndexedSpec {
        coalgebra: IndexedCoalgebra::new(container, out)?,
    })
}

/// The quotient of an indexed coalgebra by bisimilarity, together with
/// the projection onto it.
pub fn indexed_quotient(
    c: &IndexedCoalgebra<String, CliLabel>,
) -> Result<(IndexedCoalgebra<String, CliLabel>, Quotient<usize, (String, CliLabel)>), CliError> {
    let q = minimize(&c.erase())?;
    let entries = (0..q.coalgebra.len())
        .map(|s| {
            let step = q.coalgebra.step(s);
            let (sort, label) = step.label().clone();
            let kids = step
                .children()
                .iter()
                .map(|&x| q.coalgebra.name(x).to_owned())
                .collect();
            (q.coalgebra.name(s).to_owned(), sort, label, kids)
        })
        .collect();
    Ok((IndexedCoalgebra::new(c.base().clone(), entries)?, q))
}

impl Spec {
    pub fn from_json(doc: &Value) -> Result<Self, CliError> {
        let map = object(doc, "")?;
        let [version] = fields(map, "", ["schema_version"], &["signature", "coalgebra", "indexed"])?;
        let version = string(version, "schema_version")?;
        if version != SCHEMA_VERSION {
            return Err(invalid(
                "schema_version",
                format!("unsupported version '{version}', expected '{SCHEMA_VERSION}'"),
            ));
        }
        match (map.get("signature"), map.get("indexed"), map.get("coalgebra")) {
            (Some(_), Some(_), _) => Err(invalid("indexed", "give either signature or indexed, not both")),
            (Some(sig), None, Some(coalg)) => Ok(Spec::Plain(parse_plain(sig, coalg)?)),
            (Some(_), None, None) => Err(invalid("coalgebra", "missing")),
            (None, Some(ix), None) => Ok(Spec::Indexed(parse_indexed(ix)?)),
            (None, Some(_), Some(_)) => Err(invalid(
                "coalgebra",
                "an indexed spec carries its states inside indexed",
            )),
            (None, None, _) => Err(invalid("signature", "missing (or give indexed)")),
        }
    }

    pub fn from_text(text: &str) -> Result<Self, CliError> {
        let doc: Value = serde_json::from_str(text).map_err(|e| invalid("", format!("not valid JSON: {e}")))?;
        Self::from_json(&doc)
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::from_text(&text).map_err(|e| e.in_file(path))
    }

    pub fn to_json(&self) -> Value {
        match self {
            Spec::Plain(p) => {
                let c = &p.coalgebra;
                let arity: Map<String, Value> = p
                    .labels
                    .iter()
                    .map(|l| {
                        (
                            l.key(),
                            Value::from(omegacoalg::Coalgebra::container(c).arity(l).unwrap_or(0)),
                        )
                    })
                    .collect();
                let gamma: Map<String, Value> = (0..c.len())
                    .map(|s| {
                        let step = c.step(s);
                        let kids: Vec<&str> = step.children().iter().map(|&x| c.name(x)).collect();
                        (
                            c.name(s).to_owned(),
                            json!({"label": step.label().to_json(), "children": kids}),
                        )
                    })
                    .collect();
                json!({
                    "schema_version": SCHEMA_VERSION,
                    "signature": {
                        "labels": p.labels.iter().map(CliLabel::to_json).collect::<Vec<_>>(),
                        "arity": arity,
                    },
                    "coalgebra": {"states": c.names(), "gamma": gamma},
                })
            }
            Spec::Indexed(ix) => {
                let c = &ix.coalgebra;
                let base = c.base();
                let labels: Map<String, Value> = base
                    .sorts()
                    .iter()
                    .filter(|s| !base.labels_at(s).is_empty())
                    .map(|s| {
                        let per: Map<String, Value> = base
                            .labels_at(s)
                            .iter()
                            .map(|l| {
                                let cs = base.child_sorts(s, l).unwrap_or(&[]);
                                (l.key(), json!({"arity": cs.len(), "child_sorts": cs}))
                            })
                            .collect();
                        (s.clone(), Value::Object(per))
                    })
                    .collect();
                let states: Map<String, Value> = (0..c.len())
                    .map(|s| (c.name(s).to_owned(), Value::from(c.sort_of(s).as_str())))
                    .collect();
                let gamma: Map<String, Value> = (0..c.len())
                    .map(|s| {
                        let (label, kids) = c.step(s);
                        let kids: Vec<&str> = kids.iter().map(|&x| c.name(x)).collect();
                        (c.name(s).to_owned(), json!({"label": label.key(), "children": kids}))
                    })
                    .collect();
                json!({
                    "schema_version": SCHEMA_VERSION,
                    "indexed": {"sorts": base.sorts(), "labels": labels, "states": states, "gamma": gamma},
                })
            }
        }
    }

    pub fn state_names(&self) -> &[String] {
        match self {
            Spec::Plain(p) => p.coalgebra.names(),
            Spec::Indexed(ix) => ix.coalgebra.names(),
        }
    }

    pub fn state(&self, name: &str) -> Result<usize, CliError> {
        let found = match self {
            Spec::Plain(p) => p.coalgebra.state(name),
            Spec::Indexed(ix) => ix.coalgebra.state(name),
        };
        found.ok_or_else(|| CliError::UnknownState(name.to_owned()))
    }

    /// The quotient by the coarsest bisimulation, each state named after the
    /// smallest name in its class.
    pub fn minimized(&self) -> Result<Spec, CliError> {
        match self {
            Spec::Plain(p) => Ok(Spec::Plain(PlainSpec {
                labels: p.labels.clone(),
                coalgebra: minimize(&p.coalgebra)?.coalgebra,
            })),
            Spec::Indexed(ix) => Ok(Spec::Indexed(IndexedSpec {
                coalgebra: indexed_quotient(&ix.coalgebra)?.0,
            })),
        }
    }

    /// Disjoint union: states become `left.NAME` and `right.NAME`;
    /// signatures are merged and must agree on shared labels.
    pub fn union(&self, other: &Spec) -> Result<Spec, CliError> {
        let prefixed = |spec: &Spec, prefix: &str| -> Value {
            let mut doc = spec.to_json();
            let (states_key, gamma_key) = match spec {
                Spec::Plain(_) => ("coalgebra", "coalgebra"),
                Spec::Indexed(_) => ("indexed", "indexed"),
            };
            let rename = |n: &str| format!("{prefix}.{n}");
            let body = doc[states_key].as_object_mut().expect("written as an object");
            let states = body["states"].take();
            body["states"] = match states {
                Value::Array(xs) => xs
                    .iter()
                    .map(|x| Value::from(rename(x.as_str().unwrap_or_default())))
                    .collect(),
                Value::Object(m) => Value::Object(m.into_iter().map(|(k, v)| (rename(&k), v)).collect()),
                other => other,
            };
            let gamma = doc[gamma_key]["gamma"].take();
            let gamma: Map<String, Value> = gamma
                .as_object()
                .expect("written as an object")
                .iter()
                .map(|(k, v)| {
                    let mut v = v.clone();
                    let kids: Vec<Value> = v["children"]
                        .as_array()
                        .expect("written as an array")
                        .iter()
                        .map(|c| Value::from(rename(c.as_str().unwrap_or_default())))
                        .collect();
                    v["children"] = Value::Array(kids);
                    (rename(k), v)
                })
                .collect();
            doc[gamma_key]["gamma"] = Value::Object(gamma);
            doc
        };
        let a = prefixed(self, "left");
        let b = prefixed(other, "right");
        let merged = match (self, other) {
            (Spec::Plain(_), Spec::Plain(_)) => {
                let mut labels = a["signature"]["labels"].as_array().cloned().unwrap_or_default();
                let mut arity = a["signature"]["arity"].as_object().cloned().unwrap_or_default();
                for (k, n) in b["signature"]["arity"].as_object().cloned().unwrap_or_default() {
                    match arity.get(&k) {
                        Some(m) if *m != n => {
                            return Err(invalid(
                                &format!("signature.arity.{k}"),
                                format!("arity {m} on the left but {n} on the right"),
                            ))
                        }
                        Some(_) => {}
                        None => {
                            arity.insert(k.clone(), n);
                        }
                    }
                }
                for l in b["signature"]["labels"].as_array().cloned().unwrap_or_default() {
                    if !labels.contains(&l) {
                        labels.push(l);
                    }
                }
                let mut states = a["coalgebra"]["states"].as_array().cloned().unwrap_or_default();
                states.extend(b["coalgebra"]["states"].as_array().cloned().unwrap_or_default());
                let mut gamma = a["coalgebra"]["gamma"].as_object().cloned().unwrap_or_default();
                gamma.extend(b["coalgebra"]["gamma"].as_object().cloned().unwrap_or_default());
                json!({
                    "schema_version": SCHEMA_VERSION,
                    "signature": {"labels": labels, "arity": arity},
                    "coalgebra": {"states": states, "gamma": gamma},
                })
            }
            (Spec::Indexed(_), Spec::Indexed(_)) => {
                let mut sorts = a["indexed"]["sorts"].as_array().cloned().unwrap_or_default();
                for s in b["indexed"]["sorts"].as_array().cloned().unwrap_or_default() {
                    if !sorts.contains(&s) {
                        sorts.push(s);
                    }
                }
                let mut labels = a["indexed"]["labels"].as_object().cloned().unwrap_or_default();
                for (sort, per) in b["indexed"]["labels"].as_object().cloned().unwrap_or_default() {
                    let here = labels.entry(sort.clone()).or_insert_with(|| json!({}));
                    let here = here.as_object_mut().expect("written as an object");
                    for (l, entry) in per.as_object().cloned().unwrap_or_default() {
                        match here.get(&l) {
                            Some(e) if *e != entry => {
                                return Err(invalid(
                                    &format!("indexed.labels.{sort}.{l}"),
                                    "declared differently on the left and on the right",
                                ))
                            }
                            Some(_) => {}
                            None => {
                                here.insert(l, entry);
                            }
                        }
                    }
                }
                let mut states = a["indexed"]["states"].as_object().cloned().unwrap_or_default();
                states.extend(b["indexed"]["states"].as_object().cloned().unwrap_or_default());
                let mut gamma = a["indexed"]["gamma"].as_object().cloned().unwrap_or_default();
                gamma.extend(b["indexed"]["gamma"].as_object().cloned().unwrap_or_default());
                json!({
                    "schema_version": SCHEMA_VERSION,
                    "indexed": {"sorts": sorts, "labels": labels, "states": states, "gamma": gamma},
                })
            }
            _ => return Err(invalid("", "cannot combine a plain spec with an indexed one")),
        };
        Spec::from_json(&merged)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fig1() -> Value {
        json!({
            "schema_version": "1",
            "signature": {"labels": ["a", "b", "c"], "arity": {"a": 0, "b": 2, "c": 3}},
            "coalgebra": {"states": ["t", "u"], "gamma": {
                "t": {"label": "b", "children": ["u", "t"]},
                "u": {"label": "a", "children": []}
            }}
        })
    }

    fn parity() -> Value {
        json!({"schema_version": "1", "indexed": {
            "sorts": ["e", "o"],
            "labels": {"e": {"E": {"arity": 1, "child_sorts": ["o"]}}, "o": {"O": {"arity": 1, "child_sorts": ["e"]}}},
            "states": {"p": "e", "q": "o"},
            "gamma": {"p": {"label": "E", "children": ["q"]}, "q": {"label": "O", "children": ["p"]}}
        }})
    }

    fn error_path(doc: Value) -> String {
        match Spec::from_json(&doc).unwrap_err() {
            CliError::Invalid { path, .. } => path,
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn loads_and_round_trips() {
        for doc in [fig1(), parity()] {
            let spec = Spec::from_json(&doc).unwrap();
            assert_eq!(spec.to_json(), doc);
        }
    }

    #[test]
    fn names_the_offending_key() {
        let mut d = fig1();
        d["coalgebra"]["gamma"]["t"]["children"] = json!(["u"]);
        assert_eq!(error_path(d), "coalgebra.gamma.t.children");
        let mut d = fig1();
        d["coalgebra"]["gamma"]["t"]["children"][1] = json!("zz");
        assert_eq!(error_path(d), "coalgebra.gamma.t.children[1]");
        let mut d = fig1();
        d["signature"]["arity"]["b"] = json!(-1);
        assert_eq!(error_path(d), "signature.arity.b");
        let mut d = fig1();
        d["schema_version"] = json!("2");
        assert_eq!(error_path(d), "schema_version");
        let mut d = fig1();
        d["extra"] = json!(1);
        assert_eq!(error_path(d), "extra");
        let mut d = fig1();
        d["coalgebra"]["gamma"]["t"]["label"] = json!("z");
        assert_eq!(error_path(d), "coalgebra.gamma.t.label");
        let mut d = parity();
        d["indexed"]["gamma"]["p"]["children"] = json!(["p"]);
        assert_eq!(error_path(d), "indexed.gamma.p.children[0]");
        let mut d = parity();
        d["coalgebra"] = json!({});
        assert_eq!(error_path(d), "coalgebra");
    }

    #[test]
    fn integer_and_pair_labels() {
        let doc = json!({
            "schema_version": "1",
            "signature": {"labels": [[0, 7], 3], "arity": {"[0,7]": 1, "3": 0}},
            "coalgebra": {"states": ["x", "y"], "gamma": {
                "x": {"label": [0, 7], "children": ["y"]},
                "y": {"label": 3, "children": []}
            }}
        });
        let spec = Spec::from_json(&doc).unwrap();
        assert_eq!(spec.to_json(), doc);
        let mut d = doc.clone();
        d["coalgebra"]["gamma"]["y"]["label"] = json!("3");
        assert_eq!(error_path(d), "coalgebra.gamma.y.label");
    }

    #[test]
    fn minimize_and_union() {
        let spec = Spec::from_json(&fig1()).unwrap();
        let both = spec.union(&spec).unwrap();
        assert_eq!(both.state_names(), ["left.t", "left.u", "right.t", "right.u"]);
        let m = both.minimized().unwrap();
        assert_eq!(m.state_names(), ["left.t", "left.u"]);
        let p = Spec::from_json(&parity()).unwrap();
        assert_eq!(
            p.union(&p).unwrap().minimized().unwrap().state_names(),
            ["left.p", "left.q"]
        );
        assert!(spec.union(&p).is_err());
    }
}
