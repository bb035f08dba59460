//! Output formatting. JSON objects are written with sorted keys so that
//! output is byte-for-byte reproducible.

use omegacoalg::ApproxTree;
use serde_json::Value;

use crate::label::CliLabel;
use crate::CliError;

/// Largest tree, counted with repeated subtrees expanded, that `approx`
/// will print.
pub const PRINT_LIMIT: u128 = 2_000_000;

pub fn document(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values always serialize");
    s.push('\n');
    s
}

pub fn line(v: &Value) -> String {
    let mut s = v.to_string();
    s.push('\n');
    s
}

pub fn printable(t: &ApproxTree<CliLabel>) -> Result<(), CliError> {
    let size = t.expanded_size();
    if size > PRINT_LIMIT {
        return Err(CliError::Usage(format!(
            "the approximation has {size} nodes once shared subtrees are expanded; refusing to print more than {PRINT_LIMIT}"
        )));
    }
    Ok(())
}

/// Compact JSON for a tree: `null` for truncation, otherwise
/// `{"children":[…],"label":L}`. Iterative, so depth is not limited by
/// the stack.
pub fn tree_json(t: &ApproxTree<CliLabel>) -> String {
    enum Tok<'a> {
        Tree(&'a ApproxTree<CliLabel>),
        Text(&'static str),
        Owned(String),
    }
    let mut out = String::new();
    let mut stack = vec![Tok::Tree(t)];
    while let Some(tok) = stack.pop() {
        match tok {
            Tok::Text(s) => out.push_str(s),
            Tok::Owned(s) => out.push_str(&s),
            Tok::Tree(t) => match t.label() {
                None => out.push_str("null"),
                Some(l) => {
                    out.push_str("{\"children\":[");
                    stack.push(Tok::Owned(format!("],\"label\":{}}}", l.to_json())));
                    for (i, c) in t.children().iter().enumerate().rev() {
                        stack.push(Tok::Tree(c));
                        if i > 0 {
                            stack.push(Tok::Text(","));
                        }
                    }
                }
            },
        }
    }
    out
}
