//! Labels as they appear in spec files: strings, integers, or arrays of
//! labels (pairs from `zip` and the like).

use std::fmt;

use serde_json::Value;

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CliLabel {
    Int(i64),
    Str(String),
    Tuple(Vec<CliLabel>),
}

impl CliLabel {
    /// Reads a label; `None` for anything that is not a string, an integer
    /// or an array of labels.
    pub fn from_json(v: &Value) -> Option<Self> {
        match v {
            Value::String(s) => Some(Self::Str(s.clone())),
            Value::Number(n) => n.as_i64().map(Self::Int),
            Value::Array(xs) => xs.iter().map(Self::from_json).collect::<Option<_>>().map(Self::Tuple),
            _ => None,
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            Self::Int(n) => Value::from(*n),
            Self::Str(s) => Value::from(s.as_str()),
            Self::Tuple(xs) => Value::Array(xs.iter().map(Self::to_json).collect()),
        }
    }

    /// The text used for this label as a JSON object key: strings as they
    /// are, everything else as compact JSON.
    pub fn key(&self) -> String {
        match self {
            Self::Str(s) => s.clone(),
            other => other.to_json().to_string(),
        }
    }
}

impl From<&str> for CliLabel {
    fn from(s: &str) -> Self {
        Self::Str(s.to_owned())
    }
}

impl fmt::Display for CliLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.key())
    }
}

// Error messages from the library print labels with `Debug`.
impl fmt::Debug for CliLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_json())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn round_trip_and_keys() {
        for v in [json!("a"), json!(3), json!([0, 7]), json!([["x", 1], "y"])] {
            let l = CliLabel::from_json(&v).unwrap();
            assert_eq!(l.to_json(), v);
        }
        assert_eq!(CliLabel::from_json(&json!("b")).unwrap().key(), "b");
        assert_eq!(CliLabel::from_json(&json!([0, 7])).unwrap().key(), "[0,7]");
        assert_eq!(format!("{:?}", CliLabel::from("b")), "\"b\"");
    }

    #[test]
    fn rejects_other_values() {
        for v in [json!(1.5), json!(null), json!(true), json!({"a": 1}), json!([1, null])] {
            assert!(CliLabel::from_json(&v).is_none(), "{v}");
        }
    }
}
