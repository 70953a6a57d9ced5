use std::fmt::Write as _;

use loopsmith::ElementSet;
use serde_json::{Map, Value};

/// A value in a flat key/value report.
#[derive(Debug, Clone)]
pub enum Field {
    /// Rendered `yes`/`no` in text.
    Flag(bool),
    Bool(bool),
    Int(u64),
    List(Vec<u64>),
    Text(String),
    /// Text form differs from the JSON value, e.g. `false(p=5)`.
    Annotated(String, Value),
    Missing,
}

impl Field {
    pub fn set(s: &ElementSet) -> Field {
        Field::List(s.iter().map(u64::from).collect())
    }

    pub fn list<T: Into<u64> + Copy>(xs: &[T]) -> Field {
        Field::List(xs.iter().map(|&x| x.into()).collect())
    }

    pub fn int(x: usize) -> Field {
        Field::Int(x as u64)
    }

    fn text(&self) -> String {
        match self {
            Field::Flag(b) => (if *b { "yes" } else { "no" }).to_string(),
            Field::Bool(b) => b.to_string(),
            Field::Int(x) => x.to_string(),
            Field::List(xs) => {
                let parts: Vec<String> = xs.iter().map(|x| x.to_string()).collect();
                format!("[{}]", parts.join(","))
            }
            Field::Text(s) | Field::Annotated(s, _) => s.clone(),
            Field::Missing => "none".to_string(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Field::Flag(b) | Field::Bool(b) => Value::Bool(*b),
            Field::Int(x) => Value::from(*x),
            Field::List(xs) => Value::from(xs.clone()),
            Field::Text(s) => Value::from(s.clone()),
            Field::Annotated(_, v) => v.clone(),
            Field::Missing => Value::Null,
        }
    }
}

/// Ordered fields, grouped into text lines.
#[derive(Debug, Default)]
pub struct Report {
    lines: Vec<Vec<(String, Field)>>,
}

impl Report {
    pub fn new() -> Self {
        Report::default()
    }

    /// Starts a new text line.
    pub fn line(&mut self) -> &mut Self {
        self.lines.push(Vec::new());
        self
    }

    pub fn put(&mut self, key: impl Into<String>, value: Field) -> &mut Self {
        if self.lines.is_empty() {
            self.lines.push(Vec::new());
        }
        self.lines.last_mut().unwrap().push((key.into(), value));
        self
    }

    pub fn render(&self, json: bool) -> String {
        if json {
            let mut map = Map::new();
            for (k, v) in self.lines.iter().flatten() {
                map.entry(k.clone()).or_insert_with(|| v.json());
            }
            let mut s = serde_json::to_string_pretty(&Value::Object(map)).unwrap();
            s.push('\n');
            s
        } else {
            let mut s = String::new();
            for line in self.lines.iter().filter(|l| !l.is_empty()) {
                let parts: Vec<String> = line
                    .iter()
                    .map(|(k, v)| format!("{k}={}", v.text()))
                    .collect();
                writeln!(s, "{}", parts.join(" ")).unwrap();
            }
            s
        }
    }
}
