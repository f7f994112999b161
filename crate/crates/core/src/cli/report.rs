use std::collections::HashSet;

use serde_json::{json, Map, Value};

use crate::field::Field;
use crate::milnor::{CanonicalForm, FiniteCanonical, FiniteValue};

/// An ordered list of `key=value` lines with a parallel JSON object.
/// Repeated keys become arrays in the JSON form.
#[derive(Debug, Clone, Default)]
pub struct Report {
    lines: Vec<String>,
    json: Map<String, Value>,
    repeated: HashSet<String>,
    failed: bool,
}

pub(crate) fn finite_json(c: &FiniteCanonical) -> Value {
    match c.value {
        FiniteValue::Rank(n) => json!({ "degree": 0, "rank": n }),
        FiniteValue::Exponent(e) => json!({
            "degree": 1,
            "exp": e,
            "mod": c.field.order() - 1,
            "gen": c.field.generator().map(|g| c.field.format_elem(&g)).unwrap_or_default(),
            "text": c.to_string(),
        }),
        FiniteValue::Zero => json!({ "degree": c.degree, "zero": true, "text": c.to_string() }),
    }
}

fn canonical_json(c: &CanonicalForm) -> Value {
    match c {
        CanonicalForm::Finite(f) => finite_json(f),
        CanonicalForm::Function(f) => {
            let places: Vec<Value> = f
                .places
                .iter()
                .map(|(pi, v)| json!({ "place": pi.format(f.field.var()), "value": finite_json(v) }))
                .collect();
            json!({
                "degree": f.degree,
                "field": f.field.name(),
                "constant": finite_json(&f.constant),
                "places": places,
            })
        }
    }
}

impl Report {
    pub fn new(command: &str) -> Self {
        let mut r = Report::default();
        r.kv("command", command);
        r
    }

    fn insert_json(&mut self, key: &str, value: Value) {
        match self.json.get_mut(key) {
            None => {
                self.json.insert(key.to_string(), value);
            }
            Some(Value::Array(items)) if self.repeated.contains(key) => items.push(value),
            Some(existing) => {
                let first = existing.take();
                *existing = Value::Array(vec![first, value]);
                self.repeated.insert(key.to_string());
            }
        }
    }

    pub fn kv(&mut self, key: &str, value: impl ToString) {
        let v = value.to_string();
        self.lines.push(format!("{key}={v}"));
        self.insert_json(key, Value::String(v));
    }

    pub fn flag(&mut self, key: &str, value: bool) {
        self.lines.push(format!("{key}={value}"));
        self.insert_json(key, Value::Bool(value));
    }

    pub fn count(&mut self, key: &str, value: usize) {
        self.lines.push(format!("{key}={value}"));
        self.insert_json(key, Value::from(value));
    }

    /// A line whose text carries several `k=v` pairs after the key.
    pub fn record(&mut self, key: &str, text: String, value: Value) {
        self.lines.push(format!("{key}={text}"));
        self.insert_json(key, value);
    }

    pub fn canonical(&mut self, key: &str, c: &CanonicalForm) {
        self.lines.push(format!("{key}={c}"));
        self.insert_json(key, canonical_json(c));
    }

    pub fn finite(&mut self, key: &str, c: &FiniteCanonical) {
        self.lines.push(format!("{key}={c}"));
        self.insert_json(key, finite_json(c));
    }

    /// Marks the report as a failed verification (exit code 1).
    pub fn fail(&mut self) {
        self.failed = true;
    }

    pub fn verified(&self) -> bool {
        !self.failed
    }

    pub fn lines(&self) -> &[String] {
        &self.lines
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        for l in &self.lines {
            out.push_str(l);
            out.push('\n');
        }
        out
    }

    pub fn render_json(&self) -> String {
        let mut obj = self.json.clone();
        obj.insert("status".into(), Value::from(if self.failed { "fail" } else { "ok" }));
        Value::Object(obj).to_string() + "\n"
    }
}
