//! Verification reports: `{pass, checked, counterexample?, seed}` plus
//! free-form details.

use serde_json::{json, Map, Value};

#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub name: String,
    pub pass: bool,
    pub checked: u64,
    pub counterexample: Option<Value>,
    pub seed: Option<u64>,
    pub details: Map<String, Value>,
    pub parts: Vec<Report>,
}

impl Report {
    pub fn new(name: impl Into<String>) -> Self {
        Report {
            name: name.into(),
            pass: true,
            checked: 0,
            counterexample: None,
            seed: None,
            details: Map::new(),
            parts: Vec::new(),
        }
    }

    /// Records a failure; only the first counterexample is kept.
    pub fn fail(&mut self, counterexample: Value) {
        if self.pass {
            self.counterexample = Some(counterexample);
        }
        self.pass = false;
    }

    /// Counts one check and fails with the lazily built witness if `ok` is
    /// false.
    pub fn check(&mut self, ok: bool, witness: impl FnOnce() -> Value) -> bool {
        self.checked += 1;
        if !ok {
            self.fail(witness());
        }
        ok
    }

    pub fn detail(&mut self, key: &str, value: impl Into<Value>) -> &mut Self {
        self.details.insert(key.to_string(), value.into());
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }

    /// Adds a sub-report; the parent fails with the child's witness.
    pub fn push(&mut self, part: Report) {
        self.checked += part.checked;
        if !part.pass {
            let witness = json!({ "check": part.name, "counterexample": part.counterexample });
            self.fail(witness);
        }
        self.parts.push(part);
    }

    pub fn to_json(&self) -> Value {
        let mut obj = Map::new();
        obj.insert("name".into(), json!(self.name));
        obj.insert("pass".into(), json!(self.pass));
        obj.insert("checked".into(), json!(self.checked));
        if let Some(c) = &self.counterexample {
            obj.insert("counterexample".into(), c.clone());
        }
        obj.insert("seed".into(), self.seed.map(Value::from).unwrap_or(Value::Null));
        if !self.details.is_empty() {
            obj.insert("details".into(), Value::Object(self.details.clone()));
        }
        if !self.parts.is_empty() {
            obj.insert(
                "parts".into(),
                Value::Array(self.parts.iter().map(Report::to_json).collect()),
            );
        }
        Value::Object(obj)
    }

    /// One line per report, indented by nesting.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        self.write_text(&mut out, 0);
        out
    }

    fn write_text(&self, out: &mut String, indent: usize) {
        let status = if self.pass { "PASS" } else { "FAIL" };
        out.push_str(&format!(
            "{:indent$}{status} {} ({} checks)",
            "",
            self.name,
            self.checked,
            indent = indent
        ));
        if !self.details.is_empty() {
            out.push_str(&format!(" {}", Value::Object(self.details.clone())));
        }
        out.push('\n');
        if let Some(c) = &self.counterexample {
            if self.parts.is_empty() {
                out.push_str(&format!("{:indent$}  counterexample: {c}\n", "", indent = indent));
            }
        }
        for p in &self.parts {
            p.write_text(out, indent + 2);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn failures_propagate_with_witness() {
        let mut child = Report::new("inner");
        child.check(true, || json!(null));
        child.check(false, || json!({"x": 1}));
        child.check(false, || json!({"x": 2}));
        let mut parent = Report::new("outer").with_seed(7);
        parent.push(child);
        assert!(!parent.pass);
        assert_eq!(parent.checked, 3);
        let j = parent.to_json();
        assert_eq!(j["counterexample"]["counterexample"]["x"], 1);
        assert_eq!(j["seed"], 7);
    }
}
