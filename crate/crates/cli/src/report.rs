//! Reports: ordered key/value records rendered as text or JSON from the same data.

use serde_json::{Map, Value};

#[derive(Clone, Debug, Default)]
pub struct Report {
    fields: Map<String, Value>,
    /// Text form prints only the value of this field.
    bare: Option<String>,
}

impl Report {
    pub fn new() -> Report {
        Report::default()
    }

    pub fn field(mut self, key: &str, v: impl Into<Value>) -> Report {
        self.fields.insert(key.to_string(), v.into());
        self
    }

    pub fn push(&mut self, key: &str, v: impl Into<Value>) {
        self.fields.insert(key.to_string(), v.into());
    }

    /// A report whose text form is the single value of `key`.
    pub fn bare(mut self, key: &str) -> Report {
        self.bare = Some(key.to_string());
        self
    }

    pub fn get(&self, key: &str) -> Option<&Value> {
        self.fields.get(key)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&Value::Object(self.fields.clone())).expect("report serialises");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        if let Some(k) = &self.bare {
            return format!("{}\n", render(&self.fields[k]));
        }
        let mut s = String::new();
        write_fields(&mut s, &self.fields, 0);
        s
    }
}

fn write_fields(s: &mut String, fields: &Map<String, Value>, indent: usize) {
    let pad = "  ".repeat(indent);
    for (k, v) in fields {
        match v {
            Value::Object(m) => {
                s.push_str(&format!("{pad}{k}:\n"));
                write_fields(s, m, indent + 1);
            }
            Value::Array(items) if items.iter().any(|i| i.is_object()) => {
                s.push_str(&format!("{pad}{k}:\n"));
                for item in items {
                    match item {
                        Value::Object(m) => {
                            s.push_str(&format!("{pad}  -\n"));
                            write_fields(s, m, indent + 2);
                        }
                        other => s.push_str(&format!("{pad}  - {}\n", render(other))),
                    }
                }
            }
            _ => s.push_str(&format!("{pad}{k}: {}\n", render(v))),
        }
    }
}

/// Scalars bare, arrays bracketed (top-level lists of scalars comma-separated).
fn render(v: &Value) -> String {
    match v {
        Value::Array(items) if items.iter().all(|i| !i.is_array()) => {
            items.iter().map(render_inner).collect::<Vec<_>>().join(", ")
        }
        _ => render_inner(v),
    }
}

fn render_inner(v: &Value) -> String {
    match v {
        Value::Null => "none".into(),
        Value::String(s) => s.clone(),
        Value::Array(items) => format!("[{}]", items.iter().map(render_inner).collect::<Vec<_>>().join(", ")),
        Value::Object(_) => serde_json::to_string(v).expect("object serialises"),
        other => other.to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn text_and_json_share_content() {
        let r = Report::new()
            .field("mu", 4)
            .field("basis", json!(["1", "y"]))
            .field("e", json!([["1", "0"], ["0", "1"]]))
            .field("split", json!({"h0": 1, "h1": 0}));
        assert_eq!(r.to_text(), "mu: 4\nbasis: 1, y\ne: [[1, 0], [0, 1]]\nsplit:\n  h0: 1\n  h1: 0\n");
        assert!(r.to_json().contains("\"mu\": 4"));
        assert_eq!(Report::new().field("chern", "1").bare("chern").to_text(), "1\n");
    }
}
