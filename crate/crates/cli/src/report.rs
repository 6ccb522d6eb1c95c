use dimerlab::graph::EmbeddedGraph;
use dimerlab::scalar::{format_decimal, format_rational, Rational, Real};
use serde_json::{Map, Value};

/// `p/q ≈ d.ddddddddddd`.
pub fn exact(r: &Rational) -> Value {
    Value::String(format!("{} ≈ {}", format_rational(r), format_decimal(r.to_f64())))
}

pub fn exact_list(rs: &[Rational]) -> Value {
    Value::Array(rs.iter().map(exact).collect())
}

/// Ordered key/value report, rendered as indented text or as JSON.
#[derive(Debug, Default)]
pub struct Report {
    map: Map<String, Value>,
}

impl Report {
    pub fn new(command: &str) -> Self {
        let mut r = Report::default();
        r.push("command", command);
        r
    }

    pub fn push(&mut self, key: &str, value: impl Into<Value>) {
        self.map.insert(key.to_string(), value.into());
    }

    pub fn digest<T: dimerlab::scalar::Scalar>(&mut self, g: &EmbeddedGraph<T>) {
        let mut d = Map::new();
        d.insert("vertices".into(), g.num_vertices().into());
        d.insert("edges".into(), g.num_edges().into());
        d.insert("faces".into(), g.num_faces().into());
        self.push("graph", Value::Object(d));
    }

    pub fn render(&self, json: bool) -> String {
        if json {
            let mut s = serde_json::to_string_pretty(&Value::Object(self.map.clone())).expect("report serializes");
            s.push('\n');
            return s;
        }
        let mut out = String::new();
        for (k, v) in &self.map {
            write_text(&mut out, k, v, 0);
        }
        out
    }
}

fn scalar_text(v: &Value) -> Option<String> {
    match v {
        Value::String(s) => Some(s.clone()),
        Value::Null => Some("-".into()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(n) => Some(n.to_string()),
        _ => None,
    }
}

fn write_text(out: &mut String, key: &str, v: &Value, depth: usize) {
    let pad = "  ".repeat(depth);
    if let Some(s) = scalar_text(v) {
        out.push_str(&format!("{pad}{key}: {s}\n"));
        return;
    }
    match v {
        Value::Array(items) if items.iter().all(|x| scalar_text(x).is_some()) => {
            let parts: Vec<String> = items.iter().filter_map(scalar_text).collect();
            out.push_str(&format!("{pad}{key}: [{}]\n", parts.join(", ")));
        }
        Value::Array(items) => {
            out.push_str(&format!("{pad}{key}:\n"));
            for (i, item) in items.iter().enumerate() {
                write_text(out, &format!("[{i}]"), item, depth + 1);
            }
        }
        Value::Object(m) => {
            out.push_str(&format!("{pad}{key}:\n"));
            for (k, x) in m {
                write_text(out, k, x, depth + 1);
            }
        }
        _ => unreachable!("scalars handled above"),
    }
}
