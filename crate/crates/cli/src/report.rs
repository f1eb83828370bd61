//! Deterministic report emission.
//!
//! Reports are rendered with a fixed key order and floats printed with 17
//! significant digits (`{:.16e}`), so the same command on the same inputs
//! yields byte-identical output.

pub enum Value {
    Null,
    Bool(bool),
    U64(u64),
    F64(f64),
    String(String),
    Array(Vec<Value>),
    Object(Vec<(String, Value)>),
}

impl Value {
    pub fn str(s: &str) -> Value {
        Value::String(String::from(s))
    }

    pub fn object(items: Vec<(&str, Value)>) -> Value {
        Value::Object(items.into_iter().map(|(k, v)| (String::from(k), v)).collect())
    }

    fn write(&self, out: &mut String, indent: usize) {
        match self {
            Value::Null => out.push_str("null"),
            Value::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
            Value::U64(n) => out.push_str(&n.to_string()),
            Value::F64(x) => {
                if x.is_finite() {
                    out.push_str(&format!("{x:.16e}"));
                } else {
                    out.push_str("null");
                }
            }
            Value::String(s) => write_json_string(out, s),
            Value::Array(items) => {
                if items.is_empty() {
                    out.push_str("[]");
                    return;
                }
                out.push('[');
                for (i, item) in items.iter().enumerate() {
                    if i > 0 {
                        out.push(',');
                    }
                    newline(out, indent + 1);
                    item.write(out, indent + 1);
                }
                newline(out, indent);
                out.push(']');
            }
            Value::Object(items) => {
                if items.is_empty() {
                    out.push_str("{}");
                    return;
                }
                out.push('{');
                for (i, (k, v)) in items.iter().enumerate() {
                    if i > 0 {
                        out.push(',');
                    }
                    newline(out, indent + 1);
                    write_json_string(out, k);
                    out.push_str(": ");
                    v.write(out, indent + 1);
                }
                newline(out, indent);
                out.push('}');
            }
        }
    }
}

fn newline(out: &mut String, indent: usize) {
    out.push('\n');
    for _ in 0..indent {
        out.push_str("  ");
    }
}

fn write_json_string(out: &mut String, s: &str) {
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\t' => out.push_str("\\t"),
            '\r' => out.push_str("\\r"),
            c if (c as u32) < 0x20 => out.push_str(&format!("\\u{:04x}", c as u32)),
            c => out.push(c),
        }
    }
    out.push('"');
}

pub struct Report {
    items: Vec<(String, Value)>,
}

impl Report {
    pub fn new(subcommand: &str, command_echo: String, seed: u64) -> Report {
        Report {
            items: vec![
                (
                    String::from("tool"),
                    Value::object(vec![
                        ("name", Value::str("gknorms")),
                        ("version", Value::str(env!("CARGO_PKG_VERSION"))),
                    ]),
                ),
                (String::from("subcommand"), Value::str(subcommand)),
                (String::from("command"), Value::String(command_echo)),
                (String::from("seed"), Value::U64(seed)),
            ],
        }
    }

    pub fn push(&mut self, key: &str, value: Value) {
        self.items.push((String::from(key), value));
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        Value::Object(
            self.items
                .iter()
                .map(|(k, v)| (k.clone(), clone_value(v)))
                .collect(),
        )
        .write(&mut out, 0);
        out.push('\n');
        out
    }
}

fn clone_value(v: &Value) -> Value {
    match v {
        Value::Null => Value::Null,
        Value::Bool(b) => Value::Bool(*b),
        Value::U64(n) => Value::U64(*n),
        Value::F64(x) => Value::F64(*x),
        Value::String(s) => Value::String(s.clone()),
        Value::Array(items) => Value::Array(items.iter().map(clone_value).collect()),
        Value::Object(items) => Value::Object(
            items.iter().map(|(k, v)| (k.clone(), clone_value(v))).collect(),
        ),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_render_with_full_precision() {
        let mut out = String::new();
        Value::F64(0.1).write(&mut out, 0);
        assert_eq!(out, "1.0000000000000001e-1");
    }

    #[test]
    fn render_is_deterministic() {
        let mut r = Report::new("norm", String::from("gknorms norm"), 7);
        r.push("value", Value::F64(2.0f64.sqrt()));
        assert_eq!(r.render(), r.render());
    }
}
