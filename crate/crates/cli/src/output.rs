//! Deterministic JSON and CSV rendering.

use serde_json::Value;

/// Significant digits kept for every floating-point output.
pub const SIG_DIGITS: usize = 12;

pub fn round_sig(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{:.*e}", SIG_DIGITS - 1, x).parse().expect("formatted float parses")
}

/// Rounds every float in the tree to [`SIG_DIGITS`] significant digits.
pub fn round_value(v: Value) -> Value {
    match v {
        Value::Number(n) if n.is_f64() => {
            let x = round_sig(n.as_f64().expect("f64 number"));
            serde_json::Number::from_f64(x).map(Value::Number).unwrap_or(Value::Null)
        }
        Value::Array(a) => Value::Array(a.into_iter().map(round_value).collect()),
        Value::Object(o) => Value::Object(o.into_iter().map(|(k, v)| (k, round_value(v))).collect()),
        other => other,
    }
}

pub fn to_json(v: Value) -> String {
    let mut s = serde_json::to_string_pretty(&round_value(v)).expect("JSON values serialize");
    s.push('\n');
    s
}

/// One CSV field. Strings are quoted only when they need it.
pub fn csv_field(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::Bool(b) => b.to_string(),
        Value::Number(n) => match n.as_f64() {
            Some(x) if n.is_f64() => round_sig(x).to_string(),
            _ => n.to_string(),
        },
        Value::String(s) => {
            if s.contains([',', '"', '\n']) {
                format!("\"{}\"", s.replace('"', "\"\""))
            } else {
                s.clone()
            }
        }
        other => {
            let s = other.to_string();
            format!("\"{}\"", s.replace('"', "\"\""))
        }
    }
}

pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<Value>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Table { header: header.iter().map(|s| s.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Value>) {
        self.rows.push(row);
    }

    pub fn render(&self) -> String {
        let mut s = self.header.join(",");
        s.push('\n');
        for row in &self.rows {
            let fields: Vec<String> = row.iter().map(csv_field).collect();
            s.push_str(&fields.join(","));
            s.push('\n');
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn rounding() {
        assert_eq!(round_sig(1.0 / 3.0), 0.333333333333);
        assert_eq!(round_sig(2.0 / 3.0 * 1e-20), 6.66666666667e-21);
        assert_eq!(round_sig(0.0), 0.0);
        assert_eq!(round_sig(12.0), 12.0);
    }

    #[test]
    fn json_rounds_nested_floats() {
        let v = round_value(json!({"a": [0.1 + 0.2, 3], "b": {"c": 1.0 / 7.0}}));
        assert_eq!(v, json!({"a": [0.3, 3], "b": {"c": 0.142857142857}}));
    }

    #[test]
    fn csv_quoting() {
        let mut t = Table::new(&["x", "label"]);
        t.push(vec![json!(0.5), json!("a,b")]);
        assert_eq!(t.render(), "x,label\n0.5,\"a,b\"\n");
    }
}
