//! JSON/CSV output helpers: stable field order, shortest round-trip float
//! formatting, and explicit "inf"/"nan" strings for non-finite values (plain
//! JSON numbers cannot carry them).

use serde_json::{Map, Value};

/// Insertion-ordered JSON object builder.
pub struct JsonMap {
    map: Map<String, Value>,
}

impl JsonMap {
    pub fn new() -> Self {
        Self { map: Map::new() }
    }

    pub fn push(&mut self, key: &str, value: Value) {
        self.map.insert(key.to_string(), value);
    }

    pub fn into_value(self) -> Value {
        Value::Object(self.map)
    }
}

/// A finite float becomes a JSON number (serde_json prints the shortest
/// representation that round-trips); non-finite values become the strings
/// "inf", "-inf", or "nan".
pub fn json_number(x: f64) -> Value {
    if x.is_finite() {
        serde_json::Number::from_f64(x)
            .map(Value::Number)
            .expect("finite float")
    } else if x.is_nan() {
        Value::String("nan".into())
    } else if x > 0.0 {
        Value::String("inf".into())
    } else {
        Value::String("-inf".into())
    }
}

pub fn json_vector(xs: &[f64]) -> Value {
    Value::Array(xs.iter().map(|&x| json_number(x)).collect())
}

/// CSV cell for a float: shortest round-trip digits, `.` decimal separator,
/// non-finite values spelled out.
pub fn fmt_float(x: f64) -> String {
    if x.is_finite() {
        format!("{x}")
    } else if x.is_nan() {
        "nan".into()
    } else if x > 0.0 {
        "inf".into()
    } else {
        "-inf".into()
    }
}
