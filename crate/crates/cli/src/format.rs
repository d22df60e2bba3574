//! Output rendering. Every number is rounded to 12 significant digits once,
//! in a JSON value, and both the JSON and the text renderings print from
//! that value.

use serde::Serialize;
use serde_json::{Map, Number, Value};

use crate::CliError;

pub const SIGNIFICANT_DIGITS: usize = 12;

/// Rounds to 12 significant digits; non-finite values pass through.
pub fn round_sig(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x).parse().unwrap_or(x)
}

fn round_value(v: Value) -> Value {
    match v {
        Value::Number(n) if n.is_f64() => {
            let x = round_sig(n.as_f64().unwrap_or(f64::NAN));
            Number::from_f64(x).map(Value::Number).unwrap_or(Value::Null)
        }
        Value::Array(items) => Value::Array(items.into_iter().map(round_value).collect()),
        Value::Object(map) => Value::Object(map.into_iter().map(|(k, v)| (k, round_value(v))).collect::<Map<_, _>>()),
        other => other,
    }
}

/// Serializes `x` and rounds every floating-point number in it.
pub fn rounded<T: Serialize>(x: &T) -> Result<Value, CliError> {
    Ok(round_value(serde_json::to_value(x)?))
}

pub fn json_string(v: &Value) -> Result<String, CliError> {
    let mut s = serde_json::to_string_pretty(v)?;
    s.push('\n');
    Ok(s)
}

/// Text form of a field of `v` at a slash-separated path.
pub fn field(v: &Value, path: &str) -> String {
    let mut cur = v;
    for key in path.split('/') {
        cur = match cur.get(key) {
            Some(next) => next,
            None => return "-".into(),
        };
    }
    match cur {
        Value::String(s) => s.clone(),
        Value::Null => "-".into(),
        other => other.to_string(),
    }
}

/// CSV cell for a number, identical to its JSON text.
pub fn cell(x: f64) -> String {
    match Number::from_f64(round_sig(x)) {
        Some(n) => n.to_string(),
        None => x.to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_digits() {
        assert_eq!(round_sig(1.0 / 7.0), 0.142857142857);
        assert_eq!(round_sig(-1.234_567_890_123_456e-27), -1.23456789012e-27);
        assert_eq!(round_sig(0.0), 0.0);
        assert!(round_sig(f64::NAN).is_nan());
        assert_eq!(cell(1e22), "1e+22");
    }

    #[test]
    fn nested_rounding_and_paths() {
        #[derive(Serialize)]
        struct Inner {
            x: f64,
            n: usize,
        }
        #[derive(Serialize)]
        struct Outer {
            a: Inner,
            list: Vec<f64>,
            label: &'static str,
        }
        let v = rounded(&Outer { a: Inner { x: 2.0 / 3.0, n: 3 }, list: vec![1.0 / 7.0], label: "ok" }).unwrap();
        assert_eq!(field(&v, "a/x"), "0.666666666667");
        assert_eq!(field(&v, "a/n"), "3");
        assert_eq!(field(&v, "label"), "ok");
        assert_eq!(field(&v, "missing/path"), "-");
        assert_eq!(v["list"][0].as_f64().unwrap(), 0.142857142857);
    }
}
