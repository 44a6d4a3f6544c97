//! Output encodings. JSON and CSV are stable; pretty output is not.

use serde::Serialize;
use serde_json::Value;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Pretty,
}

/// Rounds to 9 significant digits.
pub fn round9(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{x:.8e}").parse().unwrap_or(x)
}

fn round_value(v: &mut Value) {
    match v {
        Value::Number(n) if n.is_f64() => {
            if let Some(x) = n.as_f64() {
                *v = serde_json::Number::from_f64(round9(x)).map_or(Value::Null, Value::Number);
            }
        }
        Value::Array(items) => items.iter_mut().for_each(round_value),
        Value::Object(map) => map.values_mut().for_each(round_value),
        _ => {}
    }
}

/// Pretty-printed JSON with every float rounded to 9 significant digits.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut v = serde_json::to_value(value).expect("report types serialize");
    round_value(&mut v);
    let mut s = serde_json::to_string_pretty(&v).expect("values serialize");
    s.push('\n');
    s
}

/// CSV cell for a number: 9 significant digits, empty when absent.
pub fn num(x: Option<f64>) -> String {
    match x {
        Some(x) if x.is_finite() => format!("{}", round9(x)),
        Some(x) => format!("{x}"),
        None => String::new(),
    }
}

/// Writes a header and rows with the `csv` crate; fields are quoted only
/// when needed.
pub fn to_csv(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for row in rows {
        w.write_record(row).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 fields")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    #[allow(clippy::approx_constant)]
    fn rounds_to_nine_digits() {
        assert_eq!(round9(std::f64::consts::SQRT_2), 1.41421356);
        assert_eq!(round9(2.0), 2.0);
        assert_eq!(round9(-0.000123456789123), -0.000123456789);
        assert!(round9(f64::NAN).is_nan());
    }

    #[test]
    fn json_rounds_nested_floats_and_keeps_integers() {
        #[derive(Serialize)]
        struct T {
            a: Vec<f64>,
            n: u64,
            o: Option<f64>,
        }
        let s = to_json(&T { a: vec![1.0 / 3.0], n: 10_000, o: None });
        assert!(s.contains("0.333333333"), "{s}");
        assert!(s.contains("10000"));
        assert!(s.contains("null"));
    }

    #[test]
    fn csv_quotes_when_needed() {
        let s = to_csv(&["a", "b"], &[vec!["x,y".into(), num(Some(0.5))]]);
        assert_eq!(s, "a,b\n\"x,y\",0.5\n");
    }
}
