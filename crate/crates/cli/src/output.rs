//! Fixed float formatting (`%.17g`), JSON and CSV emission.

use serde_json::ser::Formatter;
use serde_json::Value;
use std::io;

/// `%.17g`: 17 significant digits, trailing zeros removed, exponent form
/// outside `1e-4 <= |x| < 1e17`.
pub fn g17(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return if x.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    let sci = format!("{x:.16e}");
    let (mant, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-4..17).contains(&exp) {
        let digits = (16 - exp).max(0) as usize;
        trim(&format!("{x:.digits$}")).to_string()
    } else {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", trim(mant), exp.abs())
    }
}

fn trim(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

struct G17;

impl Formatter for G17 {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        writer.write_all(g17(value).as_bytes())
    }
}

/// Compact JSON with every float printed by [`g17`]; non-finite numbers are
/// emitted as strings.
pub fn json(v: &Value) -> String {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, G17);
    serde::Serialize::serialize(v, &mut ser).expect("in-memory serialization");
    String::from_utf8(out).expect("utf-8") + "\n"
}

/// JSON value for a float; non-finite values become strings.
pub fn num(x: f64) -> Value {
    match serde_json::Number::from_f64(x) {
        Some(n) => Value::Number(n),
        None => Value::String(g17(x)),
    }
}

pub fn nums(xs: &[f64]) -> Value {
    Value::Array(xs.iter().map(|x| num(*x)).collect())
}

/// CSV with a header line; `None` cells are left empty.
pub fn csv(header: &[&str], rows: &[Vec<Option<f64>>]) -> String {
    let mut s = header.join(",");
    s.push('\n');
    for r in rows {
        let cells: Vec<String> = r.iter().map(|c| c.map(g17).unwrap_or_default()).collect();
        s.push_str(&cells.join(","));
        s.push('\n');
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn printf_g17_matches_c() {
        assert_eq!(g17(0.1), "0.10000000000000001");
        assert_eq!(g17(1.0), "1");
        assert_eq!(g17(-2.5), "-2.5");
        assert_eq!(g17(std::f64::consts::PI), "3.1415926535897931");
        assert_eq!(g17(1e-5), "1.0000000000000001e-05");
        assert_eq!(g17(1e20), "1e+20");
        assert_eq!(g17(123456.0), "123456");
        assert_eq!(g17(0.0001), "0.0001");
        assert_eq!(g17(f64::NAN), "nan");
    }

    #[test]
    fn json_uses_fixed_format() {
        let v = serde_json::json!({"a": 0.1, "b": [1.0, 2], "c": num(f64::INFINITY)});
        assert_eq!(json(&v), "{\"a\":0.10000000000000001,\"b\":[1,2],\"c\":\"inf\"}\n");
    }

    #[test]
    fn csv_rows() {
        assert_eq!(csv(&["x", "y"], &[vec![Some(0.5), None]]), "x,y\n0.5,\n");
    }
}
