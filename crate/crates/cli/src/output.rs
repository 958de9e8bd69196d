//! Report model and the JSON/CSV writers.

use std::io::Write;

use serde_json::{json, Map, Value};

/// Significant digits of every printed number.
pub const DIGITS: usize = 12;

#[derive(Debug, Clone, PartialEq)]
pub enum Field {
    Int(i64),
    Num(f64),
    Bool(bool),
    Text(String),
    List(Vec<Field>),
}

impl From<usize> for Field {
    fn from(v: usize) -> Self {
        Field::Int(v as i64)
    }
}

impl From<u64> for Field {
    fn from(v: u64) -> Self {
        Field::Int(v as i64)
    }
}

impl From<f64> for Field {
    fn from(v: f64) -> Self {
        Field::Num(v)
    }
}

impl From<bool> for Field {
    fn from(v: bool) -> Self {
        Field::Bool(v)
    }
}

impl From<&str> for Field {
    fn from(v: &str) -> Self {
        Field::Text(v.to_string())
    }
}

impl From<String> for Field {
    fn from(v: String) -> Self {
        Field::Text(v)
    }
}

impl<T: Into<Field>> From<Vec<T>> for Field {
    fn from(v: Vec<T>) -> Self {
        Field::List(v.into_iter().map(Into::into).collect())
    }
}

impl From<&[f64]> for Field {
    fn from(v: &[f64]) -> Self {
        Field::List(v.iter().map(|&x| Field::Num(x)).collect())
    }
}

#[derive(Debug, Clone)]
pub struct Report {
    pub command: &'static str,
    pub params: Vec<(String, Field)>,
    pub results: Vec<(String, Field)>,
}

impl Report {
    pub fn new(command: &'static str) -> Self {
        Report {
            command,
            params: Vec::new(),
            results: Vec::new(),
        }
    }

    pub fn param(mut self, key: &str, v: impl Into<Field>) -> Self {
        self.params.push((key.to_string(), v.into()));
        self
    }

    pub fn result(mut self, key: &str, v: impl Into<Field>) -> Self {
        self.results.push((key.to_string(), v.into()));
        self
    }

    pub fn push(&mut self, key: &str, v: impl Into<Field>) {
        self.results.push((key.to_string(), v.into()));
    }
}

/// x rounded to [`DIGITS`] significant digits.
pub fn round_sig(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{:.*e}", DIGITS - 1, x).parse().expect("formatted float")
}

fn to_json(f: &Field) -> Value {
    match f {
        Field::Int(i) => json!(i),
        Field::Num(x) => serde_json::Number::from_f64(round_sig(*x)).map_or(Value::Null, Value::Number),
        Field::Bool(b) => json!(b),
        Field::Text(s) => json!(s),
        Field::List(v) => Value::Array(v.iter().map(to_json).collect()),
    }
}

fn object(pairs: &[(String, Field)]) -> Value {
    let mut m = Map::new();
    for (k, v) in pairs {
        m.insert(k.clone(), to_json(v));
    }
    Value::Object(m)
}

pub fn write_json<W: Write>(r: &Report, mut w: W) -> std::io::Result<()> {
    let v = json!({
        "command": r.command,
        "params": object(&r.params),
        "results": object(&r.results),
    });
    serde_json::to_writer_pretty(&mut w, &v)?;
    writeln!(w)
}

fn scalar_text(f: &Field) -> String {
    match f {
        Field::Num(x) if !x.is_finite() => x.to_string(),
        Field::Text(s) => s.clone(),
        other => to_json(other).to_string(),
    }
}

/// One record per scalar; list elements get a 1-based index.
pub fn write_csv<W: Write>(r: &Report, w: W) -> csv::Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["parameter", "index", "value"])?;
    for (k, v) in &r.results {
        match v {
            Field::List(items) => {
                for (i, item) in items.iter().enumerate() {
                    out.write_record([k.as_str(), &(i + 1).to_string(), &scalar_text(item)])?;
                }
            }
            _ => out.write_record([k.as_str(), "", &scalar_text(v)])?,
        }
    }
    out.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rounding() {
        assert_eq!(round_sig(0.1234567890123456), 0.123456789012);
        assert_eq!(round_sig(-2.0), -2.0);
        assert_eq!(round_sig(1.0 / 3.0e10), 3.33333333333e-11);
    }

    #[test]
    fn csv_layout() {
        let r = Report::new("x")
            .result("value", 0.5)
            .result("thresholds", vec![0.0, 0.25])
            .result("label", "a, b");
        let mut buf = Vec::new();
        write_csv(&r, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(
            text,
            "parameter,index,value\nvalue,,0.5\nthresholds,1,0.0\nthresholds,2,0.25\nlabel,,\"a, b\"\n"
        );
    }
}
