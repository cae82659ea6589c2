//! Records written as a JSON document or as CSV.

use std::io::Write;

use serde::ser::{SerializeMap, Serializer};
use serde::Serialize;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(u64),
    Text(String),
    Bool(bool),
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}
impl From<u64> for Cell {
    fn from(v: u64) -> Self {
        Cell::Int(v)
    }
}
impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}
impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}
impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
    }
}

impl Serialize for Cell {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Cell::Num(v) if v.is_finite() => s.serialize_f64(*v),
            Cell::Num(_) => s.serialize_none(),
            Cell::Int(v) => s.serialize_u64(*v),
            Cell::Text(v) => s.serialize_str(v),
            Cell::Bool(v) => s.serialize_bool(*v),
        }
    }
}

/// One result row; field order is kept.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Record(pub Vec<(&'static str, Cell)>);

impl Record {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, key: &'static str, value: impl Into<Cell>) -> Self {
        self.0.push((key, value.into()));
        self
    }
}

impl Serialize for Record {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.0.len()))?;
        for (k, v) in &self.0 {
            map.serialize_entry(k, v)?;
        }
        map.end()
    }
}

#[derive(Serialize)]
struct Document<'a, C: Serialize> {
    config: &'a C,
    results: &'a [Record],
}

pub fn write_json<W: Write, C: Serialize>(out: &mut W, config: &C, results: &[Record]) -> std::io::Result<()> {
    serde_json::to_writer_pretty(&mut *out, &Document { config, results })?;
    out.write_all(b"\n")
}

fn csv_cell(c: &Cell) -> String {
    match c {
        Cell::Num(v) => format!("{v:.16e}"),
        Cell::Int(v) => v.to_string(),
        Cell::Bool(v) => v.to_string(),
        Cell::Text(v) if v.contains([',', '"', '\n']) => format!("\"{}\"", v.replace('"', "\"\"")),
        Cell::Text(v) => v.clone(),
    }
}

/// Header from the first record, then one line per record.
pub fn write_csv<W: Write>(out: &mut W, results: &[Record]) -> std::io::Result<()> {
    let Some(first) = results.first() else { return Ok(()) };
    let header: Vec<&str> = first.0.iter().map(|(k, _)| *k).collect();
    writeln!(out, "{}", header.join(","))?;
    for r in results {
        let line: Vec<String> = r.0.iter().map(|(_, v)| csv_cell(v)).collect();
        writeln!(out, "{}", line.join(","))?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_uses_seventeen_significant_digits() {
        let rows = vec![Record::new().with("x", 0.1).with("label", "a,b").with("n", 3u64)];
        let mut buf = Vec::new();
        write_csv(&mut buf, &rows).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "x,label,n\n1.0000000000000001e-1,\"a,b\",3\n"
        );
    }

    #[test]
    fn json_keeps_field_order_and_maps_nan_to_null() {
        let rows = vec![Record::new().with("z", f64::NAN).with("a", true)];
        let mut buf = Vec::new();
        write_json(&mut buf, &"cfg", &rows).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.find("\"z\": null").unwrap() < text.find("\"a\": true").unwrap());
    }
}
