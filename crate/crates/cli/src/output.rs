//! Tabular results and their CSV and JSON encodings.

use std::collections::BTreeMap;
use std::str::FromStr;

use serde_json::{Map, Number, Value};

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(i64),
    Text(String),
    Bool(bool),
    Null,
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Num(x)
    }
}

impl From<u32> for Cell {
    fn from(x: u32) -> Self {
        Cell::Int(i64::from(x))
    }
}

impl From<u64> for Cell {
    fn from(x: u64) -> Self {
        i64::try_from(x).map_or(Cell::Num(x as f64), Cell::Int)
    }
}

impl From<usize> for Cell {
    fn from(x: usize) -> Self {
        Cell::from(x as u64)
    }
}

impl From<bool> for Cell {
    fn from(x: bool) -> Self {
        Cell::Bool(x)
    }
}

impl From<&str> for Cell {
    fn from(x: &str) -> Self {
        Cell::Text(x.to_string())
    }
}

impl From<String> for Cell {
    fn from(x: String) -> Self {
        Cell::Text(x)
    }
}

impl<T: Into<Cell>> From<Option<T>> for Cell {
    fn from(x: Option<T>) -> Self {
        x.map_or(Cell::Null, Into::into)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    /// Floating point: a 6-digit display column plus a full-precision shadow.
    Real,
    Plain,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Column {
    pub name: &'static str,
    pub kind: Kind,
}

pub const fn real(name: &'static str) -> Column {
    Column { name, kind: Kind::Real }
}

pub const fn plain(name: &'static str) -> Column {
    Column { name, kind: Kind::Plain }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Record {
    pub command: String,
    pub params: BTreeMap<String, String>,
    pub seed: u64,
    pub columns: Vec<Column>,
    pub rows: Vec<Vec<Cell>>,
}

impl Record {
    pub fn new(command: &str, columns: Vec<Column>) -> Self {
        Self {
            command: command.to_string(),
            params: BTreeMap::new(),
            seed: 0,
            columns,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.columns.len(), "row width");
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut writer = csv::Writer::from_writer(Vec::new());
        let mut header = Vec::new();
        for c in &self.columns {
            header.push(c.name.to_string());
            if c.kind == Kind::Real {
                header.push(format!("{}_full", c.name));
            }
        }
        writer.write_record(&header).expect("write to memory");
        for row in &self.rows {
            let mut fields = Vec::new();
            for (c, cell) in self.columns.iter().zip(row) {
                match (c.kind, cell) {
                    (Kind::Real, Cell::Num(x)) => {
                        fields.push(display6(*x));
                        fields.push(full17(*x).unwrap_or_else(|| x.to_string()));
                    }
                    (Kind::Real, other) => {
                        let text = plain_text(other);
                        fields.push(text.clone());
                        fields.push(text);
                    }
                    (Kind::Plain, other) => fields.push(plain_text(other)),
                }
            }
            writer.write_record(&fields).expect("write to memory");
        }
        String::from_utf8(writer.into_inner().expect("flush to memory")).expect("utf-8 csv")
    }

    pub fn to_json(&self) -> String {
        let mut meta = Map::new();
        meta.insert("tool".into(), Value::from("salpeter"));
        meta.insert("version".into(), Value::from(env!("CARGO_PKG_VERSION")));
        meta.insert("command".into(), Value::from(self.command.clone()));
        meta.insert("seed".into(), Value::from(self.seed));
        let params: Map<String, Value> = self
            .params
            .iter()
            .map(|(k, v)| (k.clone(), Value::from(v.clone())))
            .collect();
        meta.insert("params".into(), Value::Object(params));
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|row| {
                Value::Object(
                    self.columns
                        .iter()
                        .zip(row)
                        .map(|(c, cell)| (c.name.to_string(), json_value(cell)))
                        .collect(),
                )
            })
            .collect();
        let mut top = Map::new();
        top.insert("meta".into(), Value::Object(meta));
        top.insert("rows".into(), Value::Array(rows));
        let mut text = serde_json::to_string_pretty(&Value::Object(top)).expect("serialise json");
        text.push('\n');
        text
    }
}

fn plain_text(cell: &Cell) -> String {
    match cell {
        Cell::Num(x) => full17(*x).unwrap_or_else(|| x.to_string()),
        Cell::Int(i) => i.to_string(),
        Cell::Text(s) => s.clone(),
        Cell::Bool(b) => b.to_string(),
        Cell::Null => String::new(),
    }
}

fn json_value(cell: &Cell) -> Value {
    match cell {
        Cell::Num(x) => match full17(*x) {
            Some(s) => Value::Number(Number::from_str(&s).expect("valid number literal")),
            None => Value::Null,
        },
        Cell::Int(i) => Value::from(*i),
        Cell::Text(s) => Value::from(s.clone()),
        Cell::Bool(b) => Value::from(*b),
        Cell::Null => Value::Null,
    }
}

/// 17 significant digits in exponent form, enough to round-trip any `f64`.
pub fn full17(x: f64) -> Option<String> {
    x.is_finite().then(|| format!("{x:.16e}"))
}

/// Six significant digits, fixed notation for moderate magnitudes.
pub fn display6(x: f64) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    if x == 0.0 {
        return "0".into();
    }
    let exponent = x.abs().log10().floor() as i32;
    if (-4..6).contains(&exponent) {
        format!("{:.*}", (5 - exponent) as usize, x)
    } else {
        format!("{x:.5e}")
    }
}
