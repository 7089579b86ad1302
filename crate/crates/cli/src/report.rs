//! Versioned report assembly shared by every subcommand.

use std::io;

use cbradial::Error;
use serde::Serialize;
use serde_json::ser::{Formatter, PrettyFormatter};
use serde_json::{json, Map, Value};

pub const SCHEMA_VERSION: u64 = 1;

/// Numeric cell; non-finite values become strings.
pub fn num(x: f64) -> Value {
    if x.is_finite() {
        json!(x)
    } else if x.is_nan() {
        Value::String("nan".into())
    } else if x > 0.0 {
        Value::String("inf".into())
    } else {
        Value::String("-inf".into())
    }
}

/// Column-ordered result rows.
#[derive(Debug, Clone)]
pub struct Table {
    columns: Vec<String>,
    rows: Vec<Vec<Value>>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Self {
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Value>) {
        assert_eq!(row.len(), self.columns.len(), "row width must match the header");
        self.rows.push(row);
    }
}

/// Every float is written with 17 significant digits so reports are byte-stable.
fn fixed(x: f64) -> String {
    format!("{x:.16e}")
}

struct FixedFloats<'a>(PrettyFormatter<'a>);

macro_rules! delegate {
    ($($name:ident($($arg:ident: $ty:ty),*)),* $(,)?) => {
        $(fn $name<W: ?Sized + io::Write>(&mut self, w: &mut W $(, $arg: $ty)*) -> io::Result<()> {
            self.0.$name(w $(, $arg)*)
        })*
    };
}

impl Formatter for FixedFloats<'_> {
    fn write_f64<W: ?Sized + io::Write>(&mut self, w: &mut W, value: f64) -> io::Result<()> {
        w.write_all(fixed(value).as_bytes())
    }

    delegate!(
        begin_array(),
        end_array(),
        begin_array_value(first: bool),
        end_array_value(),
        begin_object(),
        end_object(),
        begin_object_key(first: bool),
        begin_object_value(),
        end_object_value(),
    );
}

#[derive(Debug, Clone)]
pub struct Report {
    command: String,
    status: &'static str,
    error: Option<String>,
    inputs: Map<String, Value>,
    results: Map<String, Value>,
    table: Option<Table>,
}

impl Report {
    pub fn new(command: &str) -> Self {
        Self {
            command: command.to_string(),
            status: "ok",
            error: None,
            inputs: Map::new(),
            results: Map::new(),
            table: None,
        }
    }

    pub fn failure(mut self, e: &Error) -> Self {
        self.status = "numerical_failure";
        self.error = Some(e.to_string());
        self
    }

    pub fn input(mut self, key: &str, value: Value) -> Self {
        self.inputs.insert(key.to_string(), value);
        self
    }

    pub fn result(mut self, key: &str, value: Value) -> Self {
        self.results.insert(key.to_string(), value);
        self
    }

    pub fn table(mut self, table: Table) -> Self {
        self.table = Some(table);
        self
    }

    pub fn to_value(&self) -> Value {
        let (columns, rows) = match &self.table {
            Some(t) => (json!(t.columns), json!(t.rows)),
            None => (json!([]), json!([])),
        };
        json!({
            "schema": SCHEMA_VERSION,
            "command": self.command,
            "status": self.status,
            "error": self.error,
            "inputs": self.inputs,
            "results": self.results,
            "columns": columns,
            "rows": rows,
        })
    }

    pub fn to_json(&self) -> String {
        let mut buf = Vec::new();
        let mut ser = serde_json::Serializer::with_formatter(&mut buf, FixedFloats(PrettyFormatter::new()));
        self.to_value().serialize(&mut ser).expect("reports serialize");
        buf.push(b'\n');
        String::from_utf8(buf).expect("json is utf-8")
    }

    /// Table rows as CSV; a failed run writes its status and error instead.
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        match (&self.table, &self.error) {
            (Some(t), None) => {
                w.write_record(&t.columns).expect("in-memory csv");
                for row in &t.rows {
                    w.write_record(row.iter().map(cell)).expect("in-memory csv");
                }
            }
            _ => {
                w.write_record(["status", "error"]).expect("in-memory csv");
                w.write_record([self.status, self.error.as_deref().unwrap_or("")])
                    .expect("in-memory csv");
            }
        }
        String::from_utf8(w.into_inner().expect("in-memory csv")).expect("csv is utf-8")
    }
}

fn cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        Value::Number(n) if n.is_f64() => fixed(n.as_f64().expect("f64 number")),
        other => other.to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_digits() {
        let mut t = Table::new(&["x", "n"]);
        t.push(vec![num(0.1), json!(3)]);
        t.push(vec![num(f64::INFINITY), json!(4)]);
        let text = Report::new("x").table(t).to_json();
        assert!(text.contains("1.0000000000000001e-1"));
        assert!(text.contains("\"inf\""));
        let back: Value = serde_json::from_str(&text).unwrap();
        assert_eq!(back["rows"][0][0].as_f64(), Some(0.1));
        assert_eq!(back["rows"][0][1], 3);
    }

    #[test]
    fn csv_keeps_column_order() {
        let mut t = Table::new(&["b", "a"]);
        t.push(vec![num(1.0), json!(true)]);
        let csv = Report::new("x").table(t).to_csv();
        assert_eq!(csv, "b,a\n1.0000000000000000e0,true\n");
    }
}
