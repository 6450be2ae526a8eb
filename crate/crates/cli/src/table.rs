use std::io::{self, Write};

use otto_core::format::sig;
use serde_json::{json, Value};

/// Rectangular numeric output with named columns.
#[derive(Clone, Debug, PartialEq)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn new(columns: Vec<&'static str>) -> Self {
        Self {
            columns,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<f64>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn write_csv<W: Write>(&self, mut w: W, digits: usize) -> io::Result<()> {
        writeln!(w, "{}", self.columns.join(","))?;
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|v| sig(*v, digits)).collect();
            writeln!(w, "{}", cells.join(","))?;
        }
        Ok(())
    }

    /// `{"columns": [...], "rows": [[...], ...]}`; non-finite values become
    /// `null`.
    pub fn to_json(&self, digits: usize) -> Value {
        let rows: Vec<Vec<Value>> = self
            .rows
            .iter()
            .map(|row| row.iter().map(|v| rounded(*v, digits)).collect())
            .collect();
        json!({ "columns": self.columns, "rows": rows })
    }
}

/// JSON number rounded to `digits` significant digits, `null` if not finite.
pub fn rounded(v: f64, digits: usize) -> Value {
    if v.is_finite() {
        let r: f64 = sig(v, digits)
            .parse()
            .expect("sig renders a parseable float");
        json!(r)
    } else {
        Value::Null
    }
}
