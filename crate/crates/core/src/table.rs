//! Rectangular result tables with a metadata block, serialized as CSV.
//!
//! Format: UTF-8, `#`-prefixed metadata comment lines first, then a header
//! row, then one comma-separated row per record with `.` as the decimal
//! separator. Floats are written in shortest round-trip form so identical
//! runs produce identical bytes.

use std::fmt::Write as _;
use std::io;

/// One table cell.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Value {
    Int(i64),
    Float(f64),
}

impl Value {
    pub fn as_f64(self) -> f64 {
        match self {
            Value::Int(v) => v as f64,
            Value::Float(v) => v,
        }
    }

    pub fn as_i64(self) -> i64 {
        match self {
            Value::Int(v) => v,
            Value::Float(v) => v as i64,
        }
    }
}

impl From<i64> for Value {
    fn from(v: i64) -> Self {
        Value::Int(v)
    }
}

impl From<usize> for Value {
    fn from(v: usize) -> Self {
        Value::Int(v as i64)
    }
}

impl From<f64> for Value {
    fn from(v: f64) -> Self {
        Value::Float(v)
    }
}

/// A named-column table plus ordered metadata (config echo, seed, version).
#[derive(Debug, Clone, PartialEq)]
pub struct ResultTable {
    columns: Vec<String>,
    rows: Vec<Vec<Value>>,
    metadata: Vec<(String, String)>,
}

impl ResultTable {
    pub fn new<S: Into<String>>(columns: impl IntoIterator<Item = S>) -> Self {
        Self {
            columns: columns.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
            metadata: Vec::new(),
        }
    }

    pub fn push_metadata(&mut self, key: impl Into<String>, value: impl Into<String>) {
        self.metadata.push((key.into(), value.into()));
    }

    pub fn push_row(&mut self, row: Vec<Value>) {
        assert_eq!(
            row.len(),
            self.columns.len(),
            "row width {} does not match {} columns",
            row.len(),
            self.columns.len()
        );
        self.rows.push(row);
    }

    pub fn columns(&self) -> &[String] {
        &self.columns
    }

    pub fn rows(&self) -> &[Vec<Value>] {
        &self.rows
    }

    pub fn metadata(&self) -> &[(String, String)] {
        &self.metadata
    }

    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    fn column_index(&self, name: &str) -> usize {
        self.columns
            .iter()
            .position(|c| c == name)
            .unwrap_or_else(|| panic!("no column named {name:?}"))
    }

    /// The named column as `f64` values.
    pub fn column_f64(&self, name: &str) -> Vec<f64> {
        let idx = self.column_index(name);
        self.rows.iter().map(|r| r[idx].as_f64()).collect()
    }

    pub fn value(&self, name: &str, row: usize) -> Value {
        self.rows[row][self.column_index(name)]
    }

    /// Every `stride`-th row (0, stride, 2*stride, ...), metadata preserved.
    pub fn strided(&self, stride: usize) -> ResultTable {
        assert!(stride >= 1, "stride must be >= 1");
        let mut out = self.clone();
        out.rows = self.rows.iter().step_by(stride).cloned().collect();
        out.push_metadata("row_stride", stride.to_string());
        out
    }

    pub fn write_csv<W: io::Write>(&self, mut w: W) -> io::Result<()> {
        w.write_all(self.to_csv_string().as_bytes())
    }

    pub fn to_csv_string(&self) -> String {
        let mut out = String::new();
        for (key, value) in &self.metadata {
            let _ = writeln!(out, "# {key} = {value}");
        }
        let _ = writeln!(out, "{}", self.columns.join(","));
        for row in &self.rows {
            for (i, cell) in row.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                match cell {
                    Value::Int(v) => {
                        let _ = write!(out, "{v}");
                    }
                    // {:?} is the shortest representation that parses back
                    // to the same f64 and never depends on locale.
                    Value::Float(v) => {
                        let _ = write!(out, "{v:?}");
                    }
                }
            }
            out.push('\n');
        }
        out
    }
}
