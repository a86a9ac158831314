use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use super::EntanglementEvents;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LabelledEvents {
    pub label: String,
    pub events: EntanglementEvents,
}

/// A multi-column numeric table with the parameters that produced it.
/// Missing cells are `None` and render empty.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Table {
    pub name: String,
    pub parameters: BTreeMap<String, String>,
    pub x_label: String,
    pub columns: Vec<String>,
    pub x: Vec<f64>,
    pub rows: Vec<Vec<Option<f64>>>,
    pub events: Vec<LabelledEvents>,
}

/// Twelve significant digits, scientific notation.
pub fn format_value(v: f64) -> String {
    let v = if v == 0.0 { 0.0 } else { v };
    format!("{v:.11e}")
}

impl Table {
    pub fn column(&self, label: &str) -> Option<Vec<Option<f64>>> {
        let j = self.columns.iter().position(|c| c == label)?;
        Some(self.rows.iter().map(|r| r[j]).collect())
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# {}", self.name);
        for (k, v) in &self.parameters {
            let _ = writeln!(out, "# {k} = {v}");
        }
        let _ = writeln!(out, "{},{}", self.x_label, self.columns.join(","));
        for (x, row) in self.x.iter().zip(&self.rows) {
            out.push_str(&format_value(*x));
            for cell in row {
                out.push(',');
                if let Some(v) = cell {
                    out.push_str(&format_value(*v));
                }
            }
            out.push('\n');
        }
        out
    }

    fn header_json(&self) -> Value {
        json!({
            "name": self.name,
            "parameters": self.parameters,
            "x_label": self.x_label,
            "columns": self.columns,
            "events": self.events,
        })
    }

    /// Sidecar for a CSV export: everything but the data, plus the CSV digest.
    pub fn summary_json(&self) -> Value {
        let mut v = self.header_json();
        v["csv_sha256"] = Value::String(hex::encode(Sha256::digest(self.to_csv().as_bytes())));
        v
    }

    /// Full table as JSON; numbers carry the same twelve digits as the CSV.
    pub fn to_json(&self) -> Value {
        let mut v = self.header_json();
        let cell = |x: f64| format_value(x).parse::<f64>().map(Value::from).unwrap_or(Value::Null);
        let rows: Vec<Value> = self
            .x
            .iter()
            .zip(&self.rows)
            .map(|(x, row)| {
                let mut r = vec![cell(*x)];
                r.extend(row.iter().map(|c| c.map_or(Value::Null, cell)));
                Value::Array(r)
            })
            .collect();
        v["rows"] = Value::Array(rows);
        v
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Table {
        Table {
            name: "t".into(),
            parameters: BTreeMap::from([("r12".into(), "0.125".into())]),
            x_label: "gamma_t".into(),
            columns: vec!["a".into(), "b".into()],
            x: vec![0.0, 0.5],
            rows: vec![vec![Some(1.0), None], vec![Some(-0.25), Some(1.0 / 3.0)]],
            events: vec![],
        }
    }

    #[test]
    fn csv_layout() {
        let csv = sample().to_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "# t");
        assert_eq!(lines[1], "# r12 = 0.125");
        assert_eq!(lines[2], "gamma_t,a,b");
        assert_eq!(lines[3], "0.00000000000e0,1.00000000000e0,");
        assert_eq!(lines[4], "5.00000000000e-1,-2.50000000000e-1,3.33333333333e-1");
    }

    #[test]
    fn negative_zero_prints_as_zero() {
        assert_eq!(format_value(-0.0), format_value(0.0));
    }

    #[test]
    fn summary_digest_tracks_content() {
        let a = sample();
        let mut b = sample();
        assert_eq!(a.summary_json(), b.summary_json());
        b.rows[0][0] = Some(0.5);
        assert_ne!(a.summary_json()["csv_sha256"], b.summary_json()["csv_sha256"]);
        assert_eq!(a.to_json()["rows"][0][2], Value::Null);
    }
}
