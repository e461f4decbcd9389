//! Tabular results with embedded metadata, rendered as CSV or JSON.

use std::fmt::Write as _;

use serde_json::{json, Map, Value};

/// Prefix of metadata keys that hold the resolved configuration.
pub const CONFIG_PREFIX: &str = "config.";

#[derive(Debug, Clone, PartialEq)]
pub struct ResultTable {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
    /// Ordered `(key, value)` pairs written before the data.
    pub metadata: Vec<(String, String)>,
}

/// Seventeen significant digits, the same on every platform.
pub fn format_number(x: f64) -> String {
    format!("{x:.16e}")
}

impl ResultTable {
    pub fn new(columns: Vec<String>) -> Self {
        Self {
            columns,
            rows: Vec::new(),
            metadata: Vec::new(),
        }
    }

    pub fn push_row(&mut self, row: Vec<f64>) {
        assert_eq!(row.len(), self.columns.len(), "row width must match the header");
        self.rows.push(row);
    }

    pub fn meta(&mut self, key: impl Into<String>, value: impl Into<String>) {
        self.metadata.push((key.into(), value.into()));
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let idx = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[idx]).collect())
    }

    /// `# key = value` lines, a header row, then one line per record.
    pub fn to_csv(&self) -> String {
        let mut s = String::new();
        for (k, v) in &self.metadata {
            let _ = writeln!(s, "# {k} = {v}");
        }
        let _ = writeln!(s, "{}", self.columns.join(","));
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|x| format_number(*x)).collect();
            let _ = writeln!(s, "{}", cells.join(","));
        }
        s
    }

    pub fn to_json(&self) -> String {
        let mut meta = Map::new();
        for (k, v) in &self.metadata {
            meta.insert(k.clone(), Value::String(v.clone()));
        }
        // serde_json prints the shortest representation that round-trips.
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|r| Value::Array(r.iter().map(|x| Value::from(*x)).collect()))
            .collect();
        let doc = json!({
            "metadata": Value::Object(meta),
            "columns": self.columns,
            "rows": rows,
        });
        let mut out = serde_json::to_string_pretty(&doc).expect("table serialises");
        out.push('\n');
        out
    }

    /// Metadata lines of a CSV document.
    pub fn parse_csv_metadata(csv: &str) -> Vec<(String, String)> {
        csv.lines()
            .take_while(|l| l.starts_with('#'))
            .filter_map(|l| {
                let (k, v) = l.trim_start_matches('#').split_once('=')?;
                Some((k.trim().to_string(), v.trim().to_string()))
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> ResultTable {
        let mut t = ResultTable::new(vec!["x".into(), "y".into()]);
        t.meta("config.mode", "spectrum");
        t.push_row(vec![0.1, -2.5]);
        t.push_row(vec![1.0, 1e-300]);
        t
    }

    #[test]
    fn csv_layout() {
        let csv = sample().to_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "# config.mode = spectrum");
        assert_eq!(lines[1], "x,y");
        assert_eq!(lines[2], "1.0000000000000001e-1,-2.5000000000000000e0");
        assert_eq!(lines.len(), 4);
    }

    #[test]
    fn csv_numbers_round_trip() {
        for x in [0.1, 1.0 / 3.0, -7.25e-13, 123456.789, f64::MIN_POSITIVE] {
            assert_eq!(format_number(x).parse::<f64>().unwrap(), x);
        }
    }

    #[test]
    fn metadata_parses_back() {
        let meta = ResultTable::parse_csv_metadata(&sample().to_csv());
        assert_eq!(meta, vec![("config.mode".to_string(), "spectrum".to_string())]);
    }

    #[test]
    fn json_layout() {
        let v: Value = serde_json::from_str(&sample().to_json()).unwrap();
        assert_eq!(v["columns"][1], "y");
        assert_eq!(v["rows"][0][1].as_f64(), Some(-2.5));
        assert_eq!(v["metadata"]["config.mode"], "spectrum");
    }

    #[test]
    #[should_panic]
    fn rejects_ragged_rows() {
        let mut t = ResultTable::new(vec!["a".into()]);
        t.push_row(vec![1.0, 2.0]);
    }
}
