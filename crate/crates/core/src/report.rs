//! Output helpers: 17-significant-digit floats, JSON-lines records and CSV rows.

use std::fmt::Write as _;

use num_complex::Complex64;

/// Formats a float with 17 significant digits (round-trips exactly).
pub fn fmt_f64(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else if v.is_nan() {
        "nan".to_string()
    } else if v > 0.0 {
        "inf".to_string()
    } else {
        "-inf".to_string()
    }
}

/// One JSON object per line. Floats are written with 17 significant digits,
/// non-finite values as `null`.
#[derive(Debug, Default, Clone)]
pub struct Record {
    fields: Vec<(String, String)>,
}

impl Record {
    pub fn new(kind: &str) -> Self {
        Self::default().str("record", kind)
    }

    pub fn str(mut self, key: &str, value: &str) -> Self {
        let v = serde_json::to_string(value).expect("strings always serialize");
        self.fields.push((key.to_string(), v));
        self
    }

    pub fn num(mut self, key: &str, value: f64) -> Self {
        let v = if value.is_finite() { fmt_f64(value) } else { "null".to_string() };
        self.fields.push((key.to_string(), v));
        self
    }

    pub fn int(mut self, key: &str, value: i64) -> Self {
        self.fields.push((key.to_string(), value.to_string()));
        self
    }

    pub fn boolean(mut self, key: &str, value: bool) -> Self {
        self.fields.push((key.to_string(), value.to_string()));
        self
    }

    pub fn ints(mut self, key: &str, values: &[usize]) -> Self {
        let body: Vec<String> = values.iter().map(|v| v.to_string()).collect();
        self.fields.push((key.to_string(), format!("[{}]", body.join(","))));
        self
    }

    pub fn complexes(mut self, key: &str, values: &[Complex64]) -> Self {
        let body: Vec<String> = values
            .iter()
            .map(|v| format!("[{},{}]", fmt_f64(v.re), fmt_f64(v.im)))
            .collect();
        self.fields.push((key.to_string(), format!("[{}]", body.join(","))));
        self
    }

    pub fn render(&self) -> String {
        let mut out = String::from("{");
        for (i, (k, v)) in self.fields.iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            let _ = write!(out, "{}:{}", serde_json::to_string(k).unwrap(), v);
        }
        out.push('}');
        out
    }
}

/// Minimal CSV writer for numeric tables; fields never contain commas.
#[derive(Debug, Clone)]
pub struct CsvTable {
    header: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl CsvTable {
    pub fn new(header: &[&str]) -> Self {
        Self { header: header.iter().map(|h| h.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        assert_eq!(row.len(), self.header.len(), "csv row width");
        self.rows.push(row);
    }

    pub fn rows(&self) -> &[Vec<String>] {
        &self.rows
    }

    pub fn render(&self) -> String {
        let mut out = self.header.join(",");
        out.push('\n');
        for row in &self.rows {
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_digits() {
        assert_eq!(fmt_f64(0.1), "1.0000000000000001e-1");
        assert_eq!(fmt_f64(0.1).parse::<f64>().unwrap(), 0.1);
        assert_eq!(fmt_f64(f64::INFINITY), "inf");
    }

    #[test]
    fn records_are_json() {
        let line = Record::new("check").num("sup", 0.25).int("pairs", 16).str("name", "a\"b").render();
        let v: serde_json::Value = serde_json::from_str(&line).unwrap();
        assert_eq!(v["pairs"], 16);
        assert_eq!(v["sup"].as_f64().unwrap(), 0.25);
        assert_eq!(v["name"], "a\"b");
    }
}
