//! Tabular reports and their TSV / JSON-lines renderings.

use clap::ValueEnum;
use serde_json::{Map, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Tsv,
    Jsonl,
}

/// Header key-value pairs followed by rows with a fixed column order.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Report {
    pub header: Vec<(String, Value)>,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Value>>,
}

impl Report {
    pub fn new(columns: &[&'static str]) -> Self {
        Report {
            header: Vec::new(),
            columns: columns.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn note(&mut self, key: impl Into<String>, value: impl Into<Value>) {
        self.header.push((key.into(), value.into()));
    }

    pub fn push(&mut self, row: Vec<Value>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }
}

fn cell(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Array(items) => items.iter().map(cell).collect::<Vec<_>>().join(","),
        other => other.to_string(),
    }
}

pub fn emit_report(report: &Report, format: Format) -> String {
    let mut out = String::new();
    match format {
        Format::Tsv => {
            for (k, v) in &report.header {
                out.push_str(&format!("# {k} = {}\n", cell(v)));
            }
            out.push_str(&report.columns.join("\t"));
            out.push('\n');
            for row in &report.rows {
                out.push_str(&row.iter().map(cell).collect::<Vec<_>>().join("\t"));
                out.push('\n');
            }
        }
        Format::Jsonl => {
            let header: Map<String, Value> = report.header.iter().cloned().collect();
            let mut first = Map::new();
            first.insert("header".into(), Value::Object(header));
            out.push_str(&Value::Object(first).to_string());
            out.push('\n');
            for row in &report.rows {
                let record: Map<String, Value> = report
                    .columns
                    .iter()
                    .map(|c| c.to_string())
                    .zip(row.iter().cloned())
                    .collect();
                out.push_str(&Value::Object(record).to_string());
                out.push('\n');
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    fn sample() -> Report {
        let mut r = Report::new(&["degree", "label", "mult"]);
        r.note("version", "0.1.0");
        r.push(vec![json!(0), json!("triv"), json!(1)]);
        r.push(vec![json!(1), json!("sgn"), json!(0)]);
        r
    }

    #[test]
    fn tsv_layout() {
        assert_eq!(
            emit_report(&sample(), Format::Tsv),
            "# version = 0.1.0\ndegree\tlabel\tmult\n0\ttriv\t1\n1\tsgn\t0\n"
        );
    }

    #[test]
    fn jsonl_keeps_column_order() {
        let text = emit_report(&sample(), Format::Jsonl);
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], r#"{"header":{"version":"0.1.0"}}"#);
        assert_eq!(lines[1], r#"{"degree":0,"label":"triv","mult":1}"#);
    }

    #[test]
    fn arrays_join_in_tsv() {
        let mut r = Report::new(&["block", "members"]);
        r.push(vec![json!(0), json!(["triv", "sgn"])]);
        assert!(emit_report(&r, Format::Tsv).ends_with("0\ttriv,sgn\n"));
    }
}
