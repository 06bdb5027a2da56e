use std::io::Write;

use serde::Serialize;
use serde_json::{json, Map, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// A result table plus a summary block. CSV puts the summary after the rows
/// as `# key: value` lines; JSON nests both in one object.
pub struct Table {
    headers: Vec<String>,
    rows: Vec<Vec<String>>,
    summary: Vec<(String, Value)>,
}

impl Table {
    pub fn new(headers: &[&str]) -> Self {
        Table {
            headers: headers.iter().map(|h| h.to_string()).collect(),
            rows: Vec::new(),
            summary: Vec::new(),
        }
    }

    /// From serializable records; headers come from the field names.
    pub fn from_records<T: Serialize>(records: &[T]) -> Self {
        let mut table = Table::new(&[]);
        for r in records {
            let Value::Object(map) = serde_json::to_value(r).expect("record serializes") else {
                panic!("records must serialize to objects");
            };
            if table.headers.is_empty() {
                table.headers = map.keys().cloned().collect();
            }
            table.rows.push(map.values().map(plain).collect());
        }
        table
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.headers.len());
        self.rows.push(row);
    }

    pub fn summary(&mut self, key: &str, value: impl Into<Value>) {
        self.summary.push((key.to_string(), value.into()));
    }

    pub fn write<W: Write>(&self, out: &mut W, format: Format) -> std::io::Result<()> {
        match format {
            Format::Csv => {
                let mut wtr = csv::Writer::from_writer(&mut *out);
                wtr.write_record(&self.headers)?;
                for row in &self.rows {
                    wtr.write_record(row)?;
                }
                wtr.flush()?;
                drop(wtr);
                for (k, v) in &self.summary {
                    writeln!(out, "# {k}: {}", plain(v))?;
                }
            }
            Format::Json => {
                let rows: Vec<Value> = self
                    .rows
                    .iter()
                    .map(|r| {
                        let m: Map<String, Value> = self
                            .headers
                            .iter()
                            .cloned()
                            .zip(r.iter().map(|v| Value::String(v.clone())))
                            .collect();
                        Value::Object(m)
                    })
                    .collect();
                let summary: Map<String, Value> = self.summary.iter().cloned().collect();
                let doc = json!({ "rows": rows, "summary": summary });
                serde_json::to_writer_pretty(&mut *out, &doc)?;
                writeln!(out)?;
            }
        }
        Ok(())
    }
}

/// Strings print without quotes; everything else as compact JSON.
fn plain(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}
