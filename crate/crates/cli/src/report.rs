use std::time::Duration;

use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

pub const SCHEMA_VERSION: u32 = 1;

/// A results table: one row per item, cells as JSON values.
#[derive(Debug, Default)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Value>>,
}

impl Table {
    pub fn new(columns: &[&'static str]) -> Self {
        Table { columns: columns.to_vec(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Value>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    fn to_json(&self) -> Value {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|r| Value::Object(self.columns.iter().map(|c| c.to_string()).zip(r.iter().cloned()).collect()))
            .collect();
        Value::Array(rows)
    }
}

/// What a command produced, before it is wrapped into a report.
#[derive(Debug, Default)]
pub struct Outcome {
    pub table: Table,
    pub details: Map<String, Value>,
    /// `(id, passed, detail)` per checked property.
    pub properties: Vec<Value>,
    pub failed: bool,
}

pub struct RunReport {
    pub command: String,
    pub digest: String,
    pub seed: u64,
    pub config: Value,
    pub outcome: Option<Outcome>,
    pub error: Option<String>,
    pub wall_time: Option<Duration>,
}

pub fn digest(inputs: &[Vec<u8>]) -> String {
    let mut h = Sha256::new();
    for bytes in inputs {
        h.update((bytes.len() as u64).to_le_bytes());
        h.update(bytes);
    }
    h.finalize().iter().map(|b| format!("{b:02x}")).collect()
}

impl RunReport {
    pub fn passed(&self) -> bool {
        self.error.is_none() && self.outcome.as_ref().is_some_and(|o| !o.failed)
    }

    /// Keys come out sorted because `serde_json` maps are ordered.
    pub fn to_json(&self) -> Value {
        let mut v = json!({
            "schema_version": SCHEMA_VERSION,
            "command": self.command,
            "inputs_digest": self.digest,
            "seed": self.seed,
            "config": self.config,
            "passed": self.passed(),
        });
        let m = v.as_object_mut().expect("object");
        if let Some(o) = &self.outcome {
            m.insert("results".into(), o.table.to_json());
            m.insert("details".into(), Value::Object(o.details.clone()));
            m.insert("properties".into(), Value::Array(o.properties.clone()));
        }
        if let Some(e) = &self.error {
            m.insert("error".into(), Value::String(e.clone()));
        }
        if let Some(t) = self.wall_time {
            m.insert("wall_time_ms".into(), json!(t.as_secs_f64() * 1e3));
        }
        v
    }

    pub fn to_csv(&self) -> anyhow::Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        match &self.outcome {
            Some(o) => {
                w.write_record(&o.table.columns)?;
                for row in &o.table.rows {
                    w.write_record(row.iter().map(cell))?;
                }
            }
            None => {
                w.write_record(["error"])?;
                w.write_record([self.error.clone().unwrap_or_default()])?;
            }
        }
        Ok(String::from_utf8(w.into_inner()?)?)
    }
}

fn cell(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        other => other.to_string(),
    }
}
