use serde_json::{Map, Value};

/// Ordered key/value output, printed either as `key value` lines or as one
/// JSON object per record.
#[derive(Default)]
pub struct Report {
    records: Vec<Map<String, Value>>,
}

impl Report {
    pub fn record(&mut self) -> &mut Map<String, Value> {
        self.records.push(Map::new());
        self.records.last_mut().unwrap()
    }

    pub fn print(&self, json: bool) {
        for rec in &self.records {
            if json {
                println!("{}", Value::Object(rec.clone()));
            } else {
                for (k, v) in rec {
                    println!("{k} {}", plain(v));
                }
            }
        }
    }
}

fn plain(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Array(items) => items.iter().map(plain).collect::<Vec<_>>().join(" "),
        other => other.to_string(),
    }
}
