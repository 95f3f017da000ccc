use serde_json::{Map, Value};

/// Ordered key/value summary printed as `key=value` lines or one JSON object.
#[derive(Default)]
pub struct Output {
    fields: Map<String, Value>,
    notes: Vec<String>,
}

impl Output {
    pub fn put(&mut self, key: &str, value: impl Into<Value>) {
        self.fields.insert(key.to_string(), value.into());
    }

    /// Free-text line shown in key=value mode and collected under `notes` in JSON mode.
    pub fn note(&mut self, text: impl Into<String>) {
        self.notes.push(text.into());
    }

    pub fn is_empty(&self) -> bool {
        self.fields.is_empty() && self.notes.is_empty()
    }

    pub fn print(mut self, json: bool) {
        if json {
            if !self.notes.is_empty() {
                self.fields.insert("notes".into(), self.notes.into());
            }
            println!("{}", serde_json::to_string_pretty(&Value::Object(self.fields)).expect("serializable"));
        } else {
            for n in &self.notes {
                println!("# {n}");
            }
            for (k, v) in &self.fields {
                print_flat(k, v);
            }
        }
    }
}

fn print_flat(prefix: &str, value: &Value) {
    match value {
        Value::Object(map) => {
            for (k, v) in map {
                print_flat(&format!("{prefix}.{k}"), v);
            }
        }
        Value::String(s) => println!("{prefix}={s}"),
        Value::Null => {}
        other => println!("{prefix}={other}"),
    }
}
