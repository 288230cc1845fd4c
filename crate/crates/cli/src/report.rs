use serde_json::{Map, Number, Value};
use std::fmt::Write as _;

type Entries = Vec<(String, Value)>;

/// Named sections of `key=value` entries, rendered either as text blocks or
/// as one JSON object with a member per section.
#[derive(Debug, Default)]
pub struct Report {
    sections: Vec<(String, Entries)>,
}

impl Report {
    pub fn section(&mut self, name: &str) -> Section<'_> {
        self.sections.push((name.to_string(), Vec::new()));
        Section(&mut self.sections.last_mut().expect("just pushed").1)
    }

    /// The value stored under `section.key`, if any.
    pub fn get(&self, section: &str, key: &str) -> Option<&Value> {
        self.sections
            .iter()
            .filter(|(n, _)| n == section)
            .flat_map(|(_, e)| e.iter())
            .find(|(k, _)| k == key)
            .map(|(_, v)| v)
    }

    pub fn render(&self, json: bool) -> String {
        if json {
            let mut top = Map::new();
            for (name, entries) in &self.sections {
                let obj: Map<String, Value> = entries.iter().cloned().collect();
                top.insert(name.clone(), Value::Object(obj));
            }
            let mut s = serde_json::to_string_pretty(&Value::Object(top)).expect("values are serializable");
            s.push('\n');
            return s;
        }
        let mut s = String::new();
        for (i, (name, entries)) in self.sections.iter().enumerate() {
            if i > 0 {
                s.push('\n');
            }
            let _ = writeln!(s, "[{name}]");
            for (k, v) in entries {
                let text = match v {
                    Value::String(t) => t.clone(),
                    Value::Null => "none".to_string(),
                    other => other.to_string(),
                };
                let _ = writeln!(s, "{k}={text}");
            }
        }
        s
    }
}

pub struct Section<'a>(&'a mut Entries);

impl Section<'_> {
    pub fn put(&mut self, key: &str, value: impl Into<Value>) -> &mut Self {
        self.0.push((key.to_string(), value.into()));
        self
    }

    /// Non-finite floats become `null` in JSON and `none` in text.
    pub fn num(&mut self, key: &str, x: f64) -> &mut Self {
        let v = Number::from_f64(x).map(Value::Number).unwrap_or(Value::Null);
        self.put(key, v)
    }
}
