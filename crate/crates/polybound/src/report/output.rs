//! JSON and CSV serialisation of reports.

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{BoundError, Result};

pub const SCHEMA_VERSION: u32 = 1;

fn output_err(e: impl std::fmt::Display) -> BoundError {
    BoundError::Output(e.to_string())
}

#[derive(Debug, Serialize, Deserialize)]
pub struct Envelope<T> {
    pub schema_version: u32,
    pub command: String,
    #[serde(flatten)]
    pub body: T,
}

/// Pretty JSON with `schema_version` and `command` at the top level.
pub fn to_json<T: Serialize>(command: &str, body: &T) -> Result<String> {
    #[derive(Serialize)]
    struct Borrowed<'a, T> {
        schema_version: u32,
        command: &'a str,
        #[serde(flatten)]
        body: &'a T,
    }
    let mut s = serde_json::to_string_pretty(&Borrowed { schema_version: SCHEMA_VERSION, command, body }).map_err(output_err)?;
    s.push('\n');
    Ok(s)
}

pub fn from_json<T: DeserializeOwned>(text: &str) -> Result<Envelope<T>> {
    let env: Envelope<T> = serde_json::from_str(text).map_err(output_err)?;
    if env.schema_version != SCHEMA_VERSION {
        return Err(output_err(format!("schema_version {} is not {SCHEMA_VERSION}", env.schema_version)));
    }
    Ok(env)
}

/// One header line from the field names, then one line per row.
pub fn to_csv<T: Serialize>(rows: &[T]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).map_err(output_err)?;
    }
    let bytes = w.into_inner().map_err(output_err)?;
    String::from_utf8(bytes).map_err(output_err)
}

pub fn from_csv<T: DeserializeOwned>(text: &str) -> Result<Vec<T>> {
    csv::Reader::from_reader(text.as_bytes()).deserialize().map(|r| r.map_err(output_err)).collect()
}

/// `key,value` lines for every scalar leaf of a JSON document, with dotted
/// paths (array elements by index). For summaries that are not tables.
pub fn key_value_csv<T: Serialize>(body: &T) -> Result<String> {
    fn walk(prefix: &str, v: &serde_json::Value, out: &mut Vec<(String, String)>) {
        let join = |k: &str| if prefix.is_empty() { k.to_string() } else { format!("{prefix}.{k}") };
        match v {
            serde_json::Value::Object(m) => m.iter().for_each(|(k, x)| walk(&join(k), x, out)),
            serde_json::Value::Array(a) => a.iter().enumerate().for_each(|(i, x)| walk(&join(&i.to_string()), x, out)),
            serde_json::Value::String(s) => out.push((prefix.to_string(), s.clone())),
            serde_json::Value::Null => out.push((prefix.to_string(), String::new())),
            other => out.push((prefix.to_string(), other.to_string())),
        }
    }
    let mut pairs = vec![("schema_version".to_string(), SCHEMA_VERSION.to_string())];
    walk("", &serde_json::to_value(body).map_err(output_err)?, &mut pairs);
    #[derive(Serialize)]
    struct Kv {
        key: String,
        value: String,
    }
    to_csv(&pairs.into_iter().map(|(key, value)| Kv { key, value }).collect::<Vec<_>>())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
    struct Row {
        k: u64,
        name: String,
        x: f64,
        y: Option<f64>,
        ok: Option<bool>,
    }

    #[test]
    fn csv_round_trip_is_exact() {
        let rows = vec![
            Row { k: 1, name: "a,b".into(), x: 0.1 + 0.2, y: None, ok: Some(true) },
            Row { k: 2, name: "\"q\"".into(), x: -1.234_567_890_123_456_7e-300, y: Some(1e300), ok: None },
        ];
        let text = to_csv(&rows).unwrap();
        assert!(text.starts_with("k,name,x,y,ok\n"));
        assert_eq!(from_csv::<Row>(&text).unwrap(), rows);
    }

    #[test]
    fn json_carries_the_schema_version() {
        let r = Row { k: 3, name: "z".into(), x: 2.5, y: None, ok: None };
        let text = to_json("compare", &r).unwrap();
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["schema_version"], 1);
        assert_eq!(v["command"], "compare");
        let back: Envelope<Row> = from_json(&text).unwrap();
        assert_eq!(back.body, r);
    }

    #[test]
    fn key_value_flattening() {
        let r = Row { k: 3, name: "z".into(), x: 2.5, y: None, ok: Some(false) };
        let text = key_value_csv(&r).unwrap();
        assert!(text.contains("schema_version,1\n") && text.contains("x,2.5\n") && text.contains("y,\n"));
    }
}
