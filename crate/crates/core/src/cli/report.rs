//! Schema-versioned report files.

use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::{Map, Value};

use super::Format;
use crate::error::{Error, Result};
use crate::io::{csv_bytes, write_atomic};

pub const REPORT_SCHEMA_VERSION: u32 = 1;

/// Writes `<out>/<name>.json` or `<out>/<name>.csv`. JSON carries
/// `schema_version` and `report`; CSV flattens the `rows` array when
/// present, otherwise the top-level fields as one row.
pub fn write_report(out: &Path, name: &str, format: Format, body: &impl Serialize) -> Result<PathBuf> {
    let mut obj = match serde_json::to_value(body)? {
        Value::Object(m) => m,
        other => {
            let mut m = Map::new();
            m.insert("value".into(), other);
            m
        }
    };
    obj.entry("schema_version").or_insert(Value::from(REPORT_SCHEMA_VERSION));
    obj.insert("report".into(), Value::from(name));
    let (path, bytes) = match format {
        Format::Json => {
            let mut b = serde_json::to_vec_pretty(&Value::Object(obj))?;
            b.push(b'\n');
            (out.join(format!("{name}.json")), b)
        }
        Format::Csv => (out.join(format!("{name}.csv")), to_csv(&obj)?),
    };
    write_atomic(&path, &bytes)?;
    Ok(path)
}

fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
    let key = |k: &str| if prefix.is_empty() { k.to_string() } else { format!("{prefix}.{k}") };
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                flatten(&key(k), x, out);
            }
        }
        Value::String(s) => out.push((prefix.to_string(), s.clone())),
        Value::Null => out.push((prefix.to_string(), String::new())),
        Value::Array(_) => out.push((prefix.to_string(), v.to_string())),
        _ => out.push((prefix.to_string(), v.to_string())),
    }
}

fn to_csv(obj: &Map<String, Value>) -> Result<Vec<u8>> {
    let records: Vec<Vec<(String, String)>> = match obj.get("rows") {
        Some(Value::Array(rows)) if !rows.is_empty() => rows
            .iter()
            .map(|r| {
                let mut cells = Vec::new();
                flatten("", r, &mut cells);
                cells
            })
            .collect(),
        _ => {
            let mut cells = Vec::new();
            for (k, v) in obj {
                if k != "rows" {
                    flatten(k, v, &mut cells);
                }
            }
            vec![cells]
        }
    };
    let header: Vec<String> = records[0].iter().map(|(k, _)| k.clone()).collect();
    let rows = records
        .into_iter()
        .map(|cells| {
            if cells.len() != header.len() {
                return Err(Error::Format("rows with differing columns".into()));
            }
            Ok(cells.into_iter().map(|(_, v)| v).collect())
        })
        .collect::<Result<Vec<Vec<String>>>>()?;
    let h: Vec<&str> = header.iter().map(String::as_str).collect();
    csv_bytes(&h, &rows)
}
