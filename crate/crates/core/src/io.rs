//! File ingestion and atomic report writing.

use std::collections::BTreeMap;
use std::io::{BufRead, BufReader, Read, Write};
use std::path::Path;

use serde::de::DeserializeOwned;

use crate::error::{Error, Result};

/// Writes `bytes` to `path` through a temp file in the same directory, so
/// readers never observe a partial file.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| Error::io(dir, e))?;
    tmp.write_all(bytes).map_err(|e| Error::io(path, e))?;
    tmp.persist(path).map_err(|e| Error::io(path, e.error))?;
    Ok(())
}

/// Feature rows with one label per row.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Dataset {
    pub feature_names: Vec<String>,
    pub features: Vec<Vec<f64>>,
    pub labels: Vec<String>,
}

impl Dataset {
    pub fn len(&self) -> usize {
        self.features.len()
    }

    pub fn is_empty(&self) -> bool {
        self.features.is_empty()
    }

    /// Distinct labels in first-seen order.
    pub fn classes(&self) -> Vec<String> {
        let mut out: Vec<String> = Vec::new();
        for l in &self.labels {
            if !out.contains(l) {
                out.push(l.clone());
            }
        }
        out
    }

    pub fn subset(&self, idx: &[usize]) -> Dataset {
        Dataset {
            feature_names: self.feature_names.clone(),
            features: idx.iter().map(|&i| self.features[i].clone()).collect(),
            labels: idx.iter().map(|&i| self.labels[i].clone()).collect(),
        }
    }
}

/// Reads a headed CSV. `label_column` names the label column; `None` means
/// every column is a feature and labels are empty strings.
pub fn read_csv_dataset(reader: impl Read, label_column: Option<&str>) -> Result<Dataset> {
    let mut rdr = csv::Reader::from_reader(reader);
    let headers: Vec<String> = rdr.headers()?.iter().map(str::to_string).collect();
    let label_idx = match label_column {
        Some(name) => Some(
            headers
                .iter()
                .position(|h| h == name)
                .ok_or_else(|| Error::InvalidInput(format!("no label column {name:?}")))?,
        ),
        None => None,
    };
    let feature_names = headers
        .iter()
        .enumerate()
        .filter(|(i, _)| Some(*i) != label_idx)
        .map(|(_, h)| h.clone())
        .collect();
    let mut ds = Dataset {
        feature_names,
        ..Default::default()
    };
    for (row, record) in rdr.records().enumerate() {
        let record = record?;
        let mut feats = Vec::with_capacity(headers.len());
        let mut label = String::new();
        for (i, field) in record.iter().enumerate() {
            if Some(i) == label_idx {
                label = field.to_string();
            } else {
                let v: f64 = field.trim().parse().map_err(|_| {
                    Error::InvalidInput(format!("row {}: bad number {field:?}", row + 1))
                })?;
                feats.push(v);
            }
        }
        ds.features.push(feats);
        ds.labels.push(label);
    }
    Ok(ds)
}

pub fn load_csv_dataset(path: &Path, label_column: Option<&str>) -> Result<Dataset> {
    let f = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    read_csv_dataset(f, label_column)
}

/// Reads one JSON value per non-blank line.
pub fn read_jsonl<T: DeserializeOwned>(reader: impl Read) -> Result<Vec<T>> {
    let mut out = Vec::new();
    for (n, line) in BufReader::new(reader).lines().enumerate() {
        let line = line.map_err(|e| Error::io("<jsonl>", e))?;
        if line.trim().is_empty() {
            continue;
        }
        out.push(
            serde_json::from_str(&line)
                .map_err(|e| Error::Format(format!("line {}: {e}", n + 1)))?,
        );
    }
    Ok(out)
}

pub fn load_jsonl<T: DeserializeOwned>(path: &Path) -> Result<Vec<T>> {
    let f = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    read_jsonl(f)
}

/// Edge list: one `u v` pair per line, whitespace or comma separated;
/// `#` starts a comment. Node names are arbitrary tokens.
pub fn read_edge_list(reader: impl Read) -> Result<Vec<(String, String)>> {
    let mut edges = Vec::new();
    for (n, line) in BufReader::new(reader).lines().enumerate() {
        let line = line.map_err(|e| Error::io("<edges>", e))?;
        let body = line.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let toks: Vec<&str> = body
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|t| !t.is_empty())
            .collect();
        match toks.as_slice() {
            [u, v] => edges.push((u.to_string(), v.to_string())),
            _ => {
                return Err(Error::Format(format!(
                    "line {}: expected two node ids, got {body:?}",
                    n + 1
                )))
            }
        }
    }
    Ok(edges)
}

pub fn load_edge_list(path: &Path) -> Result<Vec<(String, String)>> {
    let f = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    read_edge_list(f)
}

/// Serializes rows of string cells as CSV.
pub fn csv_bytes(header: &[&str], rows: &[Vec<String>]) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header)?;
    for r in rows {
        w.write_record(r)?;
    }
    w.into_inner()
        .map_err(|e| Error::Format(format!("csv flush: {e}")))
}

/// Ordered string map used in JSON-lines inputs.
pub type FieldMap<V> = BTreeMap<String, V>;
