// Copyright 2026 Wavematrix Contributors
// SPDX-License-Identifier: Apache-2.0

//! Flat, ordered result rows with lossless CSV and JSON serialization.
//!
//! Reals are written in scientific notation with 17 significant digits, so
//! a CSV round trip reproduces the exact f64 bits.

use std::io::Write;
use std::path::Path;

use crate::{CliError, Result};

/// One cell of a result row.
#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    UInt(u64),
    Float(f64),
    Bool(bool),
    Str(String),
    /// Column not populated for this row ("" in CSV, null in JSON).
    Missing,
}

impl From<u64> for Value {
    fn from(v: u64) -> Self {
        Value::UInt(v)
    }
}

impl From<usize> for Value {
    fn from(v: usize) -> Self {
        Value::UInt(v as u64)
    }
}

impl From<f64> for Value {
    fn from(v: f64) -> Self {
        Value::Float(v)
    }
}

impl From<bool> for Value {
    fn from(v: bool) -> Self {
        Value::Bool(v)
    }
}

impl From<&str> for Value {
    fn from(v: &str) -> Self {
        Value::Str(v.to_string())
    }
}

impl From<String> for Value {
    fn from(v: String) -> Self {
        Value::Str(v)
    }
}

impl Value {
    pub fn to_field(&self) -> String {
        match self {
            Value::UInt(v) => v.to_string(),
            Value::Float(v) => format!("{v:.16e}"),
            Value::Bool(v) => v.to_string(),
            Value::Str(v) => v.clone(),
            Value::Missing => String::new(),
        }
    }

    fn to_json(&self) -> serde_json::Value {
        match self {
            Value::UInt(v) => serde_json::Value::from(*v),
            Value::Float(v) => serde_json::Value::from(*v),
            Value::Bool(v) => serde_json::Value::from(*v),
            Value::Str(v) => serde_json::Value::from(v.clone()),
            Value::Missing => serde_json::Value::Null,
        }
    }
}

/// An ordered flat key→value row.
#[derive(Debug, Clone, Default)]
pub struct ResultRecord {
    fields: Vec<(String, Value)>,
}

impl ResultRecord {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, key: &str, value: impl Into<Value>) -> &mut Self {
        self.fields.push((key.to_string(), value.into()));
        self
    }

    pub fn get(&self, key: &str) -> Option<&Value> {
        self.fields.iter().find(|(k, _)| k == key).map(|(_, v)| v)
    }

    pub fn keys(&self) -> impl Iterator<Item = &str> {
        self.fields.iter().map(|(k, _)| k.as_str())
    }

    pub fn fields(&self) -> &[(String, Value)] {
        &self.fields
    }
}

/// Serializes rows as CSV with a header; every row must share the first
/// row's column set.
pub fn write_csv<W: Write>(rows: &[ResultRecord], sink: W) -> Result<()> {
    let mut writer = csv::Writer::from_writer(sink);
    if rows.is_empty() {
        writer.flush()?;
        return Ok(());
    }
    let header: Vec<&str> = rows[0].keys().collect();
    writer.write_record(&header)?;
    for row in rows {
        let keys: Vec<&str> = row.keys().collect();
        if keys != header {
            return Err(CliError::usage(format!(
                "inconsistent row schema: {keys:?} vs {header:?}"
            )));
        }
        let fields: Vec<String> = row.fields().iter().map(|(_, v)| v.to_field()).collect();
        writer.write_record(&fields)?;
    }
    writer.flush()?;
    Ok(())
}

/// Serializes rows as a JSON array of flat objects with the same keys and
/// values as the CSV form.
pub fn write_json<W: Write>(rows: &[ResultRecord], mut sink: W) -> Result<()> {
    let array: Vec<serde_json::Value> = rows
        .iter()
        .map(|row| {
            let mut obj = serde_json::Map::new();
            for (k, v) in row.fields() {
                obj.insert(k.clone(), v.to_json());
            }
            serde_json::Value::Object(obj)
        })
        .collect();
    serde_json::to_writer_pretty(&mut sink, &array)?;
    sink.write_all(b"\n")?;
    Ok(())
}

pub fn write_rows_to_path(
    rows: &[ResultRecord],
    format: crate::config::OutputFormat,
    path: &Path,
) -> Result<()> {
    let file = std::fs::File::create(path)?;
    match format {
        crate::config::OutputFormat::Csv => write_csv(rows, file),
        crate::config::OutputFormat::Json => write_json(rows, file),
    }
}

pub fn rows_to_string(rows: &[ResultRecord], format: crate::config::OutputFormat) -> Result<String> {
    let mut buf = Vec::new();
    match format {
        crate::config::OutputFormat::Csv => write_csv(rows, &mut buf)?,
        crate::config::OutputFormat::Json => write_json(rows, &mut buf)?,
    }
    Ok(String::from_utf8(buf).expect("serializers emit utf-8"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::OutputFormat;

    fn sample_rows() -> Vec<ResultRecord> {
        let mut a = ResultRecord::new();
        a.push("d", 2usize)
            .push("value", 0.1f64)
            .push("ok", true)
            .push("tag", "x")
            .push("gap", Value::Missing);
        let mut b = ResultRecord::new();
        b.push("d", 3usize)
            .push("value", 1.0 / 3.0)
            .push("ok", false)
            .push("tag", "y")
            .push("gap", Value::Missing);
        vec![a, b]
    }

    #[test]
    fn csv_round_trips_floats_losslessly() {
        let rows = sample_rows();
        let text = rows_to_string(&rows, OutputFormat::Csv).unwrap();
        let mut reader = csv::Reader::from_reader(text.as_bytes());
        let parsed: Vec<csv::StringRecord> = reader.records().map(|r| r.unwrap()).collect();
        let v: f64 = parsed[1][1].parse().unwrap();
        assert_eq!(v.to_bits(), (1.0f64 / 3.0).to_bits());
    }

    #[test]
    fn csv_and_json_values_agree_field_for_field() {
        let rows = sample_rows();
        let json_text = rows_to_string(&rows, OutputFormat::Json).unwrap();
        let parsed: serde_json::Value = serde_json::from_str(&json_text).unwrap();
        for (row, obj) in rows.iter().zip(parsed.as_array().unwrap()) {
            for (key, value) in row.fields() {
                let jv = &obj[key];
                match value {
                    Value::Float(f) => assert_eq!(jv.as_f64().unwrap().to_bits(), f.to_bits()),
                    Value::UInt(u) => assert_eq!(jv.as_u64().unwrap(), *u),
                    Value::Bool(b) => assert_eq!(jv.as_bool().unwrap(), *b),
                    Value::Str(s) => assert_eq!(jv.as_str().unwrap(), s),
                    Value::Missing => assert!(jv.is_null()),
                }
            }
        }
    }

    #[test]
    fn schema_mismatch_is_an_error() {
        let mut rows = sample_rows();
        rows[1] = ResultRecord::new();
        rows[1].push("other", 1usize);
        assert!(rows_to_string(&rows, OutputFormat::Csv).is_err());
    }
}
