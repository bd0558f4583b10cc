//! Report values and their JSON / CSV emission.
//!
//! Every float is written with 17 significant digits so that reports parse
//! back to the same `f64`. Infinity is written as the string `"inf"`.

use std::io::Write;

use serde_json::{Map, Number, Value};

use crate::error::CliResult;

/// A float as a JSON value with 17 significant digits.
pub fn num(x: f64) -> Value {
    if x.is_finite() {
        let text = format!("{x:.16e}");
        Value::Number(text.parse::<Number>().expect("formatted float is valid JSON"))
    } else if x == f64::INFINITY {
        Value::String("inf".into())
    } else if x == f64::NEG_INFINITY {
        Value::String("-inf".into())
    } else {
        Value::Null
    }
}

pub fn nums(xs: &[f64]) -> Value {
    Value::Array(xs.iter().map(|&x| num(x)).collect())
}

pub fn nums2(xs: &[Vec<f64>]) -> Value {
    Value::Array(xs.iter().map(|row| nums(row)).collect())
}

/// Ordered JSON object builder.
#[derive(Debug, Default)]
pub struct Report(Map<String, Value>);

impl Report {
    pub fn new(command: &str) -> Self {
        let mut map = Map::new();
        map.insert("command".into(), Value::String(command.into()));
        Report(map)
    }

    pub fn set(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.0.insert(key.into(), value.into());
        self
    }

    pub fn float(self, key: &str, x: f64) -> Self {
        self.set(key, num(x))
    }

    pub fn into_value(self) -> Value {
        Value::Object(self.0)
    }
}

pub fn write_json(value: &Value, out: &mut dyn Write) -> std::io::Result<()> {
    serde_json::to_writer_pretty(&mut *out, value)?;
    writeln!(out)
}

/// Flattens the report into `key,value` rows; nested keys are joined with `.`
/// and array entries use their index.
pub fn write_csv(value: &Value, out: &mut dyn Write) -> CliResult<()> {
    let mut writer = csv::Writer::from_writer(out);
    writer.write_record(["key", "value"])?;
    let mut rows = Vec::new();
    flatten(value, String::new(), &mut rows);
    for (key, leaf) in rows {
        writer.write_record([key, leaf])?;
    }
    writer.flush().map_err(csv::Error::from)?;
    Ok(())
}

fn flatten(value: &Value, prefix: String, rows: &mut Vec<(String, String)>) {
    let join = |key: &str| {
        if prefix.is_empty() {
            key.to_string()
        } else {
            format!("{prefix}.{key}")
        }
    };
    match value {
        Value::Object(map) => {
            for (k, v) in map {
                flatten(v, join(k), rows);
            }
        }
        Value::Array(items) => {
            for (i, v) in items.iter().enumerate() {
                flatten(v, join(&i.to_string()), rows);
            }
        }
        Value::String(s) => rows.push((prefix, s.clone())),
        Value::Null => rows.push((prefix, String::new())),
        other => rows.push((prefix, other.to_string())),
    }
}
