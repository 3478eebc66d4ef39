use std::fs;
use std::io::Write;
use std::path::Path;

use anyhow::{Context, Result};
use lookback::figures::Table;
use serde_json::{Map, Value};

fn cell(s: &str) -> Value {
    match s.parse::<f64>() {
        Ok(v) if v.is_finite() => {
            if let Ok(i) = s.parse::<i64>() {
                Value::from(i)
            } else {
                Value::from(v)
            }
        }
        _ => Value::from(s),
    }
}

/// Array of row objects keyed by column name.
pub fn to_json(table: &Table) -> String {
    let rows: Vec<Value> = table
        .rows
        .iter()
        .map(|r| {
            let obj: Map<String, Value> = table.header.iter().cloned().zip(r.iter().map(|c| cell(c))).collect();
            Value::Object(obj)
        })
        .collect();
    let mut s = serde_json::to_string_pretty(&Value::Array(rows)).expect("json");
    s.push('\n');
    s
}

pub fn render(table: &Table, json: bool) -> Result<String> {
    if json {
        Ok(to_json(table))
    } else {
        Ok(table.to_csv()?)
    }
}

/// Writes to `out`, or stdout when absent.
pub fn emit(table: &Table, out: Option<&Path>, json: bool) -> Result<()> {
    let text = render(table, json)?;
    match out {
        Some(p) => fs::write(p, text).with_context(|| format!("cannot write {}", p.display())),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            Ok(stdout.flush()?)
        }
    }
}

/// One file per table in `dir`, named after the table.
pub fn emit_bundle(tables: &[Table], dir: &Path, json: bool) -> Result<Vec<String>> {
    fs::create_dir_all(dir).with_context(|| format!("cannot create {}", dir.display()))?;
    let ext = if json { "json" } else { "csv" };
    let mut written = Vec::new();
    for t in tables {
        let path = dir.join(format!("{}.{ext}", t.name));
        fs::write(&path, render(t, json)?).with_context(|| format!("cannot write {}", path.display()))?;
        written.push(path.display().to_string());
    }
    Ok(written)
}
