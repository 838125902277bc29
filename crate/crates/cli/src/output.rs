//! Report emission. JSON goes through the canonical formatter; CSV is either
//! a path export (`t,x1,...,xn`) or the flattened report as `key,value`
//! rows, keys joined with `.` and array positions as indices.

use std::io::Write;

use serde_json::Value;

use hullwalk::harness::{canonical_json, ExperimentReport};
use hullwalk::randwalk::WalkPath;

pub fn path_csv(path: &WalkPath) -> Result<Vec<u8>, csv::Error> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["t".to_string()];
    header.extend((1..=path.dim()).map(|j| format!("x{j}")));
    w.write_record(&header)?;
    for (i, t) in path.times.iter().enumerate() {
        let mut row = vec![format!("{t:.16e}")];
        row.extend(path.point(i).iter().map(|x| format!("{x:.16e}")));
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(w.into_inner().expect("in-memory writer"))
}

fn flatten(prefix: &str, value: &Value, out: &mut Vec<(String, String)>) {
    let join = |k: &str| if prefix.is_empty() { k.to_string() } else { format!("{prefix}.{k}") };
    match value {
        Value::Object(map) => {
            let mut keys: Vec<&String> = map.keys().collect();
            keys.sort();
            for k in keys {
                flatten(&join(k), &map[k], out);
            }
        }
        Value::Array(items) => {
            for (i, item) in items.iter().enumerate() {
                flatten(&join(&i.to_string()), item, out);
            }
        }
        Value::String(s) => out.push((prefix.to_string(), s.clone())),
        other => out.push((prefix.to_string(), canonical_json(other))),
    }
}

pub fn report_csv(report: &ExperimentReport) -> Result<Vec<u8>, csv::Error> {
    let value = serde_json::to_value(report).expect("report serializes");
    let mut rows = Vec::new();
    flatten("", &value, &mut rows);
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["key", "value"])?;
    for (k, v) in rows {
        w.write_record([k, v])?;
    }
    w.flush()?;
    Ok(w.into_inner().expect("in-memory writer"))
}

pub fn write_output(bytes: &[u8], out: Option<&std::path::Path>) -> std::io::Result<()> {
    match out {
        Some(p) => std::fs::write(p, bytes),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(bytes)?;
            stdout.flush()
        }
    }
}
