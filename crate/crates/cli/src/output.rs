//! JSON and CSV rendering of command results.

use serde_json::Value;

use crate::args::Format;

/// `{:.16e}`: 17 significant digits, locale independent.
pub fn csv_number(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else {
        v.to_string()
    }
}

fn flatten(prefix: &str, value: &Value, out: &mut Vec<(String, String)>) {
    let key = |k: &str| {
        if prefix.is_empty() {
            k.to_owned()
        } else {
            format!("{prefix}.{k}")
        }
    };
    match value {
        Value::Object(map) => {
            for (k, v) in map {
                flatten(&key(k), v, out);
            }
        }
        Value::Array(items) => {
            for (k, v) in items.iter().enumerate() {
                flatten(&key(&k.to_string()), v, out);
            }
        }
        Value::Number(n) => out.push((
            prefix.to_owned(),
            n.as_f64().map_or_else(|| n.to_string(), csv_number),
        )),
        Value::Bool(b) => out.push((prefix.to_owned(), b.to_string())),
        Value::String(s) => out.push((prefix.to_owned(), s.clone())),
        Value::Null => out.push((prefix.to_owned(), String::new())),
    }
}

/// A header row of dotted field paths and one row of values.
pub fn csv_record(value: &Value) -> String {
    let mut cells = Vec::new();
    flatten("", value, &mut cells);
    let (header, row): (Vec<_>, Vec<_>) =
        cells.into_iter().map(|(k, v)| (k, csv_escape(&v))).unzip();
    format!("{}\n{}\n", header.join(","), row.join(","))
}

fn csv_escape(cell: &str) -> String {
    if cell.contains([',', '"', '\n']) {
        format!("\"{}\"", cell.replace('"', "\"\""))
    } else {
        cell.to_owned()
    }
}

pub fn render(value: &Value, format: Format) -> String {
    match format {
        Format::Json => format!("{value}\n"),
        Format::Csv => csv_record(value),
    }
}
