use std::io::{self, IsTerminal, Write};

use anyhow::Result;
use clap::ValueEnum;
use serde::Serialize;
use serde_json::Value;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Json,
    Csv,
}

impl Format {
    /// Table on a terminal, JSON otherwise.
    pub fn resolve(flag: Option<Format>) -> Format {
        flag.unwrap_or(if io::stdout().is_terminal() {
            Format::Table
        } else {
            Format::Json
        })
    }
}

/// Flattens nested objects into dotted keys, keeping arrays as JSON text.
fn flatten(prefix: &str, value: &Value, out: &mut Vec<(String, String)>) {
    match value {
        Value::Object(map) => {
            for (k, v) in map {
                let key = if prefix.is_empty() {
                    k.clone()
                } else {
                    format!("{prefix}.{k}")
                };
                flatten(&key, v, out);
            }
        }
        Value::String(s) => out.push((prefix.to_string(), s.clone())),
        Value::Null => out.push((prefix.to_string(), String::new())),
        other => out.push((prefix.to_string(), other.to_string())),
    }
}

fn rows<T: Serialize>(items: &[T]) -> Result<Vec<Vec<(String, String)>>> {
    items
        .iter()
        .map(|item| {
            let mut flat = Vec::new();
            flatten("", &serde_json::to_value(item)?, &mut flat);
            Ok(flat)
        })
        .collect()
}

fn write_table(out: &mut impl Write, records: &[Vec<(String, String)>]) -> io::Result<()> {
    for (i, rec) in records.iter().enumerate() {
        if i > 0 {
            writeln!(out)?;
        }
        let width = rec.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
        for (k, v) in rec {
            writeln!(out, "{k:<width$}  {v}")?;
        }
    }
    Ok(())
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn write_csv(out: &mut impl Write, records: &[Vec<(String, String)>]) -> io::Result<()> {
    let mut header: Vec<&str> = Vec::new();
    for rec in records {
        for (k, _) in rec {
            if !header.contains(&k.as_str()) {
                header.push(k);
            }
        }
    }
    writeln!(out, "{}", header.iter().map(|h| csv_field(h)).collect::<Vec<_>>().join(","))?;
    for rec in records {
        let line: Vec<String> = header
            .iter()
            .map(|h| rec.iter().find(|(k, _)| k == h).map_or(String::new(), |(_, v)| csv_field(v)))
            .collect();
        writeln!(out, "{}", line.join(","))?;
    }
    Ok(())
}

/// Prints one record per item. JSON output is an array when `items` has more
/// than one element.
pub fn emit<T: Serialize>(format: Format, items: &[T]) -> Result<()> {
    let stdout = io::stdout();
    let mut out = stdout.lock();
    match format {
        Format::Json => {
            if let [one] = items {
                serde_json::to_writer_pretty(&mut out, one)?;
            } else {
                serde_json::to_writer_pretty(&mut out, items)?;
            }
            writeln!(out)?;
        }
        Format::Table => write_table(&mut out, &rows(items)?)?,
        Format::Csv => write_csv(&mut out, &rows(items)?)?,
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn flatten_nests_keys() {
        let mut flat = Vec::new();
        flatten("", &json!({"a": 1, "b": {"c": "x", "d": [1, 2]}, "e": null}), &mut flat);
        let keys: Vec<_> = flat.iter().map(|(k, v)| format!("{k}={v}")).collect();
        assert_eq!(keys, ["a=1", "b.c=x", "b.d=[1,2]", "e="]);
    }

    #[test]
    fn csv_unions_columns() {
        let recs = vec![
            vec![("a".into(), "1".into())],
            vec![("b".into(), "x,y".into()), ("a".into(), "2".into())],
        ];
        let mut buf = Vec::new();
        write_csv(&mut buf, &recs).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "a,b\n1,\n2,\"x,y\"\n");
    }
}
