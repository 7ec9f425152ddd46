//! Deterministic report files: pretty JSON with a fixed field order and
//! plain CSV tables.

use crate::config::SCHEMA_VERSION;
use crate::error::Result;
use serde::Serialize;
use std::fs;
use std::path::{Path, PathBuf};

#[derive(Serialize)]
struct Envelope<'a, C: Serialize, T: Serialize> {
    schema_version: u32,
    command: &'a str,
    config: &'a C,
    result: &'a T,
}

/// The JSON text of a report.
pub fn report_json<C: Serialize, T: Serialize>(command: &str, config: &C, result: &T) -> Result<String> {
    let env = Envelope { schema_version: SCHEMA_VERSION, command, config, result };
    let mut s = serde_json::to_string_pretty(&env)?;
    s.push('\n');
    Ok(s)
}

fn ensure_dir(dir: &Path) -> Result<()> {
    Ok(fs::create_dir_all(dir)?)
}

fn write(path: &Path, text: &str) -> Result<()> {
    Ok(fs::write(path, text)?)
}

/// Writes `<dir>/<name>.json`.
pub fn write_json<C: Serialize, T: Serialize>(dir: &Path, name: &str, command: &str, config: &C, result: &T) -> Result<PathBuf> {
    ensure_dir(dir)?;
    let path = dir.join(format!("{}.json", name));
    write(&path, &report_json(command, config, result)?)?;
    Ok(path)
}

/// A CSV table of numbers.
#[derive(Clone, Debug, Default)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Table { header: header.iter().map(|s| s.to_string()).collect(), rows: vec![] }
    }

    pub fn push(&mut self, row: Vec<f64>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut s = self.header.join(",");
        s.push('\n');
        for r in &self.rows {
            let cells: Vec<String> = r.iter().map(|x| format!("{:e}", x)).collect();
            s.push_str(&cells.join(","));
            s.push('\n');
        }
        s
    }

    pub fn write(&self, dir: &Path, name: &str) -> Result<PathBuf> {
        ensure_dir(dir)?;
        let path = dir.join(format!("{}.csv", name));
        write(&path, &self.to_csv())?;
        Ok(path)
    }
}

/// Reads a JSON artifact written by this crate (or by hand).
pub fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path)?;
    Ok(serde_json::from_str(&text)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[derive(Serialize)]
    struct R {
        b: f64,
        a: Vec<u32>,
    }

    #[test]
    fn envelope_is_stable() {
        let r = R { b: 0.1, a: vec![1, 2] };
        let x = report_json("demo", &"cfg", &r).unwrap();
        assert_eq!(x, report_json("demo", &"cfg", &r).unwrap());
        let v: serde_json::Value = serde_json::from_str(&x).unwrap();
        assert_eq!(v["schema_version"], 1);
        assert_eq!(v["command"], "demo");
        // declaration order, not alphabetical
        assert!(x.find("\"b\"").unwrap() < x.find("\"a\"").unwrap());
    }

    #[test]
    fn csv_shape() {
        let mut t = Table::new(&["x", "y"]);
        t.push(vec![1.0, 0.5]);
        t.push(vec![2.0, -0.25]);
        let s = t.to_csv();
        assert_eq!(s.lines().count(), 3);
        assert_eq!(s.lines().next(), Some("x,y"));
        assert_eq!(s.lines().nth(2), Some("2e0,-2.5e-1"));
    }
}
