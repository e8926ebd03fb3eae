//! Deterministic CSV and JSON emission: fixed row order, shortest
//! round-trip float formatting, minimal quoting.

use std::io::Write;
use std::path::Path;

pub struct CsvTable {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

fn quote(field: &str) -> String {
    if field.contains(',') || field.contains('"') || field.contains('\n') {
        format!("\"{}\"", field.replace('"', "\"\""))
    } else {
        field.to_string()
    }
}

impl CsvTable {
    pub fn new<S: Into<String>>(header: Vec<S>) -> Self {
        CsvTable {
            header: header.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push<S: Into<String>>(&mut self, row: Vec<S>) {
        self.rows.push(row.into_iter().map(Into::into).collect());
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::new();
        let line = |fields: &[String]| {
            fields
                .iter()
                .map(|f| quote(f))
                .collect::<Vec<_>>()
                .join(",")
        };
        out.extend_from_slice(line(&self.header).as_bytes());
        out.push(b'\n');
        for row in &self.rows {
            out.extend_from_slice(line(row).as_bytes());
            out.push(b'\n');
        }
        out
    }

    pub fn write(&self, path: &Path) -> anyhow::Result<()> {
        let mut f = std::fs::File::create(path)?;
        f.write_all(&self.to_bytes())?;
        Ok(())
    }
}

pub fn write_json<T: serde::Serialize>(path: &Path, value: &T) -> anyhow::Result<()> {
    let text = serde_json::to_string_pretty(value)?;
    std::fs::write(path, text)?;
    Ok(())
}

pub fn fmt_f64(v: f64) -> String {
    format!("{v}")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_quotes_fields_with_commas() {
        let mut t = CsvTable::new(vec!["a", "b"]);
        t.push(vec!["(0.5,1)", "plain"]);
        let text = String::from_utf8(t.to_bytes()).unwrap();
        assert_eq!(text, "a,b\n\"(0.5,1)\",plain\n");
    }
}
