//! RFC-4180 CSV output with a versioned schema comment.
//!
//! The first line is `# qload-csv <schema> v<version> manifest=<id>`; the
//! header row and records follow.

use std::path::Path;

use anyhow::{Context, Result};

pub const CSV_VERSION: u32 = 1;

pub struct Table {
    schema: &'static str,
    header: Vec<&'static str>,
    rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(schema: &'static str, header: &[&'static str]) -> Self {
        Self { schema, header: header.to_vec(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        assert_eq!(row.len(), self.header.len(), "row width");
        self.rows.push(row);
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn to_bytes(&self, manifest_id: &str) -> Result<Vec<u8>> {
        let mut out = format!("# qload-csv {} v{CSV_VERSION} manifest={manifest_id}\r\n", self.schema).into_bytes();
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::CRLF).from_writer(&mut out);
        w.write_record(&self.header)?;
        for r in &self.rows {
            w.write_record(r)?;
        }
        w.flush()?;
        drop(w);
        Ok(out)
    }

    pub fn write(&self, path: &Path, manifest_id: &str) -> Result<()> {
        std::fs::write(path, self.to_bytes(manifest_id)?).with_context(|| format!("writing {}", path.display()))
    }
}

/// Shortest round-trip decimal form.
pub fn num(x: f64) -> String {
    format!("{x}")
}

pub fn opt_num(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}
