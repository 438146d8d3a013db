//! Subcommand implementations.

pub mod bounds;
pub mod gen_dataset;
pub mod iqp;
pub mod noise;
pub mod phase;
pub mod run;
pub mod sweep;
pub mod verify;

use std::path::Path;

use anyhow::{Context, Result};
use qload_core::StateVector;

use crate::manifest::{manifest_path, write_json, ManifestBuilder};
use crate::qsv;
use crate::table::Table;

pub fn load_target(path: &Path, m: &mut ManifestBuilder) -> Result<StateVector> {
    m.input(path)?;
    qsv::read_state(path).with_context(|| format!("reading {}", path.display()))
}

/// File stem used as the dataset label in tables.
pub fn dataset_name(path: &Path) -> String {
    path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| path.display().to_string())
}

/// Writes `table` to `out` with the manifest id in its header comment, then
/// the manifest beside it.
pub fn emit_table(table: &Table, out: &Path, mut m: ManifestBuilder) -> Result<()> {
    table.write(out, &m.id())?;
    m.output(out);
    write_json(&manifest_path(out), &m.finish()?)
}

/// Writes a JSON result and its manifest.
pub fn emit_json(value: &impl serde::Serialize, out: &Path, mut m: ManifestBuilder) -> Result<()> {
    write_json(out, value)?;
    m.output(out);
    write_json(&manifest_path(out), &m.finish()?)
}
