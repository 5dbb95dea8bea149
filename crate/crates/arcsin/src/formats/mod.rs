//! On-disk formats: embedding files (binary and text), the flat key=value
//! run configuration, experiment reports, and deviation-curve tables.
//!
//! All formats are little-endian and byte-deterministic; see FORMATS.md in
//! the repository root for the full reference. Writes go through a
//! temporary file in the target directory followed by a rename, so readers
//! and concurrent runs never observe a torn file.

mod delta_curve;
mod embedding_file;
mod report;
mod run_config;

pub use delta_curve::export_delta_curve;
pub use embedding_file::{detect_format, read_embeddings, write_embeddings, Format};
pub use report::{render_aggregate, render_report, write_aggregate, write_report};
pub use run_config::{parse_config, parse_config_str, render_config, write_config, InjectorKind, RunConfig};

use crate::error::{Error, Result};
use std::io::Write;
use std::path::Path;

/// Write `bytes` to `path` atomically (temp file + rename).
pub(crate) fn atomic_write(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| Error::Io(e.error))?;
    Ok(())
}
