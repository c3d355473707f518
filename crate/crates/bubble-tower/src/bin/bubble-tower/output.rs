//! Artifact writing with reproducible formatting.

use bubble_tower::error::Result;
use std::path::Path;

/// 17 significant digits — enough to round-trip any f64 bit pattern,
/// so re-running a command diffs byte-identically.
pub fn fmt17(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn write_artifact(outdir: &Path, name: &str, content: &str) -> Result<()> {
    std::fs::create_dir_all(outdir)?;
    std::fs::write(outdir.join(name), content)?;
    Ok(())
}
