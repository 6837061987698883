pub mod classify;
pub mod evaluate;
pub mod features;
pub mod gen;
pub mod pipeline;
pub mod segment;
pub mod train;

use std::path::Path;

use adavu_core::frame::GrayFrame;
use adavu_core::io;
use adavu_core::{Error, Result};

use crate::config::Config;

/// Resolves the mandatory seed for stochastic commands: the `--seed` flag or
/// a `[run] seed` config entry.
pub fn require_seed(flag: Option<u64>, config: &Config) -> Result<u64> {
    if let Some(seed) = flag {
        return Ok(seed);
    }
    if let Some(seed) = config.get::<u64>("run", "seed")? {
        return Ok(seed);
    }
    Err(Error::InvalidParameter(
        "a seed is required: pass --seed or set [run] seed in the config".into(),
    ))
}

/// Input file that must exist before any output is produced.
pub fn require_input(path: &Path, what: &str) -> Result<()> {
    if !path.exists() {
        return Err(Error::InvalidParameter(format!(
            "{what} not found: {}",
            path.display()
        )));
    }
    Ok(())
}

/// Frame streams come either as a packed `.raw` file with a sidecar or as a
/// directory of PGM images.
pub fn read_frames_auto(path: &Path) -> Result<Vec<GrayFrame>> {
    if path.is_dir() {
        io::read_frames_dir(path)
    } else {
        io::read_frames_raw(path)
    }
}

/// Creates the output directory, refusing to reuse a non-empty one without
/// `--force` (which clears it so reruns stay byte-identical).
pub fn prepare_out_dir(out: &Path, force: bool) -> Result<()> {
    if out.exists() {
        let non_empty = out.is_dir() && std::fs::read_dir(out)?.next().is_some();
        if out.is_file() || (non_empty && !force) {
            return Err(Error::InvalidParameter(format!(
                "output path {} already exists (use --force to replace it)",
                out.display()
            )));
        }
        if non_empty {
            std::fs::remove_dir_all(out)?;
        }
    }
    std::fs::create_dir_all(out)?;
    Ok(())
}

/// Splits labeled feature rows into parallel (features, labels) vectors,
/// requiring a label on every row.
pub fn labeled_rows(rows: &[io::FeatureRow]) -> Result<(Vec<Vec<f64>>, Vec<String>)> {
    let mut features = Vec::with_capacity(rows.len());
    let mut labels = Vec::with_capacity(rows.len());
    for (i, row) in rows.iter().enumerate() {
        let label = row.label.clone().ok_or_else(|| {
            Error::InvalidParameter(format!("feature row {i} has no label"))
        })?;
        features.push(row.values.clone());
        labels.push(label);
    }
    Ok((features, labels))
}
