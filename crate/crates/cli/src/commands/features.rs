//! `adavu features`: posture descriptors for each Key Frame range, labeled
//! via annotations when available.

use std::path::Path;

use adavu_core::io::{self, FeatureRow};
use adavu_core::pipeline::{angle_features_for_kframes, hog_features_for_kframes};
use adavu_core::segmentation::validate_kframes;
use adavu_core::skeleton::BoneSet;
use adavu_core::{Error, Result};

use crate::config::Config;

pub struct FeatureArgs<'a> {
    pub kframes: &'a Path,
    pub skeleton: Option<&'a Path>,
    pub frames: Option<&'a Path>,
    pub annotations: Option<&'a Path>,
    pub source: &'a str,
    pub out: &'a Path,
}

pub fn run(config: &Config, args: &FeatureArgs) -> Result<()> {
    super::require_input(args.kframes, "key-frame list")?;
    let mut kframes = io::read_kframes(args.kframes)?;
    if let Some(ann_path) = args.annotations {
        super::require_input(ann_path, "annotation file")?;
        let annotations = io::read_annotations(ann_path)?;
        kframes = validate_kframes(&kframes, &annotations).kframes;
    }

    let kind = config.raw("features", "kind").unwrap_or("angles");
    let (dim_names, rows) = match kind {
        "angles" => {
            let skeleton_path = args.skeleton.ok_or_else(|| {
                Error::InvalidParameter("angle features require --skeleton".into())
            })?;
            super::require_input(skeleton_path, "skeleton stream")?;
            let skeleton = io::read_skeleton_stream(skeleton_path)?;
            let bones = BoneSet::default();
            let feats = angle_features_for_kframes(&skeleton, &kframes, &bones)?;
            let rows: Vec<FeatureRow> = feats
                .into_iter()
                .zip(&kframes)
                .map(|(f, psi)| FeatureRow {
                    label: psi.posture.clone(),
                    source: args.source.to_string(),
                    values: f.values,
                })
                .collect();
            (io::angle_dim_names(&bones), rows)
        }
        "hog" => {
            let frames_path = args.frames.ok_or_else(|| {
                Error::InvalidParameter("hog features require --frames".into())
            })?;
            super::require_input(frames_path, "frame stream")?;
            let frames = super::read_frames_auto(frames_path)?;
            let params = config.hog_params()?;
            let feats = hog_features_for_kframes(&frames, &kframes, &params)?;
            let names = io::hog_dim_names(adavu_core::hog::hog_length(&params)?);
            let rows: Vec<FeatureRow> = feats
                .into_iter()
                .zip(&kframes)
                .map(|(values, psi)| FeatureRow {
                    label: psi.posture.clone(),
                    source: args.source.to_string(),
                    values,
                })
                .collect();
            (names, rows)
        }
        other => {
            return Err(Error::InvalidParameter(format!(
                "[features] kind = {other:?} (expected angles or hog)"
            )))
        }
    };

    if let Some(parent) = args.out.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent)?;
        }
    }
    io::write_features(args.out, &dim_names, &rows)?;
    println!(
        "{} feature rows ({} dims) written to {}",
        rows.len(),
        dim_names.len(),
        args.out.display()
    );
    Ok(())
}
