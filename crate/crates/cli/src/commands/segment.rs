//! `adavu segment`: no-motion detection fused with the beat track into Key
//! Frame ranges, optionally validated against annotations.

use std::path::Path;

use adavu_core::io;
use adavu_core::segmentation::{detect_video_events, extract_kframes, validate_kframes};
use adavu_core::{Error, Result};

use crate::config::Config;

pub struct SegmentArgs<'a> {
    pub frames: &'a Path,
    pub beats: &'a Path,
    pub annotations: Option<&'a Path>,
    pub validate: bool,
    pub out: &'a Path,
}

pub fn run(config: &Config, args: &SegmentArgs) -> Result<()> {
    // every input is checked before anything is written
    super::require_input(args.frames, "frame stream")?;
    super::require_input(args.beats, "beat track")?;
    if args.validate && args.annotations.is_none() {
        return Err(Error::InvalidParameter(
            "--validate requires --annotations".into(),
        ));
    }
    if let Some(ann) = args.annotations {
        super::require_input(ann, "annotation file")?;
    }

    let motion = config.motion_config()?;
    let frames = super::read_frames_auto(args.frames)?;
    let beats = io::read_beats(args.beats)?;
    let events = detect_video_events(&frames, &motion)?;
    let kframes = extract_kframes(&beats, &events)?;

    std::fs::create_dir_all(args.out)?;
    if args.validate {
        let annotations = io::read_annotations(args.annotations.unwrap())?;
        let report = validate_kframes(&kframes, &annotations);
        io::write_kframes(&args.out.join("kframes.csv"), &report.kframes)?;
        io::write_segmentation_report(&args.out.join("report.csv"), &report)?;
        println!("{}", io::segmentation_summary(&report));
    } else {
        io::write_kframes(&args.out.join("kframes.csv"), &kframes)?;
        println!(
            "{} key-frame ranges from {} video events and {} beats",
            kframes.len(),
            events.len(),
            beats.len()
        );
    }
    Ok(())
}
