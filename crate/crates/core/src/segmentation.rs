//! Frame-difference no-motion detection and audio-guided Key Frame
//! extraction.
//!
//! A frame is a motion frame when more than `th_frm` pixels change by more
//! than `th_pix` intensity levels against the previous frame. Runs of equal
//! flags become alternating no-motion / transition events; no-motion events
//! that overlap a full- or half-beat range become sync events (Key Frame
//! ranges).

use crate::error::{Error, Result};
use crate::event::{
    validate_audio_stream, validate_video_stream, AnnotationRecord, AudioEvent, SyncEvent,
    SyncKind, VideoEvent, VideoEventKind,
};
use crate::frame::GrayFrame;

/// Thresholds for no-motion detection.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MotionConfig {
    /// Per-pixel intensity threshold; a pixel moved when |target - reference|
    /// exceeds it.
    pub th_pix: u8,
    /// Per-frame pixel-count threshold; a frame moved when more than this
    /// many pixels moved.
    pub th_frm: usize,
    /// When set, no-motion runs separated by at most this many transition
    /// frames are merged. Off by default.
    pub merge_gap: Option<u32>,
}

impl Default for MotionConfig {
    fn default() -> Self {
        Self {
            th_pix: 50,
            th_frm: 100,
            merge_gap: None,
        }
    }
}

/// Default gap width for no-motion run merging when smoothing is enabled.
pub const DEFAULT_MERGE_GAP: u32 = 3;

/// Number of pixels whose absolute intensity difference exceeds `th_pix`.
pub fn motion_pixel_count(reference: &GrayFrame, target: &GrayFrame, th_pix: u8) -> Result<usize> {
    if reference.width() != target.width() || reference.height() != target.height() {
        return Err(Error::FrameDimensions {
            a_width: reference.width(),
            a_height: reference.height(),
            b_width: target.width(),
            b_height: target.height(),
        });
    }
    let th = th_pix as i16;
    Ok(reference
        .data()
        .iter()
        .zip(target.data())
        .filter(|&(&r, &t)| (t as i16 - r as i16).abs() > th)
        .count())
}

/// True iff the moved-pixel count marks a motion frame (strict inequality).
pub fn is_motion_frame(count: usize, th_frm: usize) -> bool {
    count > th_frm
}

/// Classifies every frame against its predecessor and run-length encodes the
/// flags into alternating video events covering frames 1..=len-1.
pub fn detect_video_events(frames: &[GrayFrame], cfg: &MotionConfig) -> Result<Vec<VideoEvent>> {
    if frames.len() < 2 {
        return Err(Error::TooFewFrames {
            required: 2,
            got: frames.len(),
        });
    }
    let mut flags = Vec::with_capacity(frames.len() - 1);
    for pair in frames.windows(2) {
        let count = motion_pixel_count(&pair[0], &pair[1], cfg.th_pix)?;
        flags.push(is_motion_frame(count, cfg.th_frm));
    }
    let mut events = encode_runs(&flags, 1);
    if let Some(gap) = cfg.merge_gap {
        events = merge_short_gaps(events, gap);
    }
    Ok(events)
}

/// Run-length encodes motion flags into video events. `flags[i]` describes
/// frame `first_frame + i`.
fn encode_runs(flags: &[bool], first_frame: u32) -> Vec<VideoEvent> {
    let mut events = Vec::new();
    let mut run_start = 0usize;
    for i in 1..=flags.len() {
        if i == flags.len() || flags[i] != flags[run_start] {
            let kind = if flags[run_start] {
                VideoEventKind::Transition
            } else {
                VideoEventKind::NoMotion
            };
            let range = crate::event::FrameRange::new(
                first_frame + run_start as u32,
                first_frame + (i - 1) as u32,
            )
            .expect("run bounds are ordered");
            events.push(VideoEvent {
                id: events.len() as u32,
                kind,
                range,
            });
            run_start = i;
        }
    }
    events
}

/// Collapses transition runs of at most `gap` frames that sit between two
/// no-motion runs, re-numbering ids afterwards.
fn merge_short_gaps(events: Vec<VideoEvent>, gap: u32) -> Vec<VideoEvent> {
    let mut merged: Vec<VideoEvent> = Vec::with_capacity(events.len());
    let mut i = 0;
    while i < events.len() {
        let ev = events[i].clone();
        if ev.kind == VideoEventKind::Transition
            && ev.range.len() <= gap
            && i + 1 < events.len()
            && matches!(merged.last(), Some(prev) if prev.kind == VideoEventKind::NoMotion)
        {
            // absorb the short transition and the following no-motion run
            let next = &events[i + 1];
            let prev = merged.last_mut().unwrap();
            prev.range = crate::event::FrameRange::new(prev.range.start(), next.range.end())
                .expect("merged bounds are ordered");
            i += 2;
        } else {
            merged.push(ev);
            i += 1;
        }
    }
    for (id, ev) in merged.iter_mut().enumerate() {
        ev.id = id as u32;
    }
    merged
}

/// Selects every no-motion range that overlaps a bol-carrying full- or
/// half-beat range. Both streams are validated first. The sync event takes
/// the no-motion range; a full-beat overlap wins over a half-beat one.
pub fn extract_kframes(audio: &[AudioEvent], video: &[VideoEvent]) -> Result<Vec<SyncEvent>> {
    validate_audio_stream(audio)?;
    validate_video_stream(video)?;
    let mut out = Vec::new();
    for ev in video {
        if ev.kind != VideoEventKind::NoMotion {
            continue;
        }
        let mut kind: Option<SyncKind> = None;
        for beat in audio {
            if !beat.range.overlaps(&ev.range) {
                continue;
            }
            match beat.kind.sync_kind() {
                Some(SyncKind::FullBeat) => {
                    kind = Some(SyncKind::FullBeat);
                    break;
                }
                Some(SyncKind::HalfBeat) => kind = kind.or(Some(SyncKind::HalfBeat)),
                None => {}
            }
        }
        if let Some(kind) = kind {
            out.push(SyncEvent {
                kind,
                range: ev.range,
                posture: None,
            });
        }
    }
    Ok(out)
}

/// Detection-vs-annotation scoreboard.
#[derive(Debug, Clone, PartialEq)]
pub struct SegmentationReport {
    /// Detected Key Frame ranges, labeled with the posture class of the first
    /// overlapping annotation where one exists.
    pub kframes: Vec<SyncEvent>,
    /// Detections that overlap at least one annotation.
    pub matched: usize,
    /// Number of detections.
    pub detected: usize,
    /// Number of ground-truth annotations.
    pub annotated: usize,
    /// max(detected, annotated): the accuracy denominator, so both spurious
    /// and missed detections count against the score.
    pub total: usize,
    pub accuracy: f64,
}

/// Scores detections against ground truth. A detection matches when its
/// range overlaps some annotation's range. Two empty lists score 1.0.
pub fn validate_kframes(
    kframes: &[SyncEvent],
    annotations: &[AnnotationRecord],
) -> SegmentationReport {
    let mut labeled = Vec::with_capacity(kframes.len());
    let mut matched = 0usize;
    for psi in kframes {
        let hit = annotations.iter().find(|a| a.range.overlaps(&psi.range));
        if hit.is_some() {
            matched += 1;
        }
        labeled.push(SyncEvent {
            kind: psi.kind,
            range: psi.range,
            posture: hit.map(|a| a.posture_class.clone()),
        });
    }
    let detected = kframes.len();
    let annotated = annotations.len();
    let total = detected.max(annotated);
    let accuracy = if total == 0 {
        1.0
    } else {
        matched as f64 / total as f64
    };
    SegmentationReport {
        kframes: labeled,
        matched,
        detected,
        annotated,
        total,
        accuracy,
    }
}
