//! Typed audio/video/sync event vocabulary and the temporal predicates that
//! tie the two streams together.
//!
//! All events live on a common frame timeline. An audio stream is a strictly
//! ordered, pairwise disjoint list of beat ranges; a video stream tiles the
//! timeline with alternating no-motion and transition ranges. A sync event
//! marks a no-motion range that overlaps a beat: the evidence for a Key
//! Posture.

use crate::error::{Error, Result};

/// Kinect video frame rate used to convert timestamps to frame indices.
pub const DEFAULT_FPS: f64 = 30.0;

/// Half-window (in frames) when mapping a point beat timestamp to a range.
pub const DEFAULT_BEAT_WINDOW: u32 = 10;

/// Inclusive interval of video frame indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FrameRange {
    start: u32,
    end: u32,
}

impl FrameRange {
    pub fn new(start: u32, end: u32) -> Result<Self> {
        if start > end {
            return Err(Error::InvalidRange { start, end });
        }
        Ok(Self { start, end })
    }

    pub fn start(&self) -> u32 {
        self.start
    }

    pub fn end(&self) -> u32 {
        self.end
    }

    /// Number of frames covered (both endpoints included).
    pub fn len(&self) -> u32 {
        self.end - self.start + 1
    }

    pub fn is_empty(&self) -> bool {
        false // a valid range always covers at least one frame
    }

    /// Representative frame of the range: floor((start + end) / 2).
    pub fn midpoint(&self) -> u32 {
        self.start + (self.end - self.start) / 2
    }

    /// True iff the two inclusive ranges share at least one frame.
    pub fn overlaps(&self, other: &FrameRange) -> bool {
        self.start.max(other.start) <= self.end.min(other.end)
    }
}

impl std::fmt::Display for FrameRange {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[{}, {}]", self.start, self.end)
    }
}

/// Frame index of a timestamp at 30 fps: floor(t * 30).
pub fn time_to_frame(seconds: f64) -> Result<u32> {
    time_to_frame_at(seconds, DEFAULT_FPS)
}

/// Frame index of a timestamp at an arbitrary frame rate.
pub fn time_to_frame_at(seconds: f64, fps: f64) -> Result<u32> {
    if seconds < 0.0 || !seconds.is_finite() {
        return Err(Error::NegativeTime(seconds));
    }
    if fps <= 0.0 || !fps.is_finite() {
        return Err(Error::InvalidParameter(format!("frame rate {fps}")));
    }
    Ok((seconds * fps).floor() as u32)
}

/// Timestamp (seconds) of a frame index at 30 fps.
pub fn frame_to_time(frame: u32) -> f64 {
    frame as f64 / DEFAULT_FPS
}

/// Maps a point beat timestamp to the frame range [frame(t), frame(t) + window].
pub fn beat_to_range(seconds: f64, window: u32) -> Result<FrameRange> {
    let start = time_to_frame(seconds)?;
    FrameRange::new(start, start + window)
}

/// Kind of an audio event. Full, half and quarter beats come in a bol-carrying
/// and a stick-only (no bol) variant; a bare bol vocalization has no strike.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AudioEventKind {
    FullBeat,
    HalfBeat,
    QuarterBeat,
    FullBeatStick,
    HalfBeatStick,
    QuarterBeatStick,
    BolOnly,
}

impl AudioEventKind {
    pub fn code(&self) -> &'static str {
        match self {
            AudioEventKind::FullBeat => "fb",
            AudioEventKind::HalfBeat => "hb",
            AudioEventKind::QuarterBeat => "qb",
            AudioEventKind::FullBeatStick => "fn",
            AudioEventKind::HalfBeatStick => "hn",
            AudioEventKind::QuarterBeatStick => "qn",
            AudioEventKind::BolOnly => "bol",
        }
    }

    pub fn from_code(code: &str) -> Option<Self> {
        Some(match code {
            "fb" => AudioEventKind::FullBeat,
            "hb" => AudioEventKind::HalfBeat,
            "qb" => AudioEventKind::QuarterBeat,
            "fn" => AudioEventKind::FullBeatStick,
            "hn" => AudioEventKind::HalfBeatStick,
            "qn" => AudioEventKind::QuarterBeatStick,
            "bol" => AudioEventKind::BolOnly,
            _ => return None,
        })
    }

    /// Sync kind this beat can trigger, if any. Only bol-carrying full and
    /// half beats participate in Key Frame extraction; quarter beats and
    /// stick beats are representable but ignored.
    pub fn sync_kind(&self) -> Option<SyncKind> {
        match self {
            AudioEventKind::FullBeat => Some(SyncKind::FullBeat),
            AudioEventKind::HalfBeat => Some(SyncKind::HalfBeat),
            _ => None,
        }
    }
}

/// One beat or bol instance in the audio stream.
#[derive(Debug, Clone, PartialEq)]
pub struct AudioEvent {
    pub id: u32,
    pub kind: AudioEventKind,
    pub range: FrameRange,
    /// Vocalized syllable, if any. `None` marks a stick-only beat.
    pub bol: Option<String>,
}

/// Kind of a video event.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum VideoEventKind {
    NoMotion,
    Transition,
}

impl VideoEventKind {
    pub fn code(&self) -> &'static str {
        match self {
            VideoEventKind::NoMotion => "nm",
            VideoEventKind::Transition => "tr",
        }
    }

    pub fn from_code(code: &str) -> Option<Self> {
        Some(match code {
            "nm" => VideoEventKind::NoMotion,
            "tr" => VideoEventKind::Transition,
            _ => return None,
        })
    }
}

/// One run of no-motion or transition frames in the video stream.
#[derive(Debug, Clone, PartialEq)]
pub struct VideoEvent {
    pub id: u32,
    pub kind: VideoEventKind,
    pub range: FrameRange,
}

/// Whether a sync event was triggered by a full or a half beat.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SyncKind {
    FullBeat,
    HalfBeat,
}

impl SyncKind {
    pub fn code(&self) -> &'static str {
        match self {
            SyncKind::FullBeat => "fb",
            SyncKind::HalfBeat => "hb",
        }
    }

    pub fn from_code(code: &str) -> Option<Self> {
        Some(match code {
            "fb" => SyncKind::FullBeat,
            "hb" => SyncKind::HalfBeat,
            _ => return None,
        })
    }
}

/// A no-motion range that overlaps a beat range: a detected Key Frame range.
#[derive(Debug, Clone, PartialEq)]
pub struct SyncEvent {
    pub kind: SyncKind,
    /// Always equal to the underlying no-motion event's range.
    pub range: FrameRange,
    /// Posture class id, once labeled against annotations. `None` when the
    /// half-beat position carries no Key Posture or no label is known.
    pub posture: Option<String>,
}

/// Ground-truth Key Posture annotation for one beat of a performance.
#[derive(Debug, Clone, PartialEq)]
pub struct AnnotationRecord {
    pub posture_class: String,
    pub range: FrameRange,
    pub beat_number: i32,
    pub bol: Option<String>,
}

/// Checks that beat ranges are strictly ordered and pairwise disjoint and
/// that ids increase in temporal order. Reports the index of the first
/// offending event.
pub fn validate_audio_stream(events: &[AudioEvent]) -> Result<()> {
    if events.is_empty() {
        return Err(Error::EmptyStream);
    }
    for (i, pair) in events.windows(2).enumerate() {
        let (prev, cur) = (&pair[0], &pair[1]);
        let index = i + 1;
        if cur.range.start() <= prev.range.end() {
            return Err(Error::AudioStream {
                index,
                reason: format!(
                    "range {} does not start after previous range {}",
                    cur.range, prev.range
                ),
            });
        }
        if cur.id <= prev.id {
            return Err(Error::AudioStream {
                index,
                reason: format!("id {} not greater than previous id {}", cur.id, prev.id),
            });
        }
    }
    Ok(())
}

/// Checks that video events tile the timeline with no gap or overlap and that
/// no-motion and transition kinds strictly alternate. Reports the index of
/// the first offending event.
pub fn validate_video_stream(events: &[VideoEvent]) -> Result<()> {
    if events.is_empty() {
        return Err(Error::EmptyStream);
    }
    for (i, pair) in events.windows(2).enumerate() {
        let (prev, cur) = (&pair[0], &pair[1]);
        let index = i + 1;
        if cur.range.start() != prev.range.end() + 1 {
            return Err(Error::VideoStream {
                index,
                reason: format!(
                    "range {} does not tile after previous range {}",
                    cur.range, prev.range
                ),
            });
        }
        if cur.kind == prev.kind {
            return Err(Error::VideoStream {
                index,
                reason: format!("kind {} repeats", cur.kind.code()),
            });
        }
    }
    Ok(())
}
