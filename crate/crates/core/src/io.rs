//! Line-oriented text formats for every artifact the pipeline reads or
//! writes: beat tracks, annotations, skeleton streams, Key Frame lists,
//! feature matrices, observation sequences, frame streams and reports.

use std::collections::BTreeMap;
use std::fs;
use std::io::{BufRead, BufReader, Read, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::event::{
    AnnotationRecord, AudioEvent, AudioEventKind, FrameRange, SyncEvent, SyncKind,
};
use crate::eval::ConfusionMatrix;
use crate::frame::GrayFrame;
use crate::hmm::ObservationSequence;
use crate::segmentation::SegmentationReport;
use crate::skeleton::{Joint, SkeletonFrame, JOINT_COUNT};

fn parse_error(path: &Path, line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        path: path.display().to_string(),
        line,
        message: message.into(),
    }
}

fn record_line(record: &csv::StringRecord) -> usize {
    record.position().map(|p| p.line() as usize).unwrap_or(0)
}

fn parse_field<T: std::str::FromStr>(
    path: &Path,
    record: &csv::StringRecord,
    idx: usize,
    name: &str,
) -> Result<T> {
    let raw = record
        .get(idx)
        .ok_or_else(|| parse_error(path, record_line(record), format!("missing {name}")))?;
    raw.trim().parse::<T>().map_err(|_| {
        parse_error(
            path,
            record_line(record),
            format!("bad {name}: {raw:?}"),
        )
    })
}

fn open_reader(path: &Path) -> Result<csv::Reader<fs::File>> {
    csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| parse_error(path, 1, e.to_string()))
}

// ---------------------------------------------------------------------------
// beat tracks

pub fn write_beats(path: &Path, events: &[AudioEvent]) -> Result<()> {
    let mut out = String::from("id,kind,start_frame,end_frame,bol\n");
    for ev in events {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            ev.id,
            ev.kind.code(),
            ev.range.start(),
            ev.range.end(),
            ev.bol.as_deref().unwrap_or("")
        ));
    }
    fs::write(path, out)?;
    Ok(())
}

pub fn read_beats(path: &Path) -> Result<Vec<AudioEvent>> {
    let mut reader = open_reader(path)?;
    let mut events = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| parse_error(path, 0, e.to_string()))?;
        let line = record_line(&record);
        let kind_raw: String = parse_field(path, &record, 1, "kind")?;
        let kind = AudioEventKind::from_code(&kind_raw)
            .ok_or_else(|| parse_error(path, line, format!("unknown kind {kind_raw:?}")))?;
        let start: u32 = parse_field(path, &record, 2, "start_frame")?;
        let end: u32 = parse_field(path, &record, 3, "end_frame")?;
        let bol = record.get(4).map(str::trim).unwrap_or("");
        events.push(AudioEvent {
            id: parse_field(path, &record, 0, "id")?,
            kind,
            range: FrameRange::new(start, end)
                .map_err(|e| parse_error(path, line, e.to_string()))?,
            bol: if bol.is_empty() {
                None
            } else {
                Some(bol.to_string())
            },
        });
    }
    Ok(events)
}

// ---------------------------------------------------------------------------
// annotations

pub fn write_annotations(path: &Path, records: &[AnnotationRecord]) -> Result<()> {
    let mut out = String::from("posture_class,start_frame,end_frame,beat_number,bol\n");
    for a in records {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            a.posture_class,
            a.range.start(),
            a.range.end(),
            a.beat_number,
            a.bol.as_deref().unwrap_or("")
        ));
    }
    fs::write(path, out)?;
    Ok(())
}

pub fn read_annotations(path: &Path) -> Result<Vec<AnnotationRecord>> {
    let mut reader = open_reader(path)?;
    let mut records = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| parse_error(path, 0, e.to_string()))?;
        let line = record_line(&record);
        let start: u32 = parse_field(path, &record, 1, "start_frame")?;
        let end: u32 = parse_field(path, &record, 2, "end_frame")?;
        let bol = record.get(4).map(str::trim).unwrap_or("");
        records.push(AnnotationRecord {
            posture_class: parse_field(path, &record, 0, "posture_class")?,
            range: FrameRange::new(start, end)
                .map_err(|e| parse_error(path, line, e.to_string()))?,
            beat_number: parse_field(path, &record, 3, "beat_number")?,
            bol: if bol.is_empty() {
                None
            } else {
                Some(bol.to_string())
            },
        });
    }
    Ok(records)
}

// ---------------------------------------------------------------------------
// skeleton streams

/// One line per joint per frame: `frame_index, joint_name, x, y, z` with
/// coordinates in meters at 6 decimal places.
pub fn write_skeleton_stream(path: &Path, frames: &[SkeletonFrame]) -> Result<()> {
    let mut out = String::from("frame_index,joint_name,x,y,z\n");
    for (i, frame) in frames.iter().enumerate() {
        for joint in Joint::ALL {
            let p = frame.position(joint);
            out.push_str(&format!(
                "{},{},{:.6},{:.6},{:.6}\n",
                i,
                joint.name(),
                p[0],
                p[1],
                p[2]
            ));
        }
    }
    fs::write(path, out)?;
    Ok(())
}

pub fn read_skeleton_stream(path: &Path) -> Result<Vec<SkeletonFrame>> {
    let mut reader = open_reader(path)?;
    let mut by_frame: BTreeMap<u32, Vec<(Joint, [f64; 3])>> = BTreeMap::new();
    for record in reader.records() {
        let record = record.map_err(|e| parse_error(path, 0, e.to_string()))?;
        let line = record_line(&record);
        let frame_index: u32 = parse_field(path, &record, 0, "frame_index")?;
        let joint_raw: String = parse_field(path, &record, 1, "joint_name")?;
        let joint = Joint::from_name(&joint_raw)
            .ok_or_else(|| parse_error(path, line, format!("unknown joint {joint_raw:?}")))?;
        let x: f64 = parse_field(path, &record, 2, "x")?;
        let y: f64 = parse_field(path, &record, 3, "y")?;
        let z: f64 = parse_field(path, &record, 4, "z")?;
        by_frame
            .entry(frame_index)
            .or_default()
            .push((joint, [x, y, z]));
    }
    let mut frames = Vec::with_capacity(by_frame.len());
    for (idx, (frame_index, joints)) in by_frame.into_iter().enumerate() {
        if frame_index as usize != idx {
            return Err(parse_error(
                path,
                0,
                format!("frame indices not contiguous at {frame_index}"),
            ));
        }
        if joints.len() != JOINT_COUNT {
            return Err(parse_error(
                path,
                0,
                format!(
                    "frame {frame_index} has {} joints, expected {JOINT_COUNT}",
                    joints.len()
                ),
            ));
        }
        frames.push(
            SkeletonFrame::from_named(joints)
                .map_err(|e| parse_error(path, 0, e.to_string()))?,
        );
    }
    Ok(frames)
}

// ---------------------------------------------------------------------------
// Key Frame lists

pub fn write_kframes(path: &Path, kframes: &[SyncEvent]) -> Result<()> {
    let mut out = String::from("id,kind,start_frame,end_frame,posture_class\n");
    for (i, psi) in kframes.iter().enumerate() {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            i,
            psi.kind.code(),
            psi.range.start(),
            psi.range.end(),
            psi.posture.as_deref().unwrap_or("")
        ));
    }
    fs::write(path, out)?;
    Ok(())
}

pub fn read_kframes(path: &Path) -> Result<Vec<SyncEvent>> {
    let mut reader = open_reader(path)?;
    let mut kframes = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| parse_error(path, 0, e.to_string()))?;
        let line = record_line(&record);
        let kind_raw: String = parse_field(path, &record, 1, "kind")?;
        let kind = SyncKind::from_code(&kind_raw)
            .ok_or_else(|| parse_error(path, line, format!("unknown kind {kind_raw:?}")))?;
        let start: u32 = parse_field(path, &record, 2, "start_frame")?;
        let end: u32 = parse_field(path, &record, 3, "end_frame")?;
        let posture = record.get(4).map(str::trim).unwrap_or("");
        kframes.push(SyncEvent {
            kind,
            range: FrameRange::new(start, end)
                .map_err(|e| parse_error(path, line, e.to_string()))?,
            posture: if posture.is_empty() {
                None
            } else {
                Some(posture.to_string())
            },
        });
    }
    Ok(kframes)
}

// ---------------------------------------------------------------------------
// feature matrices

#[derive(Debug, Clone, PartialEq)]
pub struct FeatureRow {
    pub label: Option<String>,
    pub source: String,
    pub values: Vec<f64>,
}

/// Comma-separated feature matrix with a header naming each dimension.
/// Values are written at full round-trip precision.
pub fn write_features(path: &Path, dim_names: &[String], rows: &[FeatureRow]) -> Result<()> {
    let mut out = String::from("label,source");
    for name in dim_names {
        out.push(',');
        out.push_str(name);
    }
    out.push('\n');
    for row in rows {
        if row.values.len() != dim_names.len() {
            return Err(Error::Dimension {
                expected: dim_names.len(),
                got: row.values.len(),
            });
        }
        out.push_str(row.label.as_deref().unwrap_or(""));
        out.push(',');
        out.push_str(&row.source);
        for v in &row.values {
            out.push(',');
            out.push_str(&format!("{v}"));
        }
        out.push('\n');
    }
    fs::write(path, out)?;
    Ok(())
}

pub fn read_features(path: &Path) -> Result<(Vec<String>, Vec<FeatureRow>)> {
    let mut reader = open_reader(path)?;
    let headers = reader
        .headers()
        .map_err(|e| parse_error(path, 1, e.to_string()))?
        .clone();
    if headers.len() < 3 || headers.get(0) != Some("label") || headers.get(1) != Some("source") {
        return Err(parse_error(
            path,
            1,
            "feature header must start with label,source",
        ));
    }
    let dim_names: Vec<String> = headers.iter().skip(2).map(str::to_string).collect();
    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| parse_error(path, 0, e.to_string()))?;
        let line = record_line(&record);
        if record.len() != dim_names.len() + 2 {
            return Err(parse_error(
                path,
                line,
                format!(
                    "expected {} fields, found {}",
                    dim_names.len() + 2,
                    record.len()
                ),
            ));
        }
        let label = record.get(0).map(str::trim).unwrap_or("");
        let mut values = Vec::with_capacity(dim_names.len());
        for (i, name) in dim_names.iter().enumerate() {
            values.push(parse_field(path, &record, i + 2, name)?);
        }
        rows.push(FeatureRow {
            label: if label.is_empty() {
                None
            } else {
                Some(label.to_string())
            },
            source: record.get(1).map(str::trim).unwrap_or("").to_string(),
            values,
        });
    }
    Ok((dim_names, rows))
}

/// Dimension names for bone-angle features: `<child_joint>_<axis>`.
pub fn angle_dim_names(bones: &crate::skeleton::BoneSet) -> Vec<String> {
    bones
        .bones()
        .iter()
        .flat_map(|(_, child)| {
            ["x", "y", "z"]
                .iter()
                .map(|axis| format!("{}_{axis}", child.name()))
                .collect::<Vec<_>>()
        })
        .collect()
}

pub fn hog_dim_names(len: usize) -> Vec<String> {
    (0..len).map(|i| format!("h{i:04}")).collect()
}

// ---------------------------------------------------------------------------
// observation sequences

/// One observation per line, comma separated; a blank line closes a
/// sequence; `#label:` assigns the ground-truth label and `#source:` the
/// performance id of the following sequence.
pub fn write_sequences(path: &Path, dataset: &[(String, ObservationSequence)]) -> Result<()> {
    let mut out = String::new();
    for (i, (label, seq)) in dataset.iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        out.push_str(&format!("#label: {label}\n"));
        out.push_str(&format!("#source: {}\n", seq.source));
        for obs in &seq.observations {
            let row: Vec<String> = obs.iter().map(|v| format!("{v}")).collect();
            out.push_str(&row.join(","));
            out.push('\n');
        }
    }
    fs::write(path, out)?;
    Ok(())
}

pub fn read_sequences(path: &Path) -> Result<Vec<(String, ObservationSequence)>> {
    let file = fs::File::open(path)?;
    let reader = BufReader::new(file);
    let mut dataset = Vec::new();
    let mut label: Option<String> = None;
    let mut source = String::new();
    let mut observations: Vec<Vec<f64>> = Vec::new();

    let mut flush = |label: &mut Option<String>,
                     source: &mut String,
                     observations: &mut Vec<Vec<f64>>|
     -> Result<()> {
        if observations.is_empty() {
            return Ok(());
        }
        let seq = ObservationSequence::new(
            std::mem::take(observations),
            std::mem::take(source),
        )?;
        dataset.push((label.take().unwrap_or_default(), seq));
        Ok(())
    };

    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        let line_no = i + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() {
            flush(&mut label, &mut source, &mut observations)?;
            continue;
        }
        if let Some(rest) = trimmed.strip_prefix("#label:") {
            label = Some(rest.trim().to_string());
            continue;
        }
        if let Some(rest) = trimmed.strip_prefix("#source:") {
            source = rest.trim().to_string();
            continue;
        }
        if trimmed.starts_with('#') {
            continue;
        }
        let mut obs = Vec::new();
        for piece in trimmed.split(',') {
            obs.push(piece.trim().parse::<f64>().map_err(|_| {
                parse_error(path, line_no, format!("bad number {piece:?}"))
            })?);
        }
        observations.push(obs);
    }
    flush(&mut label, &mut source, &mut observations)?;
    Ok(dataset)
}

// ---------------------------------------------------------------------------
// frame streams

/// Packed 8-bit frames with a `.meta` sidecar recording width, height and
/// count.
pub fn write_frames_raw(raw_path: &Path, frames: &[GrayFrame]) -> Result<()> {
    if frames.is_empty() {
        return Err(Error::TooFewFrames {
            required: 1,
            got: 0,
        });
    }
    let (w, h) = (frames[0].width(), frames[0].height());
    for f in frames {
        if f.width() != w || f.height() != h {
            return Err(Error::FrameDimensions {
                a_width: w,
                a_height: h,
                b_width: f.width(),
                b_height: f.height(),
            });
        }
    }
    let mut file = fs::File::create(raw_path)?;
    for f in frames {
        file.write_all(f.data())?;
    }
    let meta = format!("width = {w}\nheight = {h}\ncount = {}\n", frames.len());
    fs::write(raw_path.with_extension("meta"), meta)?;
    Ok(())
}

pub fn read_frames_raw(raw_path: &Path) -> Result<Vec<GrayFrame>> {
    let meta_path = raw_path.with_extension("meta");
    let meta = fs::read_to_string(&meta_path)?;
    let mut fields: BTreeMap<String, usize> = BTreeMap::new();
    for (i, line) in meta.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            parse_error(&meta_path, i + 1, "expected key = value")
        })?;
        let parsed: usize = value.trim().parse().map_err(|_| {
            parse_error(&meta_path, i + 1, format!("bad value {value:?}"))
        })?;
        fields.insert(key.trim().to_string(), parsed);
    }
    let width = *fields
        .get("width")
        .ok_or_else(|| parse_error(&meta_path, 0, "missing width"))?;
    let height = *fields
        .get("height")
        .ok_or_else(|| parse_error(&meta_path, 0, "missing height"))?;
    let count = *fields
        .get("count")
        .ok_or_else(|| parse_error(&meta_path, 0, "missing count"))?;

    let mut file = fs::File::open(raw_path)?;
    let mut frames = Vec::with_capacity(count);
    let mut buf = vec![0u8; width * height];
    for _ in 0..count {
        file.read_exact(&mut buf).map_err(|e| {
            Error::InvalidParameter(format!(
                "{}: truncated frame data ({e})",
                raw_path.display()
            ))
        })?;
        frames.push(GrayFrame::new(width, height, buf.clone())?);
    }
    Ok(frames)
}

/// Binary 8-bit portable graymap.
pub fn write_pgm(path: &Path, frame: &GrayFrame) -> Result<()> {
    let mut file = fs::File::create(path)?;
    write!(file, "P5\n{} {}\n255\n", frame.width(), frame.height())?;
    file.write_all(frame.data())?;
    Ok(())
}

pub fn read_pgm(path: &Path) -> Result<GrayFrame> {
    let data = fs::read(path)?;
    // header: magic, width, height, maxval as whitespace-separated tokens
    let mut pos = 0usize;
    let mut tokens = Vec::new();
    while tokens.len() < 4 && pos < data.len() {
        while pos < data.len() && data[pos].is_ascii_whitespace() {
            pos += 1;
        }
        if pos < data.len() && data[pos] == b'#' {
            while pos < data.len() && data[pos] != b'\n' {
                pos += 1;
            }
            continue;
        }
        let start = pos;
        while pos < data.len() && !data[pos].is_ascii_whitespace() {
            pos += 1;
        }
        tokens.push(
            std::str::from_utf8(&data[start..pos])
                .map_err(|_| parse_error(path, 1, "binary garbage in header"))?
                .to_string(),
        );
    }
    if tokens.len() != 4 || tokens[0] != "P5" {
        return Err(parse_error(path, 1, "not a binary PGM (P5) file"));
    }
    let width: usize = tokens[1]
        .parse()
        .map_err(|_| parse_error(path, 1, "bad width"))?;
    let height: usize = tokens[2]
        .parse()
        .map_err(|_| parse_error(path, 1, "bad height"))?;
    if tokens[3] != "255" {
        return Err(parse_error(path, 1, "only maxval 255 is supported"));
    }
    pos += 1; // single whitespace after maxval
    if data.len() < pos + width * height {
        return Err(parse_error(path, 1, "truncated pixel data"));
    }
    GrayFrame::new(width, height, data[pos..pos + width * height].to_vec())
}

/// Reads every `.pgm` in a directory in file-name order.
pub fn read_frames_dir(dir: &Path) -> Result<Vec<GrayFrame>> {
    let mut paths: Vec<PathBuf> = fs::read_dir(dir)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().and_then(|e| e.to_str()) == Some("pgm"))
        .collect();
    paths.sort();
    if paths.is_empty() {
        return Err(Error::InvalidParameter(format!(
            "{}: no .pgm frames found",
            dir.display()
        )));
    }
    paths.iter().map(|p| read_pgm(p)).collect()
}

// ---------------------------------------------------------------------------
// reports

pub fn write_segmentation_report(path: &Path, report: &SegmentationReport) -> Result<()> {
    let out = format!(
        "metric,value\ndetected,{}\nannotated,{}\nmatched,{}\ntotal,{}\naccuracy,{}\n",
        report.detected, report.annotated, report.matched, report.total, report.accuracy
    );
    fs::write(path, out)?;
    Ok(())
}

pub fn segmentation_summary(report: &SegmentationReport) -> String {
    format!(
        "{} detected / {} annotated key-frame ranges, {} matched; accuracy {:.4}",
        report.detected, report.annotated, report.matched, report.accuracy
    )
}

/// Every (actual, predicted) cell including zeros, so the matrix and its
/// class set reconstruct exactly.
pub fn write_confusion(path: &Path, matrix: &ConfusionMatrix) -> Result<()> {
    let mut out = String::from("actual,predicted,count\n");
    for a in matrix.classes() {
        for p in matrix.classes() {
            out.push_str(&format!("{a},{p},{}\n", matrix.count(a, p)));
        }
    }
    fs::write(path, out)?;
    Ok(())
}

pub fn read_confusion(path: &Path) -> Result<ConfusionMatrix> {
    let mut reader = open_reader(path)?;
    let mut cells: Vec<(String, String, u64)> = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| parse_error(path, 0, e.to_string()))?;
        cells.push((
            parse_field(path, &record, 0, "actual")?,
            parse_field(path, &record, 1, "predicted")?,
            parse_field(path, &record, 2, "count")?,
        ));
    }
    let mut classes: Vec<String> = cells
        .iter()
        .flat_map(|(a, p, _)| [a.clone(), p.clone()])
        .collect();
    classes.sort();
    classes.dedup();
    let n = classes.len();
    let mut counts = vec![vec![0u64; n]; n];
    for (a, p, c) in cells {
        let ai = classes.iter().position(|x| *x == a).unwrap();
        let pi = classes.iter().position(|x| *x == p).unwrap();
        counts[ai][pi] += c;
    }
    ConfusionMatrix::from_counts(classes, counts)
        .ok_or_else(|| parse_error(path, 0, "inconsistent confusion matrix"))
}

// ---------------------------------------------------------------------------
// dataset manifest

pub const MANIFEST_FORMAT: &str = "adavu-dataset";
pub const MANIFEST_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PerformanceEntry {
    pub label: String,
    /// Directory of this performance, relative to the manifest.
    pub directory: String,
    pub frames: String,
    pub skeleton: String,
    pub beats: String,
    pub annotations: String,
    /// Intended split: "train" or "test".
    pub role: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetManifest {
    pub format: String,
    pub version: u32,
    pub seed: u64,
    /// Hidden-state count per label for sequence-model training.
    pub states_per_label: BTreeMap<String, usize>,
    pub performances: Vec<PerformanceEntry>,
}

impl DatasetManifest {
    pub fn new(seed: u64) -> Self {
        Self {
            format: MANIFEST_FORMAT.to_string(),
            version: MANIFEST_VERSION,
            seed,
            states_per_label: BTreeMap::new(),
            performances: Vec::new(),
        }
    }
}

pub fn write_manifest(path: &Path, manifest: &DatasetManifest) -> Result<()> {
    let mut text = serde_json::to_string_pretty(manifest)
        .map_err(|e| Error::Model(format!("serialize manifest: {e}")))?;
    text.push('\n');
    fs::write(path, text)?;
    Ok(())
}

pub fn read_manifest(path: &Path) -> Result<DatasetManifest> {
    let text = fs::read_to_string(path)?;
    let manifest: DatasetManifest = serde_json::from_str(&text)
        .map_err(|e| Error::Model(format!("{}: {e}", path.display())))?;
    if manifest.format != MANIFEST_FORMAT {
        return Err(Error::Model(format!(
            "{}: unexpected format {:?}",
            path.display(),
            manifest.format
        )));
    }
    Ok(manifest)
}
