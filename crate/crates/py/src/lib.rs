//! Python bindings: the event predicates, segmentation, posture features and
//! the three recognizers, mirroring the Rust API over plain lists and
//! tuples.

use std::collections::BTreeMap;
use std::path::PathBuf;

use pyo3::exceptions::{PyIOError, PyValueError};
use pyo3::prelude::*;

use adavu_core::datagen;
use adavu_core::event::{self, AudioEvent, AudioEventKind, FrameRange, VideoEvent, VideoEventKind};
use adavu_core::frame::GrayFrame;
use adavu_core::gmm::{CovarianceKind, GmmClassifier, GmmConfig};
use adavu_core::hmm::{self, BankConfig, HmmConfig, ObservationSequence};
use adavu_core::hog;
use adavu_core::model;
use adavu_core::segmentation::{self, MotionConfig};
use adavu_core::skeleton::{self, BoneSet, SkeletonFrame, JOINT_COUNT};
use adavu_core::svm::{KernelSpec, SvmConfig, SvmOvrClassifier};

fn py_err(e: adavu_core::Error) -> PyErr {
    match e {
        adavu_core::Error::Io(io) => PyIOError::new_err(io.to_string()),
        other => PyValueError::new_err(other.to_string()),
    }
}

fn range_from(pair: (u32, u32)) -> PyResult<FrameRange> {
    FrameRange::new(pair.0, pair.1).map_err(py_err)
}

fn gray_from(data: Vec<u8>, width: usize, height: usize) -> PyResult<GrayFrame> {
    GrayFrame::new(width, height, data).map_err(py_err)
}

fn skeleton_from(joints: Vec<[f64; 3]>) -> PyResult<SkeletonFrame> {
    if joints.len() != JOINT_COUNT {
        return Err(PyValueError::new_err(format!(
            "a skeleton frame needs {JOINT_COUNT} joints, got {}",
            joints.len()
        )));
    }
    let mut array = [[0.0; 3]; JOINT_COUNT];
    array.copy_from_slice(&joints);
    SkeletonFrame::new(array).map_err(py_err)
}

/// Frame index of a timestamp at 30 fps.
#[pyfunction]
fn time_to_frame(seconds: f64) -> PyResult<u32> {
    event::time_to_frame(seconds).map_err(py_err)
}

/// Timestamp (seconds) of a frame index at 30 fps.
#[pyfunction]
fn frame_to_time(frame: u32) -> f64 {
    event::frame_to_time(frame)
}

/// True iff the inclusive frame ranges share at least one frame.
#[pyfunction]
fn ranges_overlap(a: (u32, u32), b: (u32, u32)) -> PyResult<bool> {
    Ok(range_from(a)?.overlaps(&range_from(b)?))
}

/// Representative frame of a range: floor((start + end) / 2).
#[pyfunction]
fn representative_frame(range: (u32, u32)) -> PyResult<u32> {
    Ok(range_from(range)?.midpoint())
}

/// Ordered joint names of a skeleton frame.
#[pyfunction]
fn joint_names() -> Vec<&'static str> {
    skeleton::Joint::ALL.iter().map(|j| j.name()).collect()
}

/// 24 bone-axis angles (degrees) from a window of skeleton frames, each
/// given as 20 [x, y, z] joint positions.
#[pyfunction]
fn bone_angles(frames: Vec<Vec<[f64; 3]>>) -> PyResult<Vec<f64>> {
    let frames: Vec<SkeletonFrame> = frames
        .into_iter()
        .map(skeleton_from)
        .collect::<PyResult<_>>()?;
    Ok(skeleton::bone_angles(&frames, &BoneSet::default())
        .map_err(py_err)?
        .values)
}

/// HOG descriptor length for the given geometry.
#[pyfunction]
#[pyo3(signature = (cell_size=8, block_size=2, block_overlap=1, num_bins=9, image_height=120, image_width=160))]
fn hog_length(
    cell_size: usize,
    block_size: usize,
    block_overlap: usize,
    num_bins: usize,
    image_height: usize,
    image_width: usize,
) -> PyResult<usize> {
    hog::hog_length(&hog::HogParams {
        cell_size,
        block_size,
        block_overlap,
        num_bins,
        image_size: (image_height, image_width),
    })
    .map_err(py_err)
}

/// HOG descriptor of a row-major 8-bit grayscale image.
#[pyfunction]
#[pyo3(signature = (data, width, height, cell_size=8, block_size=2, block_overlap=1, num_bins=9))]
#[allow(clippy::too_many_arguments)]
fn hog_descriptor(
    data: Vec<u8>,
    width: usize,
    height: usize,
    cell_size: usize,
    block_size: usize,
    block_overlap: usize,
    num_bins: usize,
) -> PyResult<Vec<f64>> {
    let image = gray_from(data, width, height)?;
    hog::hog_descriptor(
        &image,
        &hog::HogParams {
            cell_size,
            block_size,
            block_overlap,
            num_bins,
            image_size: (height, width),
        },
    )
    .map_err(py_err)
}

/// exp(-|x - y|^2 / (2 sigma^2)).
#[pyfunction]
fn rbf_kernel(x: Vec<f64>, y: Vec<f64>, sigma: f64) -> PyResult<f64> {
    adavu_core::svm::rbf_kernel(&x, &y, sigma).map_err(py_err)
}

/// Pixels whose absolute intensity difference exceeds the threshold.
#[pyfunction]
fn motion_pixel_count(
    reference: Vec<u8>,
    target: Vec<u8>,
    width: usize,
    height: usize,
    th_pix: u8,
) -> PyResult<usize> {
    let a = gray_from(reference, width, height)?;
    let b = gray_from(target, width, height)?;
    segmentation::motion_pixel_count(&a, &b, th_pix).map_err(py_err)
}

/// Run-length encoded no-motion / transition events over a frame stream.
/// Frames are row-major bytes; returns (kind, start, end) tuples with kind
/// "nm" or "tr".
#[pyfunction]
#[pyo3(signature = (frames, width, height, th_pix=50, th_frm=100, merge_gap=None))]
fn detect_video_events(
    frames: Vec<Vec<u8>>,
    width: usize,
    height: usize,
    th_pix: u8,
    th_frm: usize,
    merge_gap: Option<u32>,
) -> PyResult<Vec<(String, u32, u32)>> {
    let frames: Vec<GrayFrame> = frames
        .into_iter()
        .map(|f| gray_from(f, width, height))
        .collect::<PyResult<_>>()?;
    let cfg = MotionConfig {
        th_pix,
        th_frm,
        merge_gap,
    };
    Ok(segmentation::detect_video_events(&frames, &cfg)
        .map_err(py_err)?
        .into_iter()
        .map(|e| (e.kind.code().to_string(), e.range.start(), e.range.end()))
        .collect())
}

/// Key Frame ranges from an audio stream of (id, kind, start, end, bol) and
/// a video stream of (kind, start, end). Returns (kind, start, end) tuples.
#[pyfunction]
fn extract_kframes(
    audio: Vec<(u32, String, u32, u32, Option<String>)>,
    video: Vec<(String, u32, u32)>,
) -> PyResult<Vec<(String, u32, u32)>> {
    let audio: Vec<AudioEvent> = audio
        .into_iter()
        .map(|(id, kind, s, e, bol)| {
            Ok(AudioEvent {
                id,
                kind: AudioEventKind::from_code(&kind)
                    .ok_or_else(|| PyValueError::new_err(format!("unknown kind {kind:?}")))?,
                range: range_from((s, e))?,
                bol,
            })
        })
        .collect::<PyResult<_>>()?;
    let video: Vec<VideoEvent> = video
        .into_iter()
        .enumerate()
        .map(|(id, (kind, s, e))| {
            Ok(VideoEvent {
                id: id as u32,
                kind: VideoEventKind::from_code(&kind)
                    .ok_or_else(|| PyValueError::new_err(format!("unknown kind {kind:?}")))?,
                range: range_from((s, e))?,
            })
        })
        .collect::<PyResult<_>>()?;
    Ok(segmentation::extract_kframes(&audio, &video)
        .map_err(py_err)?
        .into_iter()
        .map(|p| (p.kind.code().to_string(), p.range.start(), p.range.end()))
        .collect())
}

/// Labeled Gaussian clusters: k classes in `dim` dimensions with unit sigma
/// and pairwise mean distance >= separation. Returns (features, labels).
#[pyfunction]
fn gen_clusters(
    k: usize,
    dim: usize,
    separation: f64,
    per_class: usize,
    seed: u64,
) -> PyResult<(Vec<Vec<f64>>, Vec<String>)> {
    datagen::gen_clusters(k, dim, separation, per_class, seed).map_err(py_err)
}

/// Labeled observation sequences for the eight Natta variants. Returns
/// (label, observations) pairs.
#[pyfunction]
#[pyo3(signature = (per_label, joint_jitter=0.02, anticipation=0.25, seed=0))]
fn gen_natta_sequences(
    per_label: usize,
    joint_jitter: f64,
    anticipation: f64,
    seed: u64,
) -> PyResult<Vec<(String, Vec<Vec<f64>>)>> {
    let specs = datagen::natta_specs(30, 0.6).map_err(py_err)?;
    let noise = datagen::NoiseSpec {
        joint_jitter,
        anticipation,
        seed,
        ..datagen::NoiseSpec::default()
    };
    Ok(datagen::gen_sequence_dataset(&specs, per_label, &noise, seed)
        .map_err(py_err)?
        .into_iter()
        .map(|(label, seq)| (label, seq.observations))
        .collect())
}

/// Per-class Gaussian mixture classifier.
#[pyclass]
struct GmmModel {
    inner: GmmClassifier,
}

#[pymethods]
impl GmmModel {
    #[staticmethod]
    #[pyo3(signature = (features, labels, components=1, covariance="full", seed=0))]
    fn train(
        features: Vec<Vec<f64>>,
        labels: Vec<String>,
        components: usize,
        covariance: &str,
        seed: u64,
    ) -> PyResult<Self> {
        let covariance = CovarianceKind::from_name(covariance)
            .ok_or_else(|| PyValueError::new_err(format!("unknown covariance {covariance:?}")))?;
        let cfg = GmmConfig {
            components,
            covariance,
            seed,
            ..GmmConfig::default()
        };
        Ok(Self {
            inner: GmmClassifier::fit(&features, &labels, &cfg).map_err(py_err)?,
        })
    }

    fn predict(&self, x: Vec<f64>) -> PyResult<(String, Vec<f64>)> {
        self.inner.predict(&x).map_err(py_err)
    }

    fn log_likelihood(&self, class: &str, x: Vec<f64>) -> PyResult<f64> {
        self.inner.log_likelihood(class, &x).map_err(py_err)
    }

    fn classes(&self) -> Vec<String> {
        self.inner.classes().to_vec()
    }

    fn save(&self, path: PathBuf) -> PyResult<()> {
        model::save_model(&path, &model::gmm_to_payload(&self.inner)).map_err(py_err)
    }

    #[staticmethod]
    fn load(path: PathBuf) -> PyResult<Self> {
        let payload = model::load_model(&path).map_err(py_err)?;
        Ok(Self {
            inner: model::gmm_from_payload(payload).map_err(py_err)?,
        })
    }
}

/// One-vs-rest SVM with an RBF or linear kernel.
#[pyclass]
struct SvmModel {
    inner: SvmOvrClassifier,
    c: f64,
    tol: f64,
    seed: u64,
}

#[pymethods]
impl SvmModel {
    #[staticmethod]
    #[pyo3(signature = (features, labels, c=1.0, kernel="rbf", sigma=None, seed=0))]
    fn train(
        features: Vec<Vec<f64>>,
        labels: Vec<String>,
        c: f64,
        kernel: &str,
        sigma: Option<f64>,
        seed: u64,
    ) -> PyResult<Self> {
        let kernel = match kernel {
            "rbf" => KernelSpec::Rbf { sigma },
            "linear" => KernelSpec::Linear,
            other => return Err(PyValueError::new_err(format!("unknown kernel {other:?}"))),
        };
        let cfg = SvmConfig {
            c,
            kernel,
            seed,
            ..SvmConfig::default()
        };
        Ok(Self {
            inner: SvmOvrClassifier::fit(&features, &labels, &cfg).map_err(py_err)?,
            c: cfg.c,
            tol: cfg.tol,
            seed,
        })
    }

    fn predict(&self, x: Vec<f64>) -> PyResult<(String, Vec<f64>)> {
        self.inner.predict(&x).map_err(py_err)
    }

    fn classes(&self) -> Vec<String> {
        self.inner.classes().to_vec()
    }

    /// Largest KKT violation recorded at training time, per class.
    fn kkt_violations(&self) -> Vec<(String, f64)> {
        self.inner
            .models()
            .iter()
            .map(|m| (m.class.clone(), m.kkt_violation))
            .collect()
    }

    fn save(&self, path: PathBuf) -> PyResult<()> {
        model::save_model(
            &path,
            &model::svm_to_payload(&self.inner, self.c, self.tol, self.seed),
        )
        .map_err(py_err)
    }

    #[staticmethod]
    fn load(path: PathBuf) -> PyResult<Self> {
        let payload = model::load_model(&path).map_err(py_err)?;
        let (c, tol, seed) = match &payload {
            model::ModelPayload::Svm { c, tol, seed, .. } => (*c, *tol, *seed),
            _ => (1.0, 1e-3, 0),
        };
        Ok(Self {
            inner: model::svm_from_payload(payload).map_err(py_err)?,
            c,
            tol,
            seed,
        })
    }
}

/// One Gaussian-emission HMM per Adavu label.
#[pyclass]
struct HmmBank {
    inner: hmm::AdavuBank,
    seed: u64,
}

#[pymethods]
impl HmmBank {
    #[staticmethod]
    #[pyo3(signature = (dataset, states=None, default_states=3, var_floor=1e-4, restarts=5, seed=0))]
    fn train(
        dataset: Vec<(String, Vec<Vec<f64>>)>,
        states: Option<BTreeMap<String, usize>>,
        default_states: usize,
        var_floor: f64,
        restarts: usize,
        seed: u64,
    ) -> PyResult<Self> {
        let dataset: Vec<(String, ObservationSequence)> = dataset
            .into_iter()
            .enumerate()
            .map(|(i, (label, obs))| {
                Ok((
                    label.clone(),
                    ObservationSequence::new(obs, format!("{label}-{i}")).map_err(py_err)?,
                ))
            })
            .collect::<PyResult<_>>()?;
        let cfg = BankConfig {
            base: HmmConfig {
                n_states: default_states,
                var_floor,
                restarts,
                seed,
                ..HmmConfig::default()
            },
            states_per_label: states.unwrap_or_default(),
        };
        Ok(Self {
            inner: hmm::train_bank(&dataset, &cfg).map_err(py_err)?.bank,
            seed,
        })
    }

    fn classify(&self, observations: Vec<Vec<f64>>) -> PyResult<(String, Vec<f64>)> {
        let seq = ObservationSequence::new(observations, "query").map_err(py_err)?;
        self.inner.classify(&seq).map_err(py_err)
    }

    fn log_likelihood(&self, label: &str, observations: Vec<Vec<f64>>) -> PyResult<f64> {
        let seq = ObservationSequence::new(observations, "query").map_err(py_err)?;
        let model = self
            .inner
            .models()
            .iter()
            .find(|m| m.label == label)
            .ok_or_else(|| PyValueError::new_err(format!("unknown label {label:?}")))?;
        model.log_likelihood(&seq).map_err(py_err)
    }

    fn labels(&self) -> Vec<String> {
        self.inner.labels()
    }

    fn save(&self, path: PathBuf) -> PyResult<()> {
        model::save_model(&path, &model::bank_to_payload(&self.inner, self.seed))
            .map_err(py_err)
    }

    #[staticmethod]
    fn load(path: PathBuf) -> PyResult<Self> {
        let payload = model::load_model(&path).map_err(py_err)?;
        let seed = match &payload {
            model::ModelPayload::HmmBank { seed, .. } => *seed,
            _ => 0,
        };
        Ok(Self {
            inner: model::bank_from_payload(payload).map_err(py_err)?,
            seed,
        })
    }
}

#[pymodule]
fn adavu_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(time_to_frame, m)?)?;
    m.add_function(wrap_pyfunction!(frame_to_time, m)?)?;
    m.add_function(wrap_pyfunction!(ranges_overlap, m)?)?;
    m.add_function(wrap_pyfunction!(representative_frame, m)?)?;
    m.add_function(wrap_pyfunction!(joint_names, m)?)?;
    m.add_function(wrap_pyfunction!(bone_angles, m)?)?;
    m.add_function(wrap_pyfunction!(hog_length, m)?)?;
    m.add_function(wrap_pyfunction!(hog_descriptor, m)?)?;
    m.add_function(wrap_pyfunction!(rbf_kernel, m)?)?;
    m.add_function(wrap_pyfunction!(motion_pixel_count, m)?)?;
    m.add_function(wrap_pyfunction!(detect_video_events, m)?)?;
    m.add_function(wrap_pyfunction!(extract_kframes, m)?)?;
    m.add_function(wrap_pyfunction!(gen_clusters, m)?)?;
    m.add_function(wrap_pyfunction!(gen_natta_sequences, m)?)?;
    m.add_class::<GmmModel>()?;
    m.add_class::<SvmModel>()?;
    m.add_class::<HmmBank>()?;
    Ok(())
}
