//! `adavu pipeline`: the full chain on one synthetic dataset — generate,
//! segment, extract features, train the posture classifier and the sequence
//! bank, and evaluate both — reading every intermediate artifact back
//! through its file format.

use std::path::Path;
use std::time::Instant;

use adavu_core::eval::ConfusionMatrix;
use adavu_core::gmm::GmmClassifier;
use adavu_core::hmm::{train_bank, ObservationSequence};
use adavu_core::io::{self, FeatureRow};
use adavu_core::model::{bank_to_payload, gmm_to_payload, save_model, svm_to_payload};
use adavu_core::numeric::derive_seed;
use adavu_core::pipeline::angle_features_for_kframes;
use adavu_core::segmentation::{detect_video_events, extract_kframes, validate_kframes};
use adavu_core::skeleton::BoneSet;
use adavu_core::svm::SvmOvrClassifier;
use adavu_core::{Error, Result};

use crate::config::Config;
use crate::ClassifierKind;

pub fn run(
    config: &Config,
    seed: u64,
    out: &Path,
    classifier: ClassifierKind,
    force: bool,
) -> Result<()> {
    if classifier == ClassifierKind::Hmm {
        return Err(Error::InvalidParameter(
            "--classifier selects the posture model (gmm or svm); \
             the sequence bank is always an hmm"
                .into(),
        ));
    }
    super::prepare_out_dir(out, force)?;
    let dataset_dir = out.join("dataset");
    let models_dir = out.join("models");
    let reports_dir = out.join("reports");
    std::fs::create_dir_all(&models_dir)?;
    std::fs::create_dir_all(&reports_dir)?;

    // stage 1: synthesize the dataset
    let t = Instant::now();
    super::gen::run(config, derive_seed(seed, 1), &dataset_dir, true)?;
    println!("stage gen: {:.2}s", t.elapsed().as_secs_f64());

    // stage 2+3: segmentation and angle features, performance by performance
    let t = Instant::now();
    let manifest = io::read_manifest(&dataset_dir.join("manifest.json"))?;
    if manifest.performances.is_empty() {
        return Err(Error::InvalidParameter(
            "pipeline needs at least one generated performance".into(),
        ));
    }
    let motion = config.motion_config()?;
    let bones = BoneSet::default();
    let mut matched = 0usize;
    let mut seg_total = 0usize;
    let mut train_rows: Vec<FeatureRow> = Vec::new();
    let mut test_rows: Vec<FeatureRow> = Vec::new();
    let mut train_seqs: Vec<(String, ObservationSequence)> = Vec::new();
    let mut test_seqs: Vec<(String, ObservationSequence)> = Vec::new();

    for entry in &manifest.performances {
        let dir = dataset_dir.join(&entry.directory);
        let frames = io::read_frames_raw(&dir.join(&entry.frames))?;
        let skeleton = io::read_skeleton_stream(&dir.join(&entry.skeleton))?;
        let beats = io::read_beats(&dir.join(&entry.beats))?;
        let annotations = io::read_annotations(&dir.join(&entry.annotations))?;

        let events = detect_video_events(&frames, &motion)?;
        let kframes = extract_kframes(&beats, &events)?;
        let report = validate_kframes(&kframes, &annotations);
        matched += report.matched;
        seg_total += report.total;

        let feats = angle_features_for_kframes(&skeleton, &report.kframes, &bones)?;
        let source = entry.directory.replace('/', "_");
        let rows: Vec<FeatureRow> = feats
            .iter()
            .zip(&report.kframes)
            .map(|(f, psi)| FeatureRow {
                label: psi.posture.clone(),
                source: source.clone(),
                values: f.values.clone(),
            })
            .collect();
        let seq = ObservationSequence::new(
            feats.into_iter().map(|f| f.values).collect(),
            source.clone(),
        )?;
        if entry.role == "train" {
            train_rows.extend(rows);
            train_seqs.push((entry.label.clone(), seq));
        } else {
            test_rows.extend(rows);
            test_seqs.push((entry.label.clone(), seq));
        }
    }
    let seg_accuracy = if seg_total == 0 {
        1.0
    } else {
        matched as f64 / seg_total as f64
    };
    std::fs::write(
        reports_dir.join("segmentation.csv"),
        format!("metric,value\nmatched,{matched}\ntotal,{seg_total}\naccuracy,{seg_accuracy}\n"),
    )?;
    println!(
        "stage segment+features: {:.2}s (segmentation accuracy {seg_accuracy:.4})",
        t.elapsed().as_secs_f64()
    );

    // stage 4: posture classifier on labeled key frames
    let t = Instant::now();
    let (train_x, train_y) = labeled(&train_rows);
    let (test_x, test_y) = labeled(&test_rows);
    if train_y.is_empty() || test_y.is_empty() {
        return Err(Error::InvalidParameter(
            "no labeled key frames survived segmentation".into(),
        ));
    }
    let posture_matrix: ConfusionMatrix = match classifier {
        ClassifierKind::Gmm => {
            let cfg = config.gmm_config(derive_seed(seed, 2))?;
            let model = GmmClassifier::fit(&train_x, &train_y, &cfg)?;
            save_model(&models_dir.join("posture.json"), &gmm_to_payload(&model))?;
            model.evaluate(&test_x, &test_y)?
        }
        ClassifierKind::Svm => {
            let cfg = config.svm_config(derive_seed(seed, 2))?;
            let model = SvmOvrClassifier::fit(&train_x, &train_y, &cfg)?;
            save_model(
                &models_dir.join("posture.json"),
                &svm_to_payload(&model, cfg.c, cfg.tol, cfg.seed),
            )?;
            model.evaluate(&test_x, &test_y)?
        }
        ClassifierKind::Hmm => unreachable!(),
    };
    io::write_confusion(&reports_dir.join("posture_confusion.csv"), &posture_matrix)?;
    println!(
        "stage posture ({}): {:.2}s (accuracy {:.4})",
        classifier.name(),
        t.elapsed().as_secs_f64(),
        posture_matrix.accuracy()
    );

    // stage 5: sequence bank on per-performance observation sequences
    let t = Instant::now();
    let mut bank_cfg = config.bank_config(derive_seed(seed, 3))?;
    for (label, states) in &manifest.states_per_label {
        bank_cfg
            .states_per_label
            .entry(label.clone())
            .or_insert(*states);
    }
    let fit = train_bank(&train_seqs, &bank_cfg)?;
    save_model(
        &models_dir.join("sequence_bank.json"),
        &bank_to_payload(&fit.bank, bank_cfg.base.seed),
    )?;
    let sequence_matrix = fit.bank.evaluate(&test_seqs)?;
    io::write_confusion(
        &reports_dir.join("sequence_confusion.csv"),
        &sequence_matrix,
    )?;
    println!(
        "stage sequence (hmm bank): {:.2}s (accuracy {:.4})",
        t.elapsed().as_secs_f64(),
        sequence_matrix.accuracy()
    );

    // run report ties every accuracy to its persisted artifact
    let mut report = String::from("stage,metric,value\n");
    report.push_str(&format!("toolkit,version,{}\n", env!("CARGO_PKG_VERSION")));
    report.push_str(&format!("segmentation,accuracy,{seg_accuracy}\n"));
    report.push_str("segmentation,report,reports/segmentation.csv\n");
    report.push_str(&format!(
        "posture,accuracy,{}\n",
        posture_matrix.accuracy()
    ));
    report.push_str("posture,confusion,reports/posture_confusion.csv\n");
    report.push_str(&format!(
        "sequence,accuracy,{}\n",
        sequence_matrix.accuracy()
    ));
    report.push_str("sequence,confusion,reports/sequence_confusion.csv\n");
    std::fs::write(out.join("run_report.csv"), report)?;

    // echo the configuration that produced the run
    if config.path().as_os_str().is_empty() {
        std::fs::write(out.join("config_echo.ini"), "# defaults, no config file\n")?;
    } else {
        std::fs::copy(config.path(), out.join("config_echo.ini"))?;
    }

    print!("{}", posture_matrix.render_table(super::evaluate::ERROR_CELL_THRESHOLD));
    print!("{}", sequence_matrix.render_table(super::evaluate::ERROR_CELL_THRESHOLD));
    Ok(())
}

fn labeled(rows: &[FeatureRow]) -> (Vec<Vec<f64>>, Vec<String>) {
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for row in rows {
        if let Some(label) = &row.label {
            xs.push(row.values.clone());
            ys.push(label.clone());
        }
    }
    (xs, ys)
}
