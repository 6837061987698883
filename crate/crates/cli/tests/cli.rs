//! Behavior tests for the command-line interface: exit codes, input
//! validation, no partial outputs, and the chained gen -> segment ->
//! features -> train -> classify -> evaluate flow over real files.

use std::path::Path;
use std::process::{Command, Output};

fn adavu(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_adavu"))
        .args(args)
        .output()
        .expect("spawn adavu")
}

fn assert_code(output: &Output, code: i32, what: &str) {
    assert_eq!(
        output.status.code(),
        Some(code),
        "{what}: expected exit {code}, got {:?}\nstderr: {}",
        output.status.code(),
        String::from_utf8_lossy(&output.stderr)
    );
}

fn small_gen_config(dir: &Path) -> String {
    let config = dir.join("cfg.ini");
    std::fs::write(
        &config,
        "[gen]\nlabels = Natta1\ntrain_per_label = 1\ntest_per_label = 1\ncycles = 2\n\
         \n[render]\nwidth = 320\nheight = 240\nscale = 120\nlimb_radius = 3\n",
    )
    .unwrap();
    config.display().to_string()
}

#[test]
fn missing_beat_track_exits_2_without_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("seg");
    let output = adavu(&[
        "segment",
        "--frames",
        dir.path().join("absent.raw").to_str().unwrap(),
        "--beats",
        dir.path().join("absent.csv").to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_code(&output, 2, "missing inputs");
    assert!(!out.exists(), "no partial output may be written");
}

#[test]
fn validate_without_annotations_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let config = small_gen_config(dir.path());
    let data = dir.path().join("data");
    let output = adavu(&[
        "gen",
        "--config",
        &config,
        "--seed",
        "1",
        "--out",
        data.to_str().unwrap(),
    ]);
    assert_code(&output, 0, "gen");
    let perf = data.join("Natta1/perf_000");
    let out = dir.path().join("seg");
    let output = adavu(&[
        "segment",
        "--frames",
        perf.join("frames.raw").to_str().unwrap(),
        "--beats",
        perf.join("beats.csv").to_str().unwrap(),
        "--validate",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_code(&output, 2, "--validate without --annotations");
    assert!(!out.exists());
}

#[test]
fn gen_refuses_existing_output_without_force() {
    let dir = tempfile::tempdir().unwrap();
    let config = small_gen_config(dir.path());
    let out = dir.path().join("data");
    std::fs::create_dir_all(&out).unwrap();
    std::fs::write(out.join("keep.txt"), "existing").unwrap();
    let output = adavu(&[
        "gen",
        "--config",
        &config,
        "--seed",
        "1",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_code(&output, 2, "collision without --force");
    assert!(out.join("keep.txt").exists());

    let output = adavu(&[
        "gen",
        "--config",
        &config,
        "--seed",
        "1",
        "--out",
        out.to_str().unwrap(),
        "--force",
    ]);
    assert_code(&output, 0, "collision with --force");
    assert!(!out.join("keep.txt").exists());
    assert!(out.join("manifest.json").exists());
}

#[test]
fn stochastic_commands_require_seed() {
    let dir = tempfile::tempdir().unwrap();
    let config = small_gen_config(dir.path());
    let output = adavu(&[
        "gen",
        "--config",
        &config,
        "--out",
        dir.path().join("data").to_str().unwrap(),
    ]);
    assert_code(&output, 2, "gen without seed");
    assert!(String::from_utf8_lossy(&output.stderr).contains("seed"));
}

#[test]
fn zero_performances_gives_empty_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("cfg.ini");
    std::fs::write(
        &config,
        "[gen]\nlabels = Natta1\ntrain_per_label = 0\ntest_per_label = 0\n",
    )
    .unwrap();
    let out = dir.path().join("data");
    let output = adavu(&[
        "gen",
        "--config",
        config.to_str().unwrap(),
        "--seed",
        "1",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_code(&output, 0, "zero performances");
    let manifest = std::fs::read_to_string(out.join("manifest.json")).unwrap();
    assert!(manifest.contains("\"performances\": []"));
}

#[test]
fn bad_config_line_is_reported_with_position() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("bad.ini");
    std::fs::write(&config, "[gen]\nthis line has no equals sign\n").unwrap();
    let output = adavu(&[
        "gen",
        "--config",
        config.to_str().unwrap(),
        "--seed",
        "1",
        "--out",
        dir.path().join("x").to_str().unwrap(),
    ]);
    assert_code(&output, 2, "bad config");
    let stderr = String::from_utf8_lossy(&output.stderr);
    assert!(
        stderr.contains("bad.ini") && stderr.contains(":2"),
        "diagnostic should name file and line, got: {stderr}"
    );
}

#[test]
fn full_chain_over_files() {
    let dir = tempfile::tempdir().unwrap();
    let root = dir.path();
    let config = root.join("cfg.ini");
    std::fs::write(
        &config,
        "[gen]\nlabels = Natta1,Natta2\ntrain_per_label = 2\ntest_per_label = 1\ncycles = 2\n\
         \n[render]\nwidth = 320\nheight = 240\nscale = 120\nlimb_radius = 3\n",
    )
    .unwrap();
    let cfg = config.to_str().unwrap();
    let data = root.join("data");
    assert_code(
        &adavu(&["gen", "--config", cfg, "--seed", "3", "--out", data.to_str().unwrap()]),
        0,
        "gen",
    );

    // segment + validate one performance: zero noise means perfect accuracy
    let perf = data.join("Natta1/perf_000");
    let seg = root.join("seg");
    let output = adavu(&[
        "segment",
        "--frames",
        perf.join("frames.raw").to_str().unwrap(),
        "--beats",
        perf.join("beats.csv").to_str().unwrap(),
        "--annotations",
        perf.join("annotations.csv").to_str().unwrap(),
        "--validate",
        "--out",
        seg.to_str().unwrap(),
    ]);
    assert_code(&output, 0, "segment");
    let report = std::fs::read_to_string(seg.join("report.csv")).unwrap();
    assert!(report.contains("accuracy,1"), "report: {report}");

    // features for train and test sets of both labels
    let mut feature_files: Vec<(String, std::path::PathBuf)> = Vec::new();
    for (label, rep) in [
        ("Natta1", "perf_000"),
        ("Natta1", "perf_001"),
        ("Natta2", "perf_000"),
        ("Natta2", "perf_001"),
        ("Natta1", "perf_002"),
        ("Natta2", "perf_002"),
    ] {
        let perf = data.join(label).join(rep);
        let seg_out = root.join(format!("seg_{label}_{rep}"));
        assert_code(
            &adavu(&[
                "segment",
                "--frames",
                perf.join("frames.raw").to_str().unwrap(),
                "--beats",
                perf.join("beats.csv").to_str().unwrap(),
                "--out",
                seg_out.to_str().unwrap(),
            ]),
            0,
            "segment for features",
        );
        let feat = root.join(format!("feat_{label}_{rep}.csv"));
        assert_code(
            &adavu(&[
                "features",
                "--kframes",
                seg_out.join("kframes.csv").to_str().unwrap(),
                "--skeleton",
                perf.join("skeleton.csv").to_str().unwrap(),
                "--annotations",
                perf.join("annotations.csv").to_str().unwrap(),
                "--source",
                &format!("{label}_{rep}"),
                "--out",
                feat.to_str().unwrap(),
            ]),
            0,
            "features",
        );
        feature_files.push((format!("{label}/{rep}"), feat));
    }

    // merge the train features (first four) into one csv by concatenation
    let train_csv = root.join("train.csv");
    let mut merged = String::new();
    for (i, (_, path)) in feature_files[..4].iter().enumerate() {
        let text = std::fs::read_to_string(path).unwrap();
        if i == 0 {
            merged.push_str(&text);
        } else {
            merged.push_str(text.split_once('\n').unwrap().1);
        }
    }
    std::fs::write(&train_csv, merged).unwrap();
    let test_csv = root.join("test.csv");
    let mut merged = String::new();
    for (i, (_, path)) in feature_files[4..].iter().enumerate() {
        let text = std::fs::read_to_string(path).unwrap();
        if i == 0 {
            merged.push_str(&text);
        } else {
            merged.push_str(text.split_once('\n').unwrap().1);
        }
    }
    std::fs::write(&test_csv, merged).unwrap();

    // train, classify, evaluate
    let model = root.join("gmm.json");
    assert_code(
        &adavu(&[
            "train",
            "--classifier",
            "gmm",
            "--features",
            train_csv.to_str().unwrap(),
            "--seed",
            "5",
            "--model",
            model.to_str().unwrap(),
        ]),
        0,
        "train",
    );
    let predictions = root.join("pred.csv");
    assert_code(
        &adavu(&[
            "classify",
            "--model",
            model.to_str().unwrap(),
            "--features",
            test_csv.to_str().unwrap(),
            "--out",
            predictions.to_str().unwrap(),
        ]),
        0,
        "classify",
    );
    let pred_text = std::fs::read_to_string(&predictions).unwrap();
    assert!(pred_text.starts_with("index,source,actual,predicted\n"));
    assert!(pred_text.lines().count() > 10);

    let eval = root.join("eval");
    let output = adavu(&[
        "evaluate",
        "--model",
        model.to_str().unwrap(),
        "--features",
        test_csv.to_str().unwrap(),
        "--out",
        eval.to_str().unwrap(),
    ]);
    assert_code(&output, 0, "evaluate");
    let stdout = String::from_utf8_lossy(&output.stdout);
    assert!(stdout.contains("Overall accuracy"), "stdout: {stdout}");

    // the reported accuracy must be re-derivable from the persisted matrix
    let report = std::fs::read_to_string(eval.join("report.csv")).unwrap();
    let reported: f64 = report
        .lines()
        .find_map(|l| l.strip_prefix("accuracy,"))
        .unwrap()
        .parse()
        .unwrap();
    let confusion = adavu_core_confusion_accuracy(&eval.join("confusion.csv"));
    assert!((reported - confusion).abs() < 1e-12);
    assert!(reported > 0.95, "posture accuracy {reported}");
}

/// Independent re-derivation of trace/total from the persisted matrix.
fn adavu_core_confusion_accuracy(path: &Path) -> f64 {
    let text = std::fs::read_to_string(path).unwrap();
    let (mut trace, mut total) = (0u64, 0u64);
    for line in text.lines().skip(1) {
        let fields: Vec<&str> = line.split(',').collect();
        let count: u64 = fields[2].parse().unwrap();
        total += count;
        if fields[0] == fields[1] {
            trace += count;
        }
    }
    trace as f64 / total as f64
}

#[test]
fn evaluate_rejects_wrong_input_kind() {
    let dir = tempfile::tempdir().unwrap();
    let root = dir.path();
    // train a tiny gmm
    let train_csv = root.join("train.csv");
    let mut text = String::from("label,source,f0\n");
    for i in 0..6 {
        let label = if i < 3 { "a" } else { "b" };
        text.push_str(&format!("{label},s{i},{}\n", i as f64));
    }
    std::fs::write(&train_csv, text).unwrap();
    let model = root.join("m.json");
    assert_code(
        &adavu(&[
            "train",
            "--classifier",
            "gmm",
            "--features",
            train_csv.to_str().unwrap(),
            "--seed",
            "1",
            "--model",
            model.to_str().unwrap(),
        ]),
        0,
        "train tiny gmm",
    );
    let output = adavu(&[
        "evaluate",
        "--model",
        model.to_str().unwrap(),
        "--sequences",
        train_csv.to_str().unwrap(),
        "--out",
        root.join("eval").to_str().unwrap(),
    ]);
    assert_code(&output, 2, "gmm model with --sequences");
}

#[test]
fn train_rejects_missing_inputs() {
    let dir = tempfile::tempdir().unwrap();
    let output = adavu(&[
        "train",
        "--classifier",
        "gmm",
        "--features",
        dir.path().join("absent.csv").to_str().unwrap(),
        "--seed",
        "1",
        "--model",
        dir.path().join("m.json").to_str().unwrap(),
    ]);
    assert_code(&output, 2, "train on absent features");
    assert!(!dir.path().join("m.json").exists());
}
