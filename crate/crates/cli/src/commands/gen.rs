//! `adavu gen`: materializes a synthetic dataset with exact ground truth.

use std::path::Path;

use adavu_core::datagen::{
    gen_clusters, gen_performance, gen_sequence_dataset, natta_specs, AdavuSpec,
};
use adavu_core::io::{self, DatasetManifest, FeatureRow, PerformanceEntry};
use adavu_core::numeric::derive_seed;
use adavu_core::{Error, Result};

use crate::config::Config;

pub fn run(config: &Config, seed: u64, out: &Path, force: bool) -> Result<()> {
    super::prepare_out_dir(out, force)?;
    let kind = config.raw("gen", "kind").unwrap_or("performances");
    match kind {
        "performances" => gen_performances(config, seed, out),
        "clusters" => gen_cluster_sets(config, seed, out),
        "sequences" => gen_sequence_sets(config, seed, out),
        other => Err(Error::InvalidParameter(format!(
            "[gen] kind = {other:?} (expected performances, clusters or sequences)"
        ))),
    }
}

fn selected_specs(config: &Config) -> Result<Vec<AdavuSpec>> {
    let tempo: u32 = config.get_or("gen", "tempo_period", 30)?;
    let hold: f64 = config.get_or("gen", "hold_fraction", 0.6)?;
    let mut specs = natta_specs(tempo, hold)?;
    if let Some(raw) = config.raw("gen", "labels") {
        let wanted: Vec<&str> = raw.split(',').map(str::trim).collect();
        for w in &wanted {
            if !specs.iter().any(|s| s.label == *w) {
                return Err(Error::InvalidParameter(format!("unknown label {w:?}")));
            }
        }
        specs.retain(|s| wanted.contains(&s.label.as_str()));
    }
    Ok(specs)
}

fn gen_performances(config: &Config, seed: u64, out: &Path) -> Result<()> {
    let mut specs = selected_specs(config)?;
    let train_n: usize = config.get_or("gen", "train_per_label", 3)?;
    let test_n: usize = config.get_or("gen", "test_per_label", 1)?;
    let cycles: usize = config.get_or("gen", "cycles", 1)?;
    if cycles == 0 {
        return Err(Error::InvalidParameter("[gen] cycles must be >= 1".into()));
    }
    // a recorded performance repeats the posture cycle one or more times
    for spec in &mut specs {
        let one_cycle = spec.postures.clone();
        for _ in 1..cycles {
            spec.postures.extend(one_cycle.iter().cloned());
        }
    }
    let render = config.render_config()?;

    let mut manifest = DatasetManifest::new(seed);
    for spec in &specs {
        manifest
            .states_per_label
            .insert(spec.label.clone(), spec.distinct_postures());
    }
    let mut perf_counter = 0u64;
    for spec in &specs {
        for rep in 0..(train_n + test_n) {
            let noise = config.noise_spec(derive_seed(seed, perf_counter))?;
            perf_counter += 1;
            let perf = gen_performance(spec, &noise, &render)?;
            let rel_dir = format!("{}/perf_{rep:03}", spec.label);
            let dir = out.join(&rel_dir);
            std::fs::create_dir_all(&dir)?;
            io::write_frames_raw(&dir.join("frames.raw"), &perf.frames)?;
            io::write_skeleton_stream(&dir.join("skeleton.csv"), &perf.skeleton)?;
            io::write_beats(&dir.join("beats.csv"), &perf.beats)?;
            io::write_annotations(&dir.join("annotations.csv"), &perf.annotations)?;
            manifest.performances.push(PerformanceEntry {
                label: spec.label.clone(),
                directory: rel_dir,
                frames: "frames.raw".into(),
                skeleton: "skeleton.csv".into(),
                beats: "beats.csv".into(),
                annotations: "annotations.csv".into(),
                role: if rep < train_n { "train" } else { "test" }.into(),
            });
        }
    }
    io::write_manifest(&out.join("manifest.json"), &manifest)?;
    println!(
        "generated {} performances across {} labels into {}",
        manifest.performances.len(),
        specs.len(),
        out.display()
    );
    Ok(())
}

fn gen_cluster_sets(config: &Config, seed: u64, out: &Path) -> Result<()> {
    let k: usize = config.get_or("clusters", "k", 8)?;
    let dim: usize = config.get_or("clusters", "dim", 24)?;
    let separation: f64 = config.get_or("clusters", "separation", 10.0)?;
    let train_n: usize = config.get_or("clusters", "train_per_class", 200)?;
    let test_n: usize = config.get_or("clusters", "test_per_class", 50)?;
    let names: Vec<String> = (0..dim).map(|i| format!("f{i:03}")).collect();
    for (name, count, stream) in [("train.csv", train_n, 0u64), ("test.csv", test_n, 1u64)] {
        let (features, labels) = gen_clusters(k, dim, separation, count, derive_seed(seed, stream))?;
        let rows: Vec<FeatureRow> = features
            .into_iter()
            .zip(labels)
            .enumerate()
            .map(|(i, (values, label))| FeatureRow {
                label: Some(label),
                source: format!("sample_{i:05}"),
                values,
            })
            .collect();
        io::write_features(&out.join(name), &names, &rows)?;
    }
    println!(
        "generated {k} clusters in {dim} dimensions (separation {separation}) into {}",
        out.display()
    );
    Ok(())
}

fn gen_sequence_sets(config: &Config, seed: u64, out: &Path) -> Result<()> {
    let specs = selected_specs(config)?;
    let train_n: usize = config.get_or("sequences", "train_per_label", 30)?;
    let test_n: usize = config.get_or("sequences", "test_per_label", 7)?;
    let noise_train = config.noise_spec(derive_seed(seed, 0))?;
    let noise_test = config.noise_spec(derive_seed(seed, 1))?;
    let train = gen_sequence_dataset(&specs, train_n, &noise_train, derive_seed(seed, 2))?;
    let test = gen_sequence_dataset(&specs, test_n, &noise_test, derive_seed(seed, 3))?;
    io::write_sequences(&out.join("train.txt"), &train)?;
    io::write_sequences(&out.join("test.txt"), &test)?;
    let mut manifest = DatasetManifest::new(seed);
    for spec in &specs {
        manifest
            .states_per_label
            .insert(spec.label.clone(), spec.distinct_postures());
    }
    io::write_manifest(&out.join("manifest.json"), &manifest)?;
    println!(
        "generated {} train / {} test sequences into {}",
        train.len(),
        test.len(),
        out.display()
    );
    Ok(())
}
