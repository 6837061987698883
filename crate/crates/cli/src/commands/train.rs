//! `adavu train`: fits the selected classifier and persists the model file.

use std::path::Path;

use adavu_core::gmm::GmmClassifier;
use adavu_core::hmm::train_bank;
use adavu_core::io;
use adavu_core::model::{bank_to_payload, gmm_to_payload, save_model, svm_to_payload};
use adavu_core::svm::SvmOvrClassifier;
use adavu_core::{Error, Result};

use crate::config::Config;
use crate::ClassifierKind;

pub struct TrainArgs<'a> {
    pub classifier: ClassifierKind,
    pub features: Option<&'a Path>,
    pub sequences: Option<&'a Path>,
    pub manifest: Option<&'a Path>,
    pub model: &'a Path,
}

pub fn run(config: &Config, seed: u64, args: &TrainArgs) -> Result<()> {
    match args.classifier {
        ClassifierKind::Gmm | ClassifierKind::Svm => {
            let path = args.features.ok_or_else(|| {
                Error::InvalidParameter("--features is required for gmm/svm training".into())
            })?;
            super::require_input(path, "feature file")?;
            let (_, rows) = io::read_features(path)?;
            let (features, labels) = super::labeled_rows(&rows)?;
            match args.classifier {
                ClassifierKind::Gmm => {
                    let cfg = config.gmm_config(seed)?;
                    let model = GmmClassifier::fit(&features, &labels, &cfg)?;
                    let final_ll: f64 = model
                        .traces
                        .iter()
                        .map(|t| t.last().copied().unwrap_or(0.0))
                        .sum();
                    save_model(args.model, &gmm_to_payload(&model))?;
                    println!(
                        "gmm: {} classes, total final log-likelihood {final_ll:.6}",
                        model.classes().len()
                    );
                }
                ClassifierKind::Svm => {
                    let cfg = config.svm_config(seed)?;
                    let model = SvmOvrClassifier::fit(&features, &labels, &cfg)?;
                    let worst_kkt = model
                        .models()
                        .iter()
                        .map(|m| m.kkt_violation)
                        .fold(0.0f64, f64::max);
                    let sv_total: usize =
                        model.models().iter().map(|m| m.support_vectors.len()).sum();
                    save_model(args.model, &svm_to_payload(&model, cfg.c, cfg.tol, seed))?;
                    println!(
                        "svm: {} one-vs-rest models, {sv_total} support vectors, \
                         worst KKT violation {worst_kkt:.2e}",
                        model.models().len()
                    );
                }
                ClassifierKind::Hmm => unreachable!(),
            }
        }
        ClassifierKind::Hmm => {
            let path = args.sequences.ok_or_else(|| {
                Error::InvalidParameter("--sequences is required for hmm training".into())
            })?;
            super::require_input(path, "sequence file")?;
            let dataset = io::read_sequences(path)?;
            let mut bank_cfg = config.bank_config(seed)?;
            if let Some(manifest_path) = args.manifest {
                super::require_input(manifest_path, "dataset manifest")?;
                let manifest = io::read_manifest(manifest_path)?;
                for (label, states) in manifest.states_per_label {
                    // explicit config entries win over manifest defaults
                    bank_cfg.states_per_label.entry(label).or_insert(states);
                }
            }
            let fit = train_bank(&dataset, &bank_cfg)?;
            save_model(args.model, &bank_to_payload(&fit.bank, seed))?;
            for (label, trace) in &fit.traces {
                println!(
                    "hmm {label}: {} iterations, final log-likelihood {:.6}",
                    trace.len(),
                    trace.last().copied().unwrap_or(f64::NAN)
                );
            }
        }
    }
    println!("model written to {}", args.model.display());
    Ok(())
}
