//! `adavu classify`: per-sample predictions from a persisted model.

use std::path::Path;

use adavu_core::model::{
    bank_from_payload, gmm_from_payload, load_model, svm_from_payload, ModelPayload,
};
use adavu_core::{io, Error, Result};

pub struct ClassifyArgs<'a> {
    pub model: &'a Path,
    pub features: Option<&'a Path>,
    pub sequences: Option<&'a Path>,
    pub out: &'a Path,
}

pub fn run(args: &ClassifyArgs) -> Result<()> {
    super::require_input(args.model, "model file")?;
    let payload = load_model(args.model)?;
    let mut out = String::from("index,source,actual,predicted\n");
    match payload {
        ModelPayload::Gmm { .. } => {
            let model = gmm_from_payload(payload)?;
            for (i, row) in read_rows(args)?.iter().enumerate() {
                let (pred, _) = model.predict(&row.values)?;
                push_row(&mut out, i, &row.source, row.label.as_deref(), &pred);
            }
        }
        ModelPayload::Svm { .. } => {
            let model = svm_from_payload(payload)?;
            for (i, row) in read_rows(args)?.iter().enumerate() {
                let (pred, _) = model.predict(&row.values)?;
                push_row(&mut out, i, &row.source, row.label.as_deref(), &pred);
            }
        }
        ModelPayload::HmmBank { .. } => {
            let bank = bank_from_payload(payload)?;
            let path = args.sequences.ok_or_else(|| {
                Error::InvalidParameter("an hmm model classifies --sequences input".into())
            })?;
            super::require_input(path, "sequence file")?;
            for (i, (label, seq)) in io::read_sequences(path)?.iter().enumerate() {
                let (pred, _) = bank.classify(seq)?;
                let actual = if label.is_empty() { None } else { Some(label.as_str()) };
                push_row(&mut out, i, &seq.source, actual, &pred);
            }
        }
    }
    if let Some(parent) = args.out.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent)?;
        }
    }
    std::fs::write(args.out, out)?;
    println!("predictions written to {}", args.out.display());
    Ok(())
}

fn read_rows(args: &ClassifyArgs) -> Result<Vec<io::FeatureRow>> {
    let path = args.features.ok_or_else(|| {
        Error::InvalidParameter("this model classifies --features input".into())
    })?;
    super::require_input(path, "feature file")?;
    Ok(io::read_features(path)?.1)
}

fn push_row(out: &mut String, index: usize, source: &str, actual: Option<&str>, pred: &str) {
    out.push_str(&format!(
        "{index},{source},{},{pred}\n",
        actual.unwrap_or("")
    ));
}
