//! `adavu evaluate`: confusion matrix and accuracy of a persisted model on a
//! labeled test set, rendered with per-class self percentages and the error
//! cells at or above a threshold.

use std::path::Path;

use adavu_core::eval::ConfusionMatrix;
use adavu_core::model::{
    bank_from_payload, gmm_from_payload, load_model, svm_from_payload, ModelPayload,
};
use adavu_core::{io, Error, Result};

pub struct EvaluateArgs<'a> {
    pub model: &'a Path,
    pub features: Option<&'a Path>,
    pub sequences: Option<&'a Path>,
    pub out: &'a Path,
}

/// Error cells below this row percentage are folded out of the rendered
/// table, mirroring the usual "entries with 5%+ error" presentation.
pub const ERROR_CELL_THRESHOLD: f64 = 5.0;

pub fn run(args: &EvaluateArgs) -> Result<ConfusionMatrix> {
    super::require_input(args.model, "model file")?;
    let payload = load_model(args.model)?;
    let matrix = match payload {
        ModelPayload::Gmm { .. } => {
            let model = gmm_from_payload(payload)?;
            let (features, labels) = labeled_features(args)?;
            model.evaluate(&features, &labels)?
        }
        ModelPayload::Svm { .. } => {
            let model = svm_from_payload(payload)?;
            let (features, labels) = labeled_features(args)?;
            model.evaluate(&features, &labels)?
        }
        ModelPayload::HmmBank { .. } => {
            let bank = bank_from_payload(payload)?;
            let path = args.sequences.ok_or_else(|| {
                Error::InvalidParameter("an hmm model evaluates --sequences input".into())
            })?;
            super::require_input(path, "sequence file")?;
            let dataset = io::read_sequences(path)?;
            if dataset.iter().any(|(label, _)| label.is_empty()) {
                return Err(Error::InvalidParameter(
                    "every sequence needs a #label: line for evaluation".into(),
                ));
            }
            bank.evaluate(&dataset)?
        }
    };

    std::fs::create_dir_all(args.out)?;
    io::write_confusion(&args.out.join("confusion.csv"), &matrix)?;
    let report = format!(
        "metric,value\nsamples,{}\ncorrect,{}\naccuracy,{}\n",
        matrix.total(),
        matrix.trace(),
        matrix.accuracy()
    );
    std::fs::write(args.out.join("report.csv"), report)?;
    print!("{}", matrix.render_table(ERROR_CELL_THRESHOLD));
    Ok(matrix)
}

fn labeled_features(args: &EvaluateArgs) -> Result<(Vec<Vec<f64>>, Vec<String>)> {
    let path = args.features.ok_or_else(|| {
        Error::InvalidParameter("this model evaluates --features input".into())
    })?;
    super::require_input(path, "feature file")?;
    let (_, rows) = io::read_features(path)?;
    super::labeled_rows(&rows)
}
