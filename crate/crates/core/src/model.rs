//! Versioned model container: a self-describing JSON file holding a trained
//! GMM, SVM or HMM bank at full float precision. Serialization is
//! deterministic (fixed field order, sorted maps, shortest round-trip float
//! text), so retraining with the same seed reproduces the file byte for
//! byte.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gmm::{GaussianComponent, GmmClassifier, GmmConfig};
use crate::hmm::{AdavuBank, GaussianHmm};
use crate::svm::{SvmBinaryModel, SvmOvrClassifier};

pub const MODEL_FORMAT: &str = "adavu-model";
pub const MODEL_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ModelPayload {
    Gmm {
        dim: usize,
        classes: Vec<String>,
        priors: Vec<f64>,
        config: GmmConfig,
        mixtures: Vec<Vec<GaussianComponent>>,
    },
    Svm {
        dim: usize,
        classes: Vec<String>,
        c: f64,
        tol: f64,
        seed: u64,
        models: Vec<SvmBinaryModel>,
    },
    HmmBank {
        dim: usize,
        labels: Vec<String>,
        states: BTreeMap<String, usize>,
        seed: u64,
        models: Vec<GaussianHmm>,
    },
}

impl ModelPayload {
    pub fn kind(&self) -> &'static str {
        match self {
            ModelPayload::Gmm { .. } => "gmm",
            ModelPayload::Svm { .. } => "svm",
            ModelPayload::HmmBank { .. } => "hmm",
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ModelFile {
    pub format: String,
    pub version: u32,
    pub model: ModelPayload,
}

pub fn save_model(path: &Path, payload: &ModelPayload) -> Result<()> {
    let file = ModelFile {
        format: MODEL_FORMAT.to_string(),
        version: MODEL_VERSION,
        model: payload.clone(),
    };
    let mut text = serde_json::to_string_pretty(&file)
        .map_err(|e| Error::Model(format!("serialize: {e}")))?;
    text.push('\n');
    fs::write(path, text)?;
    Ok(())
}

pub fn load_model(path: &Path) -> Result<ModelPayload> {
    let text = fs::read_to_string(path)?;
    let file: ModelFile = serde_json::from_str(&text)
        .map_err(|e| Error::Model(format!("{}: {e}", path.display())))?;
    if file.format != MODEL_FORMAT {
        return Err(Error::Model(format!(
            "{}: unexpected format {:?}",
            path.display(),
            file.format
        )));
    }
    if file.version != MODEL_VERSION {
        return Err(Error::Model(format!(
            "{}: unsupported version {}",
            path.display(),
            file.version
        )));
    }
    Ok(file.model)
}

pub fn gmm_to_payload(model: &GmmClassifier) -> ModelPayload {
    ModelPayload::Gmm {
        dim: model.dim(),
        classes: model.classes().to_vec(),
        priors: model.priors().to_vec(),
        config: *model.config(),
        mixtures: model.mixtures().to_vec(),
    }
}

pub fn gmm_from_payload(payload: ModelPayload) -> Result<GmmClassifier> {
    match payload {
        ModelPayload::Gmm {
            dim,
            classes,
            priors,
            config,
            mixtures,
        } => GmmClassifier::from_parts(classes, priors, dim, config, mixtures),
        other => Err(Error::Model(format!(
            "expected gmm model, found {}",
            other.kind()
        ))),
    }
}

pub fn svm_to_payload(model: &SvmOvrClassifier, c: f64, tol: f64, seed: u64) -> ModelPayload {
    ModelPayload::Svm {
        dim: model.dim(),
        classes: model.classes().to_vec(),
        c,
        tol,
        seed,
        models: model.models().to_vec(),
    }
}

pub fn svm_from_payload(payload: ModelPayload) -> Result<SvmOvrClassifier> {
    match payload {
        ModelPayload::Svm { dim, models, .. } => SvmOvrClassifier::from_parts(models, dim),
        other => Err(Error::Model(format!(
            "expected svm model, found {}",
            other.kind()
        ))),
    }
}

pub fn bank_to_payload(bank: &AdavuBank, seed: u64) -> ModelPayload {
    ModelPayload::HmmBank {
        dim: bank.dim(),
        labels: bank.labels(),
        states: bank
            .models()
            .iter()
            .map(|m| (m.label.clone(), m.n_states()))
            .collect(),
        seed,
        models: bank.models().to_vec(),
    }
}

pub fn bank_from_payload(payload: ModelPayload) -> Result<AdavuBank> {
    match payload {
        ModelPayload::HmmBank { models, .. } => AdavuBank::new(models),
        other => Err(Error::Model(format!(
            "expected hmm bank, found {}",
            other.kind()
        ))),
    }
}
