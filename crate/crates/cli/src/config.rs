//! Line-oriented configuration file: `[section]` headers and `key = value`
//! pairs, `#` comments. One file captures every knob of a run so the run can
//! be reproduced from the config and the seed alone.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use adavu_core::datagen::{NoiseSpec, RenderConfig};
use adavu_core::gmm::{CovarianceKind, GmmConfig};
use adavu_core::hmm::{BankConfig, HmmConfig};
use adavu_core::hog::HogParams;
use adavu_core::segmentation::MotionConfig;
use adavu_core::svm::{KernelSpec, SvmConfig};
use adavu_core::{Error, Result};

#[derive(Debug, Clone, Default)]
pub struct Config {
    path: PathBuf,
    sections: BTreeMap<String, BTreeMap<String, String>>,
}

impl Config {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::parse(path, &text)
    }

    pub fn parse(path: &Path, text: &str) -> Result<Self> {
        let mut sections: BTreeMap<String, BTreeMap<String, String>> = BTreeMap::new();
        let mut current = String::new();
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            if let Some(name) = line.strip_prefix('[') {
                let name = name.strip_suffix(']').ok_or_else(|| Error::Parse {
                    path: path.display().to_string(),
                    line: line_no,
                    message: "unterminated section header".into(),
                })?;
                current = name.trim().to_string();
                sections.entry(current.clone()).or_default();
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| Error::Parse {
                path: path.display().to_string(),
                line: line_no,
                message: format!("expected key = value, found {line:?}"),
            })?;
            sections
                .entry(current.clone())
                .or_default()
                .insert(key.trim().to_string(), value.trim().to_string());
        }
        Ok(Self {
            path: path.to_path_buf(),
            sections,
        })
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    pub fn raw(&self, section: &str, key: &str) -> Option<&str> {
        self.sections
            .get(section)
            .and_then(|s| s.get(key))
            .map(|s| s.as_str())
            .filter(|s| !s.is_empty())
    }

    pub fn get<T: std::str::FromStr>(&self, section: &str, key: &str) -> Result<Option<T>> {
        match self.raw(section, key) {
            None => Ok(None),
            Some(raw) => raw.parse::<T>().map(Some).map_err(|_| {
                Error::InvalidParameter(format!(
                    "{}: [{section}] {key} = {raw:?} is not a valid value",
                    self.path.display()
                ))
            }),
        }
    }

    pub fn get_or<T: std::str::FromStr>(&self, section: &str, key: &str, default: T) -> Result<T> {
        Ok(self.get(section, key)?.unwrap_or(default))
    }

    pub fn get_bool(&self, section: &str, key: &str, default: bool) -> Result<bool> {
        match self.raw(section, key) {
            None => Ok(default),
            Some("true") | Some("1") | Some("yes") => Ok(true),
            Some("false") | Some("0") | Some("no") => Ok(false),
            Some(other) => Err(Error::InvalidParameter(format!(
                "{}: [{section}] {key} = {other:?} is not a boolean",
                self.path.display()
            ))),
        }
    }

    /// All `prefix.<name> = value` entries of a section.
    pub fn prefixed(&self, section: &str, prefix: &str) -> BTreeMap<String, String> {
        let full = format!("{prefix}.");
        self.sections
            .get(section)
            .map(|s| {
                s.iter()
                    .filter_map(|(k, v)| {
                        k.strip_prefix(&full)
                            .map(|rest| (rest.to_string(), v.clone()))
                    })
                    .collect()
            })
            .unwrap_or_default()
    }

    // ------------------------------------------------------------------
    // typed section builders

    pub fn motion_config(&self) -> Result<MotionConfig> {
        let defaults = MotionConfig::default();
        Ok(MotionConfig {
            th_pix: self.get_or("segment", "th_pix", defaults.th_pix)?,
            th_frm: self.get_or("segment", "th_frm", defaults.th_frm)?,
            merge_gap: self.get("segment", "merge_gap")?,
        })
    }

    pub fn hog_params(&self) -> Result<HogParams> {
        let d = HogParams::default();
        Ok(HogParams {
            cell_size: self.get_or("hog", "cell_size", d.cell_size)?,
            block_size: self.get_or("hog", "block_size", d.block_size)?,
            block_overlap: self.get_or("hog", "block_overlap", d.block_overlap)?,
            num_bins: self.get_or("hog", "num_bins", d.num_bins)?,
            image_size: (
                self.get_or("hog", "image_height", d.image_size.0)?,
                self.get_or("hog", "image_width", d.image_size.1)?,
            ),
        })
    }

    pub fn gmm_config(&self, seed: u64) -> Result<GmmConfig> {
        let d = GmmConfig::default();
        let covariance = match self.raw("gmm", "covariance") {
            None => d.covariance,
            Some(name) => CovarianceKind::from_name(name).ok_or_else(|| {
                Error::InvalidParameter(format!("unknown covariance type {name:?}"))
            })?,
        };
        Ok(GmmConfig {
            components: self.get_or("gmm", "components", d.components)?,
            max_components: self.get("gmm", "max_components")?,
            covariance,
            max_iter: self.get_or("gmm", "max_iter", d.max_iter)?,
            rel_tol: self.get_or("gmm", "rel_tol", d.rel_tol)?,
            reg_eps: self.get_or("gmm", "reg_eps", d.reg_eps)?,
            seed,
        })
    }

    pub fn svm_config(&self, seed: u64) -> Result<SvmConfig> {
        let d = SvmConfig::default();
        let kernel = match self.raw("svm", "kernel") {
            None | Some("rbf") => KernelSpec::Rbf {
                sigma: self.get("svm", "sigma")?,
            },
            Some("linear") => KernelSpec::Linear,
            Some(other) => {
                return Err(Error::InvalidParameter(format!(
                    "unknown kernel {other:?}"
                )))
            }
        };
        Ok(SvmConfig {
            c: self.get_or("svm", "c", d.c)?,
            kernel,
            tol: self.get_or("svm", "tol", d.tol)?,
            balance_classes: self.get_bool("svm", "balance", d.balance_classes)?,
            max_rounds: self.get_or("svm", "max_rounds", d.max_rounds)?,
            seed,
        })
    }

    pub fn bank_config(&self, seed: u64) -> Result<BankConfig> {
        let d = HmmConfig::default();
        let base = HmmConfig {
            n_states: self.get_or("hmm", "default_states", d.n_states)?,
            max_iter: self.get_or("hmm", "max_iter", d.max_iter)?,
            rel_tol: self.get_or("hmm", "rel_tol", d.rel_tol)?,
            var_floor: self.get_or("hmm", "var_floor", d.var_floor)?,
            restarts: self.get_or("hmm", "restarts", d.restarts)?,
            seed,
        };
        let mut states_per_label = BTreeMap::new();
        for (label, value) in self.prefixed("hmm", "states") {
            let n: usize = value.parse().map_err(|_| {
                Error::InvalidParameter(format!(
                    "[hmm] states.{label} = {value:?} is not a state count"
                ))
            })?;
            states_per_label.insert(label, n);
        }
        Ok(BankConfig {
            base,
            states_per_label,
        })
    }

    pub fn noise_spec(&self, seed: u64) -> Result<NoiseSpec> {
        let d = NoiseSpec::default();
        Ok(NoiseSpec {
            joint_jitter: self.get_or("noise", "joint_jitter", d.joint_jitter)?,
            pixel_noise_rate: self.get_or("noise", "pixel_noise_rate", d.pixel_noise_rate)?,
            pixel_noise_amplitude: self
                .get_or("noise", "pixel_noise_amplitude", d.pixel_noise_amplitude)?,
            beat_jitter: self.get_or("noise", "beat_jitter", d.beat_jitter)?,
            anticipation: self.get_or("noise", "anticipation", d.anticipation)?,
            seed,
        })
    }

    pub fn render_config(&self) -> Result<RenderConfig> {
        let d = RenderConfig::default();
        Ok(RenderConfig {
            width: self.get_or("render", "width", d.width)?,
            height: self.get_or("render", "height", d.height)?,
            scale: self.get_or("render", "scale", d.scale)?,
            limb_radius: self.get_or("render", "limb_radius", d.limb_radius)?,
            body_intensity: self.get_or("render", "body_intensity", d.body_intensity)?,
            background: self.get_or("render", "background", d.background)?,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_sections_and_values() {
        let text = "# comment\n[segment]\nth_pix = 40\nth_frm = 90\n\n[hmm]\nstates.Natta1 = 3\nstates.Natta2 = 3\n";
        let cfg = Config::parse(Path::new("test.ini"), text).unwrap();
        let motion = cfg.motion_config().unwrap();
        assert_eq!(motion.th_pix, 40);
        assert_eq!(motion.th_frm, 90);
        assert_eq!(motion.merge_gap, None);
        let bank = cfg.bank_config(5).unwrap();
        assert_eq!(bank.states_per_label.len(), 2);
        assert_eq!(bank.states_per_label["Natta1"], 3);
        assert_eq!(bank.base.seed, 5);
    }

    #[test]
    fn defaults_when_missing() {
        let cfg = Config::parse(Path::new("t.ini"), "").unwrap();
        assert_eq!(cfg.motion_config().unwrap(), MotionConfig::default());
        assert_eq!(cfg.hog_params().unwrap(), HogParams::default());
    }

    #[test]
    fn bad_value_is_reported() {
        let cfg = Config::parse(Path::new("t.ini"), "[segment]\nth_pix = soft\n").unwrap();
        assert!(cfg.motion_config().is_err());
    }

    #[test]
    fn bad_line_names_position() {
        let err = Config::parse(Path::new("t.ini"), "[a]\nnonsense\n").unwrap_err();
        match err {
            Error::Parse { line, .. } => assert_eq!(line, 2),
            other => panic!("expected parse error, got {other:?}"),
        }
    }
}
