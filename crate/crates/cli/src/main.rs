//! Command-line pipeline for beat-synchronized dance analysis: synthetic
//! dataset generation, Key Frame segmentation, posture features, classifier
//! training, prediction and evaluation.

mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use adavu_core::Result;
use config::Config;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ClassifierKind {
    Gmm,
    Svm,
    Hmm,
}

impl ClassifierKind {
    pub fn name(&self) -> &'static str {
        match self {
            ClassifierKind::Gmm => "gmm",
            ClassifierKind::Svm => "svm",
            ClassifierKind::Hmm => "hmm",
        }
    }
}

#[derive(Parser)]
#[command(name = "adavu", version, about = "Beat-synchronized dance analysis pipeline")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a synthetic dataset (performances, clusters or sequences).
    Gen {
        #[arg(long)]
        config: Option<PathBuf>,
        /// Top-level seed; all stage randomness derives from it.
        #[arg(long)]
        seed: Option<u64>,
        /// Output dataset directory.
        #[arg(long)]
        out: PathBuf,
        /// Replace an existing output directory.
        #[arg(long)]
        force: bool,
    },
    /// Detect no-motion runs, fuse them with the beat track into Key Frame
    /// ranges, optionally validating against annotations.
    Segment {
        #[arg(long)]
        config: Option<PathBuf>,
        /// Frame stream: packed .raw file (with .meta sidecar) or a
        /// directory of .pgm images.
        #[arg(long)]
        frames: PathBuf,
        /// Beat track file.
        #[arg(long)]
        beats: PathBuf,
        #[arg(long)]
        annotations: Option<PathBuf>,
        /// Score detections against --annotations.
        #[arg(long)]
        validate: bool,
        #[arg(long)]
        out: PathBuf,
    },
    /// Compute posture features for a Key Frame list.
    Features {
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        kframes: PathBuf,
        /// Skeleton stream (for angle features).
        #[arg(long)]
        skeleton: Option<PathBuf>,
        /// Frame stream (for HOG features).
        #[arg(long)]
        frames: Option<PathBuf>,
        /// Annotations used to label the feature rows.
        #[arg(long)]
        annotations: Option<PathBuf>,
        /// Source tag stored with every row.
        #[arg(long, default_value = "perf")]
        source: String,
        #[arg(long)]
        out: PathBuf,
    },
    /// Train a classifier and persist the model file.
    Train {
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        classifier: ClassifierKind,
        /// Labeled feature file (gmm/svm).
        #[arg(long)]
        features: Option<PathBuf>,
        /// Labeled sequence file (hmm).
        #[arg(long)]
        sequences: Option<PathBuf>,
        /// Dataset manifest supplying per-label hidden-state counts.
        #[arg(long)]
        manifest: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
        /// Output model file.
        #[arg(long)]
        model: PathBuf,
    },
    /// Predict labels for a feature or sequence file.
    Classify {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        features: Option<PathBuf>,
        #[arg(long)]
        sequences: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Confusion matrix and accuracy on a labeled test set.
    Evaluate {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        features: Option<PathBuf>,
        #[arg(long)]
        sequences: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
    /// End to end: generate, segment, featurize, train and evaluate.
    Pipeline {
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: PathBuf,
        /// Posture classifier (gmm or svm); sequences always use the HMM
        /// bank.
        #[arg(long, value_enum, default_value = "gmm")]
        classifier: ClassifierKind,
        #[arg(long)]
        force: bool,
    },
}

fn load_config(path: &Option<PathBuf>) -> Result<Config> {
    match path {
        Some(p) => {
            commands::require_input(p, "config file")?;
            Config::load(p)
        }
        None => Ok(Config::default()),
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Gen {
            config,
            seed,
            out,
            force,
        } => {
            let cfg = load_config(&config)?;
            let seed = commands::require_seed(seed, &cfg)?;
            commands::gen::run(&cfg, seed, &out, force)
        }
        Command::Segment {
            config,
            frames,
            beats,
            annotations,
            validate,
            out,
        } => {
            let cfg = load_config(&config)?;
            commands::segment::run(
                &cfg,
                &commands::segment::SegmentArgs {
                    frames: &frames,
                    beats: &beats,
                    annotations: annotations.as_deref(),
                    validate,
                    out: &out,
                },
            )
        }
        Command::Features {
            config,
            kframes,
            skeleton,
            frames,
            annotations,
            source,
            out,
        } => {
            let cfg = load_config(&config)?;
            commands::features::run(
                &cfg,
                &commands::features::FeatureArgs {
                    kframes: &kframes,
                    skeleton: skeleton.as_deref(),
                    frames: frames.as_deref(),
                    annotations: annotations.as_deref(),
                    source: &source,
                    out: &out,
                },
            )
        }
        Command::Train {
            config,
            classifier,
            features,
            sequences,
            manifest,
            seed,
            model,
        } => {
            let cfg = load_config(&config)?;
            let seed = commands::require_seed(seed, &cfg)?;
            commands::train::run(
                &cfg,
                seed,
                &commands::train::TrainArgs {
                    classifier,
                    features: features.as_deref(),
                    sequences: sequences.as_deref(),
                    manifest: manifest.as_deref(),
                    model: &model,
                },
            )
        }
        Command::Classify {
            model,
            features,
            sequences,
            out,
        } => commands::classify::run(&commands::classify::ClassifyArgs {
            model: &model,
            features: features.as_deref(),
            sequences: sequences.as_deref(),
            out: &out,
        }),
        Command::Evaluate {
            model,
            features,
            sequences,
            out,
        } => commands::evaluate::run(&commands::evaluate::EvaluateArgs {
            model: &model,
            features: features.as_deref(),
            sequences: sequences.as_deref(),
            out: &out,
        })
        .map(|_| ()),
        Command::Pipeline {
            config,
            seed,
            out,
            classifier,
            force,
        } => {
            let cfg = load_config(&config)?;
            let seed = commands::require_seed(seed, &cfg)?;
            commands::pipeline::run(&cfg, seed, &out, classifier, force)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
