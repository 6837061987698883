//! Beat-synchronized dance analysis toolkit.
//!
//! The pipeline segments a performance video into Key Frame ranges by fusing
//! audio beats with frame-difference no-motion detection, describes each Key
//! Posture by skeleton bone angles or HOG descriptors, recognizes postures
//! with per-class Gaussian mixtures or a one-vs-rest SVM, and recognizes the
//! whole Adavu with a bank of Gaussian-emission hidden Markov models. A
//! synthetic generator produces performances with exact ground truth so every
//! stage can be checked end to end.

pub mod datagen;
pub mod error;
pub mod eval;
pub mod event;
pub mod frame;
pub mod gmm;
pub mod hmm;
pub mod hog;
pub mod io;
pub mod model;
pub mod numeric;
pub mod pipeline;
pub mod segmentation;
pub mod skeleton;
pub mod svm;

pub use error::{Error, Result};
