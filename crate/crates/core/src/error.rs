use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid frame range [{start}, {end}]")]
    InvalidRange { start: u32, end: u32 },

    #[error("time must be non-negative, got {0}")]
    NegativeTime(f64),

    #[error("event stream is empty")]
    EmptyStream,

    #[error("audio stream violation at event {index}: {reason}")]
    AudioStream { index: usize, reason: String },

    #[error("video stream violation at event {index}: {reason}")]
    VideoStream { index: usize, reason: String },

    #[error("frame dimension mismatch: {a_width}x{a_height} vs {b_width}x{b_height}")]
    FrameDimensions {
        a_width: usize,
        a_height: usize,
        b_width: usize,
        b_height: usize,
    },

    #[error("need at least {required} frames, got {got}")]
    TooFewFrames { required: usize, got: usize },

    #[error("feature dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },

    #[error("zero-length bone {0}: parent and child joints coincide")]
    DegenerateBone(String),

    #[error("class {class}: {got} samples, need at least {required}")]
    InsufficientSamples {
        class: String,
        got: usize,
        required: usize,
    },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("numeric failure: {0}")]
    Numeric(String),

    #[error("parse error at {path}:{line}: {message}")]
    Parse {
        path: String,
        line: usize,
        message: String,
    },

    #[error("model file error: {0}")]
    Model(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Process exit code for the CLI: 2 bad input, 3 numeric failure, 4 I/O.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Numeric(_) => 3,
            Error::Io(_) => 4,
            _ => 2,
        }
    }
}
