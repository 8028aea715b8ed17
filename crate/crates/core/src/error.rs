use std::io;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("signal is empty")]
    EmptySignal,

    #[error("sample rate must be positive and finite, got {0}")]
    InvalidSampleRate(f64),

    #[error("signal too short: need at least {needed} samples, got {got}")]
    SignalTooShort { needed: usize, got: usize },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("malformed RIFF/WAVE data: {0}")]
    MalformedWav(String),

    #[error("unsupported WAVE encoding: {0}")]
    UnsupportedEncoding(String),

    #[error("sample {index} = {value} does not fit in 16-bit PCM")]
    SampleOutOfRange { index: usize, value: f64 },

    #[error(transparent)]
    Io(#[from] io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("adaptive filter diverged at sample {sample}: {detail}")]
    Diverged { sample: usize, detail: String },

    #[error("degenerate autocorrelation: {0}")]
    DegenerateAutocorrelation(String),

    #[error("matrix is singular or not positive definite")]
    NotPositiveDefinite,

    #[error("{what} did not converge after {iterations} iterations")]
    NoConvergence { what: &'static str, iterations: usize },

    #[error("polynomial is identically zero")]
    ZeroPolynomial,
}
