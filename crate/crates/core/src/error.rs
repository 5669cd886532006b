use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Everything that can go wrong in the analysis library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("signal needs at least 2 samples, got {0}")]
    EmptySignal(usize),
    #[error("sample {index} is not finite ({value})")]
    NonFiniteSample { index: usize, value: f64 },
    #[error("sample rate must be positive and finite, got {0}")]
    InvalidSampleRate(f64),

    #[error("band [{low}, {high}] Hz lies outside the spectrum range [0, {max}] Hz")]
    BandOutOfRange { low: f64, high: f64, max: f64 },
    #[error("band [{low}, {high}] Hz is not a valid interval")]
    InvalidBand { low: f64, high: f64 },
    #[error("no non-DC bins inside [{low}, {high}] Hz")]
    EmptyBand { low: f64, high: f64 },
    #[error("no fundamental component found")]
    FundamentalNotFound,
    #[error("max_harmonic must be at least 2, got {0}")]
    InvalidHarmonicCount(u32),
    #[error("fundamental magnitude is zero; dB levels are undefined")]
    FundamentalMagnitudeZero,
    #[error("tolerance {tolerance} Hz is narrower than one bin ({bin_width} Hz)")]
    BinTooNarrow { tolerance: f64, bin_width: f64 },

    #[error("fractional order must be finite and within [-2, 2], got {0}")]
    InvalidOrder(f64),
    #[error("transform dimension must be at least 2, got {0}")]
    DimensionTooSmall(usize),
    #[error("order grid is empty")]
    EmptyGrid,
    #[error("order grid must increase strictly from 0 to 1: {0}")]
    InvalidGrid(String),

    #[error("invalid motor parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },
    #[error("n_ws must be odd, got {0}")]
    EvenNws(i64),
    #[error("k must be odd, got {0}")]
    EvenK(i64),

    #[error("length mismatch: {left} vs {right} samples")]
    LengthMismatch { left: usize, right: usize },
    #[error("sample rate mismatch: {left} Hz vs {right} Hz")]
    SampleRateMismatch { left: f64, right: f64 },
    #[error("reference has zero norm")]
    ZeroReferenceNorm,
    #[error("thresholds must satisfy 0 <= healthy_max <= faulty_min, got {healthy_max} and {faulty_min}")]
    InvalidThresholds { healthy_max: f64, faulty_min: f64 },

    #[error("invalid simulator config: {0}")]
    InvalidConfig(String),
    #[error("sample rate {sample_rate} Hz cannot carry a {frequency} Hz component")]
    NyquistViolation { sample_rate: f64, frequency: f64 },
}
