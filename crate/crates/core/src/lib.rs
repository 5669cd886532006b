//! Induction-motor fault diagnosis from stator-current recordings.
//!
//! The pipeline runs in four stages:
//!
//! 1. [`signal`]: validated recordings, windowed magnitude spectra, fundamental
//!    search, THD and sideband power.
//! 2. [`signatures`]: closed-form fault frequencies (broken rotor bar,
//!    eccentricity, stator short turns, bearings), sideband matching and the
//!    dB-gap broken-bar severity bands.
//! 3. [`frft`]: discrete fractional Fourier transform over a grid of orders.
//! 4. [`diagnosis`]: relative-norm-error curves between two captures across
//!    that grid, their mean, and the healthy/faulty threshold verdict.
//!
//! [`sim`] generates synthetic motor currents with injected broken-bar
//! sidebands for testing and demonstration.

pub mod diagnosis;
pub mod error;
pub mod frft;
pub mod signal;
pub mod signatures;
pub mod sim;

pub use diagnosis::{
    classify, default_grid, diagnose, diagnose_with_plan, mean_rne, order_grid,
    relative_norm_error, rne_curve, rne_curve_with_plan, DiagnosisConfig, DiagnosisReport,
    RneCurve, RneMode, Thresholds, Verdict,
};
pub use error::{Error, Result};
pub use frft::{
    build_kernel, frft, frft_sweep, FractionalOrder, FrftKernelMatrix, FrftPlan, FrftResult,
};
pub use signal::{
    compute_spectrum, find_fundamental, sideband_power_fraction, total_harmonic_distortion,
    Fundamental, Normalization, Peak, Signal, Spectrum, WindowKind,
};
pub use signatures::{
    broken_bar_frequencies, broken_bar_severity, detect_sidebands, MotorParams, Severity,
    SeverityVerdict, SidebandMatch, SidebandPair,
};
pub use sim::{generate, presets, SimConfig};
