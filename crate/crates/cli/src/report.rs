//! JSON report documents. Layout is described by `schema/report.schema.json`;
//! bump [`SCHEMA_VERSION`] on any incompatible change.

use std::path::Path;

use mcsa_core::signatures::{Side, SidebandMatch};
use mcsa_core::{MotorParams, RneMode, Severity, Verdict};
use serde::{Deserialize, Serialize};

pub const SCHEMA_VERSION: u32 = 1;
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");
pub const SCHEMA: &str = include_str!("../schema/report.schema.json");

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InputInfo {
    pub path: String,
    pub samples: usize,
    pub sample_rate_hz: f64,
    pub duration_s: f64,
}

impl InputInfo {
    pub fn new(path: &Path, samples: usize, sample_rate_hz: f64) -> Self {
        Self {
            path: path.display().to_string(),
            samples,
            sample_rate_hz,
            duration_s: samples as f64 / sample_rate_hz,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalyzeConfig {
    pub motor: MotorParams,
    pub window: String,
    pub k_max: u32,
    pub tolerance_hz: f64,
    pub floor_db: f64,
    pub max_harmonic: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FundamentalInfo {
    pub frequency_hz: f64,
    pub magnitude: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PeakInfo {
    pub frequency_hz: f64,
    /// Relative to the strongest non-DC bin.
    pub magnitude: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SidebandInfo {
    pub k: u32,
    pub side: Side,
    pub predicted_hz: f64,
    pub matched_hz: Option<f64>,
    /// Relative to the fundamental.
    pub magnitude: f64,
    pub level_db: f64,
    pub present: bool,
}

impl From<&SidebandMatch> for SidebandInfo {
    fn from(m: &SidebandMatch) -> Self {
        Self {
            k: m.k,
            side: m.side,
            predicted_hz: m.predicted,
            matched_hz: m.frequency,
            magnitude: m.magnitude,
            level_db: m.level_db,
            present: m.present,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeverityInfo {
    pub verdict: Severity,
    pub db_difference: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalyzeReport {
    pub schema_version: u32,
    pub kind: String,
    pub tool_version: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub timestamp_unix: Option<u64>,
    pub input: InputInfo,
    pub config: AnalyzeConfig,
    pub fundamental: FundamentalInfo,
    pub peaks: Vec<PeakInfo>,
    pub sidebands: Vec<SidebandInfo>,
    pub severity: SeverityInfo,
    pub thd: f64,
    pub sideband_power_fraction: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiagnoseConfig {
    pub grid_step: f64,
    pub rne_mode: RneMode,
    pub healthy_max: f64,
    pub faulty_min: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub order: f64,
    pub rne: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiagnoseReport {
    pub schema_version: u32,
    pub kind: String,
    pub tool_version: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub timestamp_unix: Option<u64>,
    pub reference: InputInfo,
    pub candidate: InputInfo,
    pub config: DiagnoseConfig,
    pub curve: Vec<CurvePoint>,
    pub mean_rne: f64,
    pub verdict: Verdict,
}

pub fn timestamp(enabled: bool) -> Option<u64> {
    enabled.then(|| {
        std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0)
    })
}

pub fn to_json<T: Serialize>(report: &T) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("reports hold only finite numbers");
    s.push('\n');
    s
}
