//! Fault-frequency calculators and broken-bar sideband assessment.
//!
//! Broken rotor bars produce sidebands at `f_f(1 ± 2ks)`. The level of the
//! strongest sideband relative to the fundamental grades the damage:
//! more than 50 dB below means no broken bar, 40 to 50 dB one cracked bar, and
//! less than 40 dB several.
//!
//! The eccentricity and stator-turn formulas add a bare integer (`n_ws`, `±k`)
//! to a frequency. [`TermUnits`] selects whether that integer counts multiples
//! of the supply frequency (the default) or plain hertz.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::signal::Spectrum;

/// Lowest level reported for an empty or all-zero sideband window.
pub const LEVEL_FLOOR_DB: f64 = -400.0;

/// Default presence threshold: sidebands weaker than this, relative to the
/// fundamental, count as absent. It coincides with the no-broken-bar boundary.
pub const DEFAULT_SIDEBAND_FLOOR_DB: f64 = -50.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MotorParams {
    /// Hz.
    pub supply_frequency: f64,
    pub pole_pairs: u32,
    pub rotor_slots: u32,
    pub bearing_balls: u32,
    /// Rotor mechanical frequency, Hz.
    pub rotor_mech_frequency: f64,
    pub slip: f64,
}

impl MotorParams {
    pub fn validate(&self) -> Result<()> {
        let bad = |name, reason: &str| {
            Err(Error::InvalidParameter {
                name,
                reason: reason.to_string(),
            })
        };
        if !(self.supply_frequency.is_finite() && self.supply_frequency > 0.0) {
            return bad("supply_frequency", "must be positive and finite");
        }
        if !(self.slip.is_finite() && (0.0..1.0).contains(&self.slip)) {
            return bad("slip", "must lie in [0, 1)");
        }
        if !(self.rotor_mech_frequency.is_finite() && self.rotor_mech_frequency >= 0.0) {
            return bad("rotor_mech_frequency", "must be non-negative and finite");
        }
        if self.pole_pairs == 0 {
            return bad("pole_pairs", "must be at least 1");
        }
        if self.rotor_slots == 0 {
            return bad("rotor_slots", "must be at least 1");
        }
        if self.bearing_balls == 0 {
            return bad("bearing_balls", "must be at least 1");
        }
        Ok(())
    }
}

/// Synchronous speed in rpm for a supply frequency and pole-pair count.
pub fn synchronous_speed_rpm(supply_frequency: f64, pole_pairs: u32) -> f64 {
    60.0 * supply_frequency / pole_pairs as f64
}

/// `s = (n_sync - n_rotor) / n_sync`.
pub fn slip_from_speed(synchronous_rpm: f64, rotor_rpm: f64) -> Result<f64> {
    if !(synchronous_rpm.is_finite() && synchronous_rpm > 0.0 && rotor_rpm.is_finite()) {
        return Err(Error::InvalidParameter {
            name: "synchronous_rpm",
            reason: format!("cannot derive slip from {synchronous_rpm} rpm and {rotor_rpm} rpm"),
        });
    }
    Ok((synchronous_rpm - rotor_rpm) / synchronous_rpm)
}

/// Mechanical rotor frequency `f_f(1 - s)/p`.
pub fn rotor_mech_frequency(supply_frequency: f64, pole_pairs: u32, slip: f64) -> f64 {
    supply_frequency * (1.0 - slip) / pole_pairs as f64
}

/// Lower/upper broken-bar sidebands for one harmonic index `k`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SidebandPair {
    pub k: u32,
    pub lower: f64,
    pub upper: f64,
    /// `f_f(1 - 2ks)` came out negative and was folded to its absolute value.
    pub lower_reflected: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PredictedFrequency {
    pub frequency: f64,
    /// The formula gave a negative value; `frequency` is its absolute value.
    pub reflected: bool,
}

impl PredictedFrequency {
    fn fold(f: f64) -> Self {
        Self {
            frequency: f.abs(),
            reflected: f < 0.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TermUnits {
    /// Integer terms count multiples of the supply frequency.
    #[default]
    SupplyMultiples,
    /// Integer terms are taken literally as hertz.
    Hertz,
}

impl TermUnits {
    fn scale(self, supply_frequency: f64) -> f64 {
        match self {
            TermUnits::SupplyMultiples => supply_frequency,
            TermUnits::Hertz => 1.0,
        }
    }
}

pub fn broken_bar_frequencies(params: &MotorParams, k_max: u32) -> Result<Vec<SidebandPair>> {
    params.validate()?;
    if k_max == 0 {
        return Err(Error::InvalidParameter {
            name: "k_max",
            reason: "must be at least 1".into(),
        });
    }
    let f = params.supply_frequency;
    let s = params.slip;
    Ok((1..=k_max)
        .map(|k| {
            let shift = 2.0 * k as f64 * s;
            let lower = f * (1.0 - shift);
            SidebandPair {
                k,
                lower: lower.abs(),
                upper: f * (1.0 + shift),
                lower_reflected: lower < 0.0,
            }
        })
        .collect())
}

/// `f_f·(R ± 1)(1 - s)/p + n_ws` for each odd `n_ws`; duplicates dropped.
pub fn eccentricity_frequencies(
    params: &MotorParams,
    n_ws_list: &[i64],
    units: TermUnits,
) -> Result<Vec<PredictedFrequency>> {
    params.validate()?;
    if let Some(&even) = n_ws_list.iter().find(|n| *n % 2 == 0) {
        return Err(Error::EvenNws(even));
    }
    let f = params.supply_frequency;
    let slot_scale = (1.0 - params.slip) / params.pole_pairs as f64;
    let term = units.scale(f);
    let mut out: Vec<PredictedFrequency> = Vec::new();
    for n_d in [1.0, -1.0] {
        let slot = f * (params.rotor_slots as f64 + n_d) * slot_scale;
        for &n_ws in n_ws_list {
            let p = PredictedFrequency::fold(slot + n_ws as f64 * term);
            if !out.iter().any(|q| q.frequency == p.frequency) {
                out.push(p);
            }
        }
    }
    Ok(out)
}

/// `f_f·n(1 - s)/p ± k` for every `n` and odd `k`, `+k` first.
pub fn stator_fault_frequencies(
    params: &MotorParams,
    n_list: &[i64],
    k_list: &[i64],
    units: TermUnits,
) -> Result<Vec<PredictedFrequency>> {
    params.validate()?;
    if let Some(&even) = k_list.iter().find(|k| *k % 2 == 0) {
        return Err(Error::EvenK(even));
    }
    let f = params.supply_frequency;
    let term = units.scale(f);
    let mut out = Vec::with_capacity(2 * n_list.len() * k_list.len());
    for &n in n_list {
        let base = f * n as f64 * (1.0 - params.slip) / params.pole_pairs as f64;
        for &k in k_list {
            out.push(PredictedFrequency::fold(base + k as f64 * term));
            out.push(PredictedFrequency::fold(base - k as f64 * term));
        }
    }
    Ok(out)
}

/// Outer and inner bearing defect frequencies `(0.4·n·f_rm, 0.6·n·f_rm)`.
pub fn bearing_fault_frequencies(params: &MotorParams) -> Result<(f64, f64)> {
    params.validate()?;
    let base = params.bearing_balls as f64 * params.rotor_mech_frequency;
    Ok((0.4 * base, 0.6 * base))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Lower,
    Upper,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DetectOptions {
    /// Half-width of the search window around each prediction, Hz.
    pub tolerance: f64,
    /// Matches weaker than this (dB relative to the fundamental) are absent.
    pub floor_db: f64,
}

impl Default for DetectOptions {
    fn default() -> Self {
        Self {
            tolerance: 1.5,
            floor_db: DEFAULT_SIDEBAND_FLOOR_DB,
        }
    }
}

/// Strongest bin near one predicted sideband.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SidebandMatch {
    pub k: u32,
    pub side: Side,
    pub predicted: f64,
    /// Bin of the window maximum; `None` when no bin falls in the window.
    pub frequency: Option<f64>,
    pub magnitude: f64,
    /// `20·log10(M_sb / M_1)`, floored at [`LEVEL_FLOOR_DB`].
    pub level_db: f64,
    pub present: bool,
}

fn level_db(magnitude: f64, reference: f64) -> f64 {
    if magnitude <= 0.0 {
        return LEVEL_FLOOR_DB;
    }
    (20.0 * (magnitude / reference).log10()).max(LEVEL_FLOOR_DB)
}

pub fn detect_sidebands(
    spectrum: &Spectrum,
    fundamental: f64,
    predicted: &[SidebandPair],
    options: DetectOptions,
) -> Result<Vec<SidebandMatch>> {
    let bin_width = spectrum.bin_width();
    if options.tolerance.is_nan() || options.tolerance < bin_width {
        return Err(Error::BinTooNarrow {
            tolerance: options.tolerance,
            bin_width,
        });
    }
    let fundamental_bin = spectrum.nearest_bin(fundamental).filter(|&b| b > 0);
    let m1 = fundamental_bin
        .map(|b| spectrum.magnitudes()[b])
        .unwrap_or(0.0);
    if m1 == 0.0 {
        return Err(Error::FundamentalMagnitudeZero);
    }

    let freqs = spectrum.frequencies();
    let mags = spectrum.magnitudes();
    let probe = |k: u32, side: Side, target: f64| {
        let mut best: Option<usize> = None;
        for i in 1..freqs.len() {
            if Some(i) == fundamental_bin || (freqs[i] - target).abs() > options.tolerance {
                continue;
            }
            match best {
                Some(b) if mags[b] >= mags[i] => {}
                _ => best = Some(i),
            }
        }
        let (frequency, magnitude) = match best {
            Some(b) => (Some(freqs[b]), mags[b]),
            None => (None, 0.0),
        };
        let level = level_db(magnitude, m1);
        SidebandMatch {
            k,
            side,
            predicted: target,
            frequency,
            magnitude,
            level_db: level,
            present: frequency.is_some() && level >= options.floor_db,
        }
    };

    Ok(predicted
        .iter()
        .flat_map(|p| {
            [
                probe(p.k, Side::Lower, p.lower),
                probe(p.k, Side::Upper, p.upper),
            ]
        })
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Severity {
    NoBrokenBar,
    OneBarCracked,
    MultipleBarsCracked,
}

impl Severity {
    pub fn is_fault(self) -> bool {
        self != Severity::NoBrokenBar
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeverityVerdict {
    pub verdict: Severity,
    /// Positive gap between fundamental and sideband level, dB.
    pub db_difference: f64,
}

/// `> 50 dB` none, `[40, 50] dB` one bar, `< 40 dB` several bars.
pub fn broken_bar_severity(db_difference: f64) -> SeverityVerdict {
    let verdict = if db_difference > 50.0 {
        Severity::NoBrokenBar
    } else if db_difference >= 40.0 {
        Severity::OneBarCracked
    } else {
        Severity::MultipleBarsCracked
    };
    SeverityVerdict {
        verdict,
        db_difference,
    }
}

/// Grades the strongest matched sideband. With no window at all the gap is
/// taken as `-LEVEL_FLOOR_DB`.
pub fn severity_from_sidebands(matches: &[SidebandMatch]) -> SeverityVerdict {
    let strongest = matches
        .iter()
        .filter(|m| m.frequency.is_some())
        .map(|m| m.level_db)
        .fold(LEVEL_FLOOR_DB, f64::max);
    broken_bar_severity(-strongest)
}
