//! Synthetic stator-current generator with broken-bar sideband injection.
//!
//! A capture is a sum of sines (fundamental, harmonics, and the
//! `f_f(1 ± 2ks)` sideband pairs), all starting at phase zero, plus seeded
//! Gaussian noise. Amplitudes other than the fundamental's are relative to it.
//!
//! The default capture is 16 s at 250 Hz (4000 samples). With a 1/16 Hz bin
//! width the supply frequencies used by the presets land on exact bins and the
//! 23 Hz broken-bar sidebands sit within 0.01 bin of one.

use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::signal::Signal;

pub const DEFAULT_SAMPLE_RATE: f64 = 250.0;
pub const DEFAULT_DURATION: f64 = 16.0;
pub const DEFAULT_NOISE_RMS: f64 = 0.02;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    pub name: String,
    /// Hz.
    pub supply_frequency: f64,
    pub fundamental_amplitude: f64,
    /// Harmonic index (≥ 2) to amplitude relative to the fundamental.
    pub harmonic_amplitudes: BTreeMap<u32, f64>,
    pub slip: f64,
    /// Sideband index `k` to relative `(lower, upper)` amplitudes.
    pub broken_bar_amplitudes: BTreeMap<u32, (f64, f64)>,
    /// Noise standard deviation relative to the fundamental amplitude.
    pub noise_rms: f64,
    /// Hz.
    pub sample_rate: f64,
    /// Seconds.
    pub duration: f64,
    pub seed: u64,
}

impl Default for SimConfig {
    fn default() -> Self {
        Self {
            name: "custom".into(),
            supply_frequency: 50.0,
            fundamental_amplitude: 1.0,
            harmonic_amplitudes: BTreeMap::new(),
            slip: 0.0,
            broken_bar_amplitudes: BTreeMap::new(),
            noise_rms: 0.0,
            sample_rate: DEFAULT_SAMPLE_RATE,
            duration: DEFAULT_DURATION,
            seed: 0,
        }
    }
}

impl SimConfig {
    pub fn sample_count(&self) -> usize {
        (self.duration * self.sample_rate).round() as usize
    }

    /// `(frequency, absolute amplitude)` of every tone, zero-amplitude ones included.
    pub fn tones(&self) -> Vec<(f64, f64)> {
        let f = self.supply_frequency;
        let a = self.fundamental_amplitude;
        let mut out = vec![(f, a)];
        out.extend(
            self.harmonic_amplitudes
                .iter()
                .map(|(&h, &r)| (h as f64 * f, r * a)),
        );
        for (&k, &(lower, upper)) in &self.broken_bar_amplitudes {
            let shift = 2.0 * k as f64 * self.slip;
            out.push(((f * (1.0 - shift)).abs(), lower * a));
            out.push((f * (1.0 + shift), upper * a));
        }
        out
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidConfig(msg));
        let positive = |v: f64| v.is_finite() && v > 0.0;
        let non_negative = |v: f64| v.is_finite() && v >= 0.0;
        if !positive(self.supply_frequency) {
            return bad(format!(
                "supply_frequency must be positive, got {}",
                self.supply_frequency
            ));
        }
        if !positive(self.sample_rate) {
            return Err(Error::InvalidSampleRate(self.sample_rate));
        }
        if !positive(self.duration) {
            return bad(format!("duration must be positive, got {}", self.duration));
        }
        if !(self.slip.is_finite() && (0.0..1.0).contains(&self.slip)) {
            return bad(format!("slip must lie in [0, 1), got {}", self.slip));
        }
        if !non_negative(self.fundamental_amplitude) {
            return bad(format!(
                "fundamental_amplitude must be >= 0, got {}",
                self.fundamental_amplitude
            ));
        }
        if !non_negative(self.noise_rms) {
            return bad(format!("noise_rms must be >= 0, got {}", self.noise_rms));
        }
        for (&h, &r) in &self.harmonic_amplitudes {
            if h < 2 {
                return bad(format!("harmonic index must be >= 2, got {h}"));
            }
            if !non_negative(r) {
                return bad(format!("harmonic {h} amplitude must be >= 0, got {r}"));
            }
        }
        for (&k, &(lower, upper)) in &self.broken_bar_amplitudes {
            if k == 0 {
                return bad("broken-bar index k must be >= 1".into());
            }
            if !(non_negative(lower) && non_negative(upper)) {
                return bad(format!("broken-bar k={k} amplitudes must be >= 0"));
            }
        }
        let n = self.duration * self.sample_rate;
        if n.is_nan() || n.round() < 2.0 {
            return bad(format!(
                "duration x sample_rate must give at least 2 samples, got {n}"
            ));
        }
        let nyquist = self.sample_rate / 2.0;
        let (f, _) = self.tones()[0];
        if f >= nyquist {
            return Err(Error::NyquistViolation {
                sample_rate: self.sample_rate,
                frequency: f,
            });
        }
        for (freq, amp) in self.tones() {
            if amp > 0.0 && freq >= nyquist {
                return Err(Error::NyquistViolation {
                    sample_rate: self.sample_rate,
                    frequency: freq,
                });
            }
        }
        Ok(())
    }

    /// `"<name> seed=<seed>"`.
    pub fn label(&self) -> String {
        format!("{} seed={}", self.name, self.seed)
    }
}

pub fn generate(config: &SimConfig) -> Result<Signal> {
    config.validate()?;
    let n = config.sample_count();
    let fs = config.sample_rate;
    let tones: Vec<(f64, f64)> = config
        .tones()
        .into_iter()
        .filter(|&(_, a)| a > 0.0)
        .collect();
    let mut samples: Vec<f64> = (0..n)
        .map(|i| {
            let t = i as f64 / fs;
            tones
                .iter()
                .map(|&(f, a)| a * (std::f64::consts::TAU * f * t).sin())
                .sum()
        })
        .collect();
    let sigma = config.noise_rms * config.fundamental_amplitude;
    if sigma > 0.0 {
        let normal = Normal::new(0.0, sigma).expect("finite positive sigma");
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
        for s in &mut samples {
            *s += normal.sample(&mut rng);
        }
    }
    Signal::new(samples, fs, config.label())
}

fn healthy(
    name: String,
    f: f64,
    amplitude: f64,
    harmonics: [(u32, f64); 3],
    seed: u64,
) -> SimConfig {
    SimConfig {
        name,
        supply_frequency: f,
        fundamental_amplitude: amplitude,
        harmonic_amplitudes: harmonics.into_iter().collect(),
        noise_rms: DEFAULT_NOISE_RMS,
        seed,
        ..SimConfig::default()
    }
}

/// Named configurations: `healthy-20hp-{8,10,14,16,18,23}Hz`,
/// `healthy-40hp-{8,10,14,18,23}Hz` and `faulty-20hp-23Hz`.
///
/// The harmonic levels and the 2:1 current ratio between the two motor sizes
/// are conventions of this simulator, not measured values.
pub fn presets() -> BTreeMap<String, SimConfig> {
    const SMALL: [(u32, f64); 3] = [(2, 0.02), (3, 0.05), (5, 0.03)];
    const LARGE: [(u32, f64); 3] = [(2, 0.015), (3, 0.04), (5, 0.025)];
    let mut out = BTreeMap::new();
    for f in [8u32, 10, 14, 16, 18, 23] {
        let name = format!("healthy-20hp-{f}Hz");
        out.insert(
            name.clone(),
            healthy(name, f as f64, 1.0, SMALL, 2000 + f as u64),
        );
    }
    for f in [8u32, 10, 14, 18, 23] {
        let name = format!("healthy-40hp-{f}Hz");
        out.insert(
            name.clone(),
            healthy(name, f as f64, 2.0, LARGE, 4000 + f as u64),
        );
    }
    let name = "faulty-20hp-23Hz".to_string();
    let mut faulty = healthy(name.clone(), 23.0, 1.0, SMALL, 9023);
    faulty.slip = 0.197;
    faulty.broken_bar_amplitudes.insert(1, (0.47, 0.42));
    out.insert(name, faulty);
    out
}

pub fn preset(name: &str) -> Option<SimConfig> {
    presets().remove(name)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::signal::{
        compute_spectrum, sideband_power_fraction, total_harmonic_distortion, Normalization,
        WindowKind,
    };

    fn quiet(mut c: SimConfig) -> SimConfig {
        c.noise_rms = 0.0;
        c
    }

    #[test]
    fn preset_table() {
        let p = presets();
        assert_eq!(p.len(), 12);
        assert_eq!(p["faulty-20hp-23Hz"].slip, 0.197);
        assert!(p["healthy-20hp-8Hz"].broken_bar_amplitudes.is_empty());
        for (name, c) in &p {
            assert_eq!(&c.name, name);
            c.validate().unwrap();
            assert_eq!(c.sample_count(), 4000);
        }
        assert!(preset("healthy-40hp-16Hz").is_none());
    }

    #[test]
    fn deterministic_for_a_seed() {
        let c = preset("faulty-20hp-23Hz").unwrap();
        let a = generate(&c).unwrap();
        let b = generate(&c).unwrap();
        assert!(a
            .samples()
            .iter()
            .zip(b.samples())
            .all(|(x, y)| x.to_bits() == y.to_bits()));
        assert_eq!(a.label(), "faulty-20hp-23Hz seed=9023");
        let mut other = c.clone();
        other.seed += 1;
        assert_ne!(generate(&other).unwrap().samples(), a.samples());
    }

    #[test]
    fn all_zero_amplitudes_give_silence() {
        let c = SimConfig {
            fundamental_amplitude: 0.0,
            harmonic_amplitudes: [(3, 0.5)].into_iter().collect(),
            noise_rms: 0.5,
            ..SimConfig::default()
        };
        assert!(generate(&c).unwrap().samples().iter().all(|&x| x == 0.0));
    }

    #[test]
    fn nyquist_and_validation() {
        let c = SimConfig {
            supply_frequency: 23.0,
            sample_rate: 10.0,
            duration: 4.0,
            ..SimConfig::default()
        };
        assert!(
            matches!(generate(&c), Err(Error::NyquistViolation { frequency, .. }) if frequency == 23.0)
        );

        // A silent harmonic above Nyquist is fine; an audible one is not.
        let mut c = SimConfig {
            supply_frequency: 50.0,
            sample_rate: 250.0,
            ..SimConfig::default()
        };
        c.harmonic_amplitudes.insert(3, 0.0);
        c.validate().unwrap();
        c.harmonic_amplitudes.insert(3, 0.01);
        assert!(
            matches!(c.validate(), Err(Error::NyquistViolation { frequency, .. }) if frequency == 150.0)
        );

        let mut c = SimConfig::default();
        c.harmonic_amplitudes.insert(1, 0.1);
        assert!(c.validate().is_err());
        let c = SimConfig {
            duration: 0.004,
            ..SimConfig::default()
        };
        assert!(c.validate().is_err());
        let c = SimConfig {
            noise_rms: -1.0,
            ..SimConfig::default()
        };
        assert!(c.validate().is_err());
    }

    #[test]
    fn healthy_spectrum_has_no_sideband_energy() {
        let c = quiet(preset("healthy-20hp-23Hz").unwrap());
        let sp = compute_spectrum(
            &generate(&c).unwrap(),
            WindowKind::Rectangular,
            Normalization::FundamentalUnit,
        );
        for (f, m) in sp.frequencies().iter().zip(sp.magnitudes()) {
            if (f - 13.938).abs() <= 2.0 || (f - 32.062).abs() <= 2.0 {
                assert!(*m == 0.0 || 20.0 * m.log10() < -80.0, "{f} Hz: {m}");
            }
        }
    }

    #[test]
    fn noiseless_amplitudes_are_reproduced() {
        for name in ["faulty-20hp-23Hz", "healthy-20hp-8Hz", "healthy-40hp-14Hz"] {
            let c = quiet(preset(name).unwrap());
            let sp = compute_spectrum(
                &generate(&c).unwrap(),
                WindowKind::Rectangular,
                Normalization::FundamentalUnit,
            );
            let a = c.fundamental_amplitude;
            for (f, amp) in c.tones() {
                let m = sp.magnitudes()[sp.nearest_bin(f).unwrap()];
                let want = amp / a;
                assert!(
                    (m - want).abs() <= 1e-3 * want,
                    "{name} {f} Hz: {m} vs {want}"
                );
            }
        }
    }

    #[test]
    fn noise_has_requested_rms() {
        let c = SimConfig {
            fundamental_amplitude: 2.0,
            noise_rms: 0.1,
            ..SimConfig::default()
        };
        let clean = generate(&SimConfig {
            noise_rms: 0.0,
            ..c.clone()
        })
        .unwrap();
        let noisy = generate(&c).unwrap();
        let rms = (noisy
            .samples()
            .iter()
            .zip(clean.samples())
            .map(|(a, b)| (a - b).powi(2))
            .sum::<f64>()
            / 4000.0)
            .sqrt();
        assert!((rms - 0.2).abs() < 0.01, "{rms}");
    }

    #[test]
    fn faulty_preset_is_more_distorted() {
        let score = |name: &str| {
            let c = preset(name).unwrap();
            let sp = compute_spectrum(
                &generate(&c).unwrap(),
                WindowKind::Rectangular,
                Normalization::Raw,
            );
            let f = c.supply_frequency;
            let s = 0.197;
            total_harmonic_distortion(&sp, f, 5).unwrap()
                + sideband_power_fraction(&sp, &[f * (1.0 - 2.0 * s), f * (1.0 + 2.0 * s)]).unwrap()
        };
        assert!(score("faulty-20hp-23Hz") > score("healthy-20hp-23Hz"));
    }
}
