//! Time-domain signals and one-sided magnitude spectra.
//!
//! Spectra use an unscaled forward DFT and report `2·|X_k| / Σw` for interior
//! bins (`|X_k| / Σw` for DC and Nyquist), so a unit-amplitude sine sitting on
//! a bin reads 1.0 regardless of the window. The DC bin never takes part in
//! peak searches.

use std::collections::BTreeSet;
use std::f64::consts::PI;

use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A uniformly sampled, real-valued current recording.
#[derive(Debug, Clone, PartialEq)]
pub struct Signal {
    samples: Vec<f64>,
    sample_rate: f64,
    label: String,
}

impl Signal {
    pub fn new(samples: Vec<f64>, sample_rate: f64, label: impl Into<String>) -> Result<Self> {
        if samples.len() < 2 {
            return Err(Error::EmptySignal(samples.len()));
        }
        if !(sample_rate.is_finite() && sample_rate > 0.0) {
            return Err(Error::InvalidSampleRate(sample_rate));
        }
        if let Some((index, &value)) = samples.iter().enumerate().find(|(_, v)| !v.is_finite()) {
            return Err(Error::NonFiniteSample { index, value });
        }
        Ok(Self {
            samples,
            sample_rate,
            label: label.into(),
        })
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn sample_rate(&self) -> f64 {
        self.sample_rate
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn duration(&self) -> f64 {
        self.samples.len() as f64 / self.sample_rate
    }

    /// Returns `samples[start..start + len]` as a new signal with the same rate.
    pub fn window(&self, start: usize, len: usize) -> Result<Signal> {
        let end = start.saturating_add(len).min(self.samples.len());
        let slice = self.samples.get(start..end).unwrap_or(&[]);
        Signal::new(
            slice.to_vec(),
            self.sample_rate,
            format!("{}[{start}..{end}]", self.label),
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WindowKind {
    #[default]
    Rectangular,
    Hann,
}

impl WindowKind {
    pub fn weights(self, n: usize) -> Vec<f64> {
        match self {
            WindowKind::Rectangular => vec![1.0; n],
            WindowKind::Hann => {
                if n < 2 {
                    return vec![0.0; n];
                }
                let denom = (n - 1) as f64;
                (0..n)
                    .map(|i| 0.5 - 0.5 * (2.0 * PI * i as f64 / denom).cos())
                    .collect()
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Normalization {
    #[default]
    Raw,
    /// Magnitudes divided by the largest non-DC magnitude.
    FundamentalUnit,
}

/// One-sided magnitude spectrum, `floor(N/2) + 1` bins including DC.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    frequencies: Vec<f64>,
    magnitudes: Vec<f64>,
    normalization: Normalization,
    sample_rate: f64,
    signal_len: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Fundamental {
    pub frequency: f64,
    pub magnitude: f64,
    pub bin: usize,
    /// Set when every bin in the band is zero; the returned bin is then the first one.
    pub zero_spectrum: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Peak {
    pub frequency: f64,
    pub magnitude: f64,
}

impl Spectrum {
    pub fn frequencies(&self) -> &[f64] {
        &self.frequencies
    }

    pub fn magnitudes(&self) -> &[f64] {
        &self.magnitudes
    }

    pub fn normalization(&self) -> Normalization {
        self.normalization
    }

    pub fn sample_rate(&self) -> f64 {
        self.sample_rate
    }

    /// Length of the time-domain signal the spectrum came from.
    pub fn signal_len(&self) -> usize {
        self.signal_len
    }

    pub fn len(&self) -> usize {
        self.magnitudes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.magnitudes.is_empty()
    }

    pub fn bin_width(&self) -> f64 {
        self.sample_rate / self.signal_len as f64
    }

    pub fn max_frequency(&self) -> f64 {
        self.frequencies.last().copied().unwrap_or(0.0)
    }

    /// Index of the bin nearest `frequency`, or `None` outside `[0, max_frequency]`.
    pub fn nearest_bin(&self, frequency: f64) -> Option<usize> {
        if !frequency.is_finite() || frequency < 0.0 {
            return None;
        }
        let idx = (frequency / self.bin_width()).round();
        if idx > (self.len() - 1) as f64 {
            // Allow rounding up to half a bin past the last bin.
            if frequency <= self.max_frequency() + 0.5 * self.bin_width() {
                return Some(self.len() - 1);
            }
            return None;
        }
        Some(idx as usize)
    }

    /// Rescales so the largest non-DC magnitude is exactly 1.0. An all-zero
    /// spectrum is returned unchanged apart from the normalization tag.
    pub fn normalized(&self) -> Spectrum {
        let peak = self
            .magnitudes
            .iter()
            .skip(1)
            .copied()
            .fold(0.0_f64, f64::max);
        let magnitudes = if peak > 0.0 {
            self.magnitudes.iter().map(|m| m / peak).collect()
        } else {
            self.magnitudes.clone()
        };
        Spectrum {
            frequencies: self.frequencies.clone(),
            magnitudes,
            normalization: Normalization::FundamentalUnit,
            sample_rate: self.sample_rate,
            signal_len: self.signal_len,
        }
    }

    /// Local maxima (excluding DC) at or above `min_relative` times the largest
    /// non-DC magnitude, strongest first, at most `max_count` of them.
    pub fn peaks(&self, min_relative: f64, max_count: usize) -> Vec<Peak> {
        let m = &self.magnitudes;
        let top = m.iter().skip(1).copied().fold(0.0_f64, f64::max);
        if top == 0.0 {
            return Vec::new();
        }
        let mut found: Vec<Peak> = (1..m.len())
            .filter(|&i| {
                let left = m[i - 1];
                let right = m.get(i + 1).copied().unwrap_or(f64::NEG_INFINITY);
                m[i] > left && m[i] >= right && m[i] >= min_relative * top
            })
            .map(|i| Peak {
                frequency: self.frequencies[i],
                magnitude: m[i],
            })
            .collect();
        found.sort_by(|a, b| {
            b.magnitude
                .total_cmp(&a.magnitude)
                .then(a.frequency.total_cmp(&b.frequency))
        });
        found.truncate(max_count);
        found
    }
}

/// One-sided magnitude spectrum of the windowed signal.
pub fn compute_spectrum(
    signal: &Signal,
    window: WindowKind,
    normalization: Normalization,
) -> Spectrum {
    let n = signal.len();
    let weights = window.weights(n);
    let gain: f64 = weights.iter().sum();

    let mut buf: Vec<Complex64> = signal
        .samples()
        .iter()
        .zip(&weights)
        .map(|(x, w)| Complex64::new(x * w, 0.0))
        .collect();
    FftPlanner::new().plan_fft_forward(n).process(&mut buf);

    let bins = n / 2 + 1;
    let df = signal.sample_rate() / n as f64;
    let frequencies = (0..bins).map(|k| k as f64 * df).collect();
    let magnitudes = buf[..bins]
        .iter()
        .enumerate()
        .map(|(k, x)| {
            if gain == 0.0 {
                return 0.0;
            }
            let edge = k == 0 || (n % 2 == 0 && k == n / 2);
            let scale = if edge { 1.0 } else { 2.0 };
            scale * x.norm() / gain
        })
        .collect();

    let raw = Spectrum {
        frequencies,
        magnitudes,
        normalization: Normalization::Raw,
        sample_rate: signal.sample_rate(),
        signal_len: n,
    };
    match normalization {
        Normalization::Raw => raw,
        Normalization::FundamentalUnit => raw.normalized(),
    }
}

fn check_band(spectrum: &Spectrum, low: f64, high: f64) -> Result<()> {
    if !(low.is_finite() && high.is_finite()) || low >= high {
        return Err(Error::InvalidBand { low, high });
    }
    let max = spectrum.max_frequency();
    if low < 0.0 || high > max {
        return Err(Error::BandOutOfRange { low, high, max });
    }
    Ok(())
}

/// Strongest non-DC bin inside `[low, high]`; ties go to the lower frequency.
pub fn find_fundamental(spectrum: &Spectrum, band: (f64, f64)) -> Result<Fundamental> {
    let (low, high) = band;
    check_band(spectrum, low, high)?;
    let mut best: Option<(usize, f64)> = None;
    for (i, (&f, &m)) in spectrum
        .frequencies
        .iter()
        .zip(&spectrum.magnitudes)
        .enumerate()
        .skip(1)
    {
        if f < low || f > high {
            continue;
        }
        match best {
            Some((_, bm)) if m <= bm => {}
            _ => best = Some((i, m)),
        }
    }
    let (bin, magnitude) = best.ok_or(Error::EmptyBand { low, high })?;
    Ok(Fundamental {
        frequency: spectrum.frequencies[bin],
        magnitude,
        bin,
        zero_spectrum: magnitude == 0.0,
    })
}

/// `sqrt(Σ_{h=2..=max_harmonic} M_h²) / M_1`, using the bin nearest each
/// multiple of `fundamental`. Harmonics beyond Nyquist are skipped.
pub fn total_harmonic_distortion(
    spectrum: &Spectrum,
    fundamental: f64,
    max_harmonic: u32,
) -> Result<f64> {
    if max_harmonic < 2 {
        return Err(Error::InvalidHarmonicCount(max_harmonic));
    }
    let m1 = spectrum
        .nearest_bin(fundamental)
        .filter(|&b| b > 0)
        .map(|b| spectrum.magnitudes[b])
        .unwrap_or(0.0);
    if m1 == 0.0 {
        return Err(Error::FundamentalNotFound);
    }
    let harmonic_power: f64 = (2..=max_harmonic)
        .filter_map(|h| spectrum.nearest_bin(h as f64 * fundamental))
        .map(|b| spectrum.magnitudes[b].powi(2))
        .sum();
    Ok(harmonic_power.sqrt() / m1)
}

/// Share of non-DC spectral power held by the bins nearest `sideband_bins`.
/// Repeated frequencies that map to the same bin are counted once.
pub fn sideband_power_fraction(spectrum: &Spectrum, sideband_bins: &[f64]) -> Result<f64> {
    let max = spectrum.max_frequency();
    let mut bins = BTreeSet::new();
    for &f in sideband_bins {
        match spectrum.nearest_bin(f) {
            Some(b) => {
                bins.insert(b);
            }
            None => {
                return Err(Error::BandOutOfRange {
                    low: f,
                    high: f,
                    max,
                })
            }
        }
    }
    let total: f64 = spectrum.magnitudes.iter().skip(1).map(|m| m * m).sum();
    if total == 0.0 {
        return Ok(0.0);
    }
    let sidebands: f64 = bins
        .into_iter()
        .filter(|&b| b > 0)
        .map(|b| spectrum.magnitudes[b].powi(2))
        .sum();
    Ok((sidebands / total).clamp(0.0, 1.0))
}

#[cfg(test)]
pub(crate) mod tests_support {
    use super::*;

    /// Raw spectrum with bin `k` at `k·fs/n` holding `magnitudes[k]`.
    pub(crate) fn spectrum(magnitudes: Vec<f64>, sample_rate: f64, signal_len: usize) -> Spectrum {
        let df = sample_rate / signal_len as f64;
        Spectrum {
            frequencies: (0..magnitudes.len()).map(|k| k as f64 * df).collect(),
            magnitudes,
            normalization: Normalization::Raw,
            sample_rate,
            signal_len,
        }
    }
}
