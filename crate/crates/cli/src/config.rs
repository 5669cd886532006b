//! Flat `key = value` config files.
//!
//! ```text
//! # comment
//! supply_frequency = 23     # trailing comments are fine
//! slip = 0.197
//! ```
//!
//! One key per line; keys are `[a-z0-9_.]+`; repeated and unknown keys are
//! errors. `--set key=value` overrides are applied on top of the file.
//!
//! Motor keys: `supply_frequency` (required), `pole_pairs` (2),
//! `rotor_slots` (28), `bearing_balls` (8), `slip` or `rotor_speed_rpm`
//! (slip 0 if neither), `rotor_mech_frequency` (`f(1 - s)/p`).
//!
//! Simulator keys: `name`, `supply_frequency`, `fundamental_amplitude`,
//! `slip`, `noise_rms`, `sample_rate`, `duration`, `seed`,
//! `harmonic.<h> = <relative amplitude>`,
//! `broken_bar.<k> = <lower>, <upper>`.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;

use mcsa_core::signatures::{rotor_mech_frequency, slip_from_speed, synchronous_speed_rpm};
use mcsa_core::{MotorParams, SimConfig};

use crate::error::{CliError, Result};

#[derive(Debug, Clone, Default)]
pub struct KeyValues {
    origin: String,
    entries: BTreeMap<String, String>,
}

fn valid_key(k: &str) -> bool {
    !k.is_empty()
        && k.bytes()
            .all(|b| b.is_ascii_lowercase() || b.is_ascii_digit() || b == b'_' || b == b'.')
}

impl KeyValues {
    pub fn parse(text: &str, origin: &str) -> Result<Self> {
        let mut kv = KeyValues {
            origin: origin.to_string(),
            entries: BTreeMap::new(),
        };
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| kv.error(format!("line {}: expected `key = value`", i + 1)))?;
            let (k, v) = (k.trim(), v.trim());
            if !valid_key(k) {
                return Err(kv.error(format!("line {}: invalid key `{k}`", i + 1)));
            }
            if v.is_empty() {
                return Err(kv.error(format!("line {}: `{k}` has no value", i + 1)));
            }
            if kv.entries.insert(k.to_string(), v.to_string()).is_some() {
                return Err(kv.error(format!("line {}: `{k}` given twice", i + 1)));
            }
        }
        Ok(kv)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::parse(&text, &path.display().to_string())
    }

    /// File contents (if any) with `key=value` overrides applied.
    pub fn from_sources(path: Option<&Path>, overrides: &[String]) -> Result<Self> {
        let mut kv = match path {
            Some(p) => Self::load(p)?,
            None => KeyValues {
                origin: "--set".into(),
                ..Default::default()
            },
        };
        kv.apply_overrides(overrides)?;
        Ok(kv)
    }

    pub fn apply_overrides(&mut self, overrides: &[String]) -> Result<()> {
        for o in overrides {
            let (k, v) = o
                .split_once('=')
                .map(|(k, v)| (k.trim(), v.trim()))
                .filter(|(k, v)| valid_key(k) && !v.is_empty())
                .ok_or_else(|| CliError::Usage(format!("--set expects key=value, got `{o}`")))?;
            self.entries.insert(k.to_string(), v.to_string());
        }
        Ok(())
    }

    fn error(&self, message: String) -> CliError {
        CliError::Config {
            origin: self.origin.clone(),
            message,
        }
    }

    pub fn take<T: FromStr>(&mut self, key: &str) -> Result<Option<T>> {
        match self.entries.remove(key) {
            None => Ok(None),
            Some(v) => v
                .parse()
                .map(Some)
                .map_err(|_| self.error(format!("`{key}`: cannot parse `{v}`"))),
        }
    }

    fn take_prefixed(&mut self, prefix: &str) -> Vec<(String, String)> {
        let keys: Vec<String> = self
            .entries
            .keys()
            .filter(|k| k.starts_with(prefix))
            .cloned()
            .collect();
        keys.into_iter()
            .map(|k| {
                let v = self.entries.remove(&k).expect("key listed above");
                (k[prefix.len()..].to_string(), v)
            })
            .collect()
    }

    /// Errors on any key nobody consumed.
    pub fn finish(self) -> Result<()> {
        match self.entries.keys().next() {
            None => Ok(()),
            Some(k) => Err(self.error(format!("unknown key `{k}`"))),
        }
    }
}

pub fn motor_params(mut kv: KeyValues) -> Result<MotorParams> {
    let supply_frequency: f64 = kv
        .take("supply_frequency")?
        .ok_or_else(|| kv.error("`supply_frequency` is required".into()))?;
    let pole_pairs = kv.take("pole_pairs")?.unwrap_or(2u32);
    let rotor_slots = kv.take("rotor_slots")?.unwrap_or(28u32);
    let bearing_balls = kv.take("bearing_balls")?.unwrap_or(8u32);
    let slip = kv.take::<f64>("slip")?;
    let speed = kv.take::<f64>("rotor_speed_rpm")?;
    let slip = match (slip, speed) {
        (Some(_), Some(_)) => {
            return Err(kv.error("give either `slip` or `rotor_speed_rpm`, not both".into()))
        }
        (Some(s), None) => s,
        (None, Some(rpm)) => {
            if pole_pairs == 0 {
                return Err(kv.error("`pole_pairs` must be at least 1".into()));
            }
            slip_from_speed(synchronous_speed_rpm(supply_frequency, pole_pairs), rpm)?
        }
        (None, None) => 0.0,
    };
    let rotor_mech = match kv.take::<f64>("rotor_mech_frequency")? {
        Some(v) => v,
        None if pole_pairs > 0 => rotor_mech_frequency(supply_frequency, pole_pairs, slip),
        None => 0.0,
    };
    kv.finish()?;
    let params = MotorParams {
        supply_frequency,
        pole_pairs,
        rotor_slots,
        bearing_balls,
        rotor_mech_frequency: rotor_mech,
        slip,
    };
    params.validate()?;
    Ok(params)
}

fn parse_index(kv: &KeyValues, key: &str, raw: &str) -> Result<u32> {
    raw.parse().map_err(|_| {
        kv.error(format!(
            "`{key}{raw}`: index must be a non-negative integer"
        ))
    })
}

fn parse_f64(kv: &KeyValues, key: &str, raw: &str) -> Result<f64> {
    raw.trim()
        .parse()
        .map_err(|_| kv.error(format!("`{key}`: cannot parse `{raw}`")))
}

/// Applies simulator keys on top of `base`.
pub fn sim_config(mut kv: KeyValues, base: SimConfig) -> Result<SimConfig> {
    let mut c = base;
    if let Some(v) = kv.take("name")? {
        c.name = v;
    }
    macro_rules! field {
        ($key:literal, $slot:expr) => {
            if let Some(v) = kv.take($key)? {
                $slot = v;
            }
        };
    }
    field!("supply_frequency", c.supply_frequency);
    field!("fundamental_amplitude", c.fundamental_amplitude);
    field!("slip", c.slip);
    field!("noise_rms", c.noise_rms);
    field!("sample_rate", c.sample_rate);
    field!("duration", c.duration);
    field!("seed", c.seed);
    for (idx, v) in kv.take_prefixed("harmonic.") {
        let h = parse_index(&kv, "harmonic.", &idx)?;
        let amp = parse_f64(&kv, &format!("harmonic.{idx}"), &v)?;
        c.harmonic_amplitudes.insert(h, amp);
    }
    for (idx, v) in kv.take_prefixed("broken_bar.") {
        let k = parse_index(&kv, "broken_bar.", &idx)?;
        let key = format!("broken_bar.{idx}");
        let (lo, hi) = v
            .split_once(',')
            .ok_or_else(|| kv.error(format!("`{key}` expects `lower, upper`")))?;
        let pair = (parse_f64(&kv, &key, lo)?, parse_f64(&kv, &key, hi)?);
        c.broken_bar_amplitudes.insert(k, pair);
    }
    kv.finish()?;
    c.validate()?;
    Ok(c)
}

/// Renders a simulator config in the file grammar; parses back to the same value.
pub fn render_sim_config(c: &SimConfig) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "name = {}", c.name);
    let _ = writeln!(s, "supply_frequency = {}", c.supply_frequency);
    let _ = writeln!(s, "fundamental_amplitude = {}", c.fundamental_amplitude);
    let _ = writeln!(s, "slip = {}", c.slip);
    let _ = writeln!(s, "noise_rms = {}", c.noise_rms);
    let _ = writeln!(s, "sample_rate = {}", c.sample_rate);
    let _ = writeln!(s, "duration = {}", c.duration);
    let _ = writeln!(s, "seed = {}", c.seed);
    for (h, a) in &c.harmonic_amplitudes {
        let _ = writeln!(s, "harmonic.{h} = {a}");
    }
    for (k, (lo, hi)) in &c.broken_bar_amplitudes {
        let _ = writeln!(s, "broken_bar.{k} = {lo}, {hi}");
    }
    s
}
