//! Fixtures shared by the benchmarks under `benches/`.

use mcsa_core::sim::preset;
use mcsa_core::{generate, Signal, SimConfig};

/// Simulated capture from a named preset, shortened to `duration` seconds.
pub fn capture(name: &str, duration: f64) -> Signal {
    let mut cfg: SimConfig = preset(name).unwrap_or_else(|| panic!("unknown preset {name}"));
    cfg.duration = duration;
    generate(&cfg).expect("preset generates")
}
