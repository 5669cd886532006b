use std::fmt::Write as _;
use std::io::{IsTerminal, Write};
use std::path::{Path, PathBuf};

use mcsa_core::signatures::{
    bearing_fault_frequencies, eccentricity_frequencies, severity_from_sidebands,
    stator_fault_frequencies, DetectOptions, Side, TermUnits,
};
use mcsa_core::sim::{generate, preset, presets};
use mcsa_core::{
    broken_bar_frequencies, compute_spectrum, detect_sidebands, diagnose, find_fundamental,
    order_grid, sideband_power_fraction, total_harmonic_distortion, DiagnosisConfig, Normalization,
    RneMode, SimConfig, Thresholds, Verdict, WindowKind,
};

use crate::args::{
    AnalyzeArgs, DiagnoseArgs, FaultKind, GlobalOpts, RneModeArg, SignaturesArgs, SimulateArgs,
    WindowArg,
};
use crate::config::{self, KeyValues};
use crate::error::{CliError, Result};
use crate::recording::Recording;
use crate::report::{
    self, AnalyzeConfig, AnalyzeReport, CurvePoint, DiagnoseConfig, DiagnoseReport,
    FundamentalInfo, InputInfo, PeakInfo, SeverityInfo, SidebandInfo,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_FAULT: i32 = 2;
pub const EXIT_INDETERMINATE: i32 = 3;

const GREEN: &str = "32";
const RED: &str = "31";
const YELLOW: &str = "33";

pub fn color_enabled(is_terminal: bool) -> bool {
    is_terminal && std::env::var_os("MCSA_NO_COLOR").is_none()
}

pub fn paint(text: &str, code: &str, enabled: bool) -> String {
    if enabled {
        format!("\x1b[{code}m{text}\x1b[0m")
    } else {
        text.to_string()
    }
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    std::fs::write(path, contents).map_err(|e| CliError::io(path, e))
}

/// Sends the JSON report to `--output` (summary on stdout) or to stdout
/// (summary on stderr).
fn emit(output: Option<&Path>, json: &str, summary: &str) -> Result<()> {
    match output {
        Some(path) => {
            write_file(path, json)?;
            let mut out = std::io::stdout().lock();
            let _ = out.write_all(summary.as_bytes());
            let _ = writeln!(out, "report      {}", path.display());
        }
        None => {
            let _ = std::io::stderr().write_all(summary.as_bytes());
            let _ = std::io::stdout().write_all(json.as_bytes());
        }
    }
    Ok(())
}

fn summary_colors(output: Option<&Path>) -> bool {
    if output.is_some() {
        color_enabled(std::io::stdout().is_terminal())
    } else {
        color_enabled(std::io::stderr().is_terminal())
    }
}

fn side_csv(output: Option<&Path>, explicit: Option<&PathBuf>, suffix: &str) -> Option<PathBuf> {
    explicit
        .cloned()
        .or_else(|| output.map(|p| p.with_extension(suffix)))
}

fn window(w: WindowArg) -> (WindowKind, &'static str) {
    match w {
        WindowArg::Rect => (WindowKind::Rectangular, "rect"),
        WindowArg::Hann => (WindowKind::Hann, "hann"),
    }
}

fn load_signal(path: &Path) -> Result<(Recording, mcsa_core::Signal)> {
    let rec = Recording::read(path)?;
    let sig = rec.to_signal(&path.display().to_string())?;
    Ok((rec, sig))
}

pub fn analyze(global: &GlobalOpts, args: &AnalyzeArgs) -> Result<i32> {
    let motor = config::motor_params(KeyValues::from_sources(
        args.motor.config.as_deref(),
        &args.motor.overrides,
    )?)?;
    let (_, sig) = load_signal(&args.input)?;
    let (kind, window_name) = window(global.window);
    let sp = compute_spectrum(&sig, kind, Normalization::FundamentalUnit);

    let f = motor.supply_frequency;
    let band = (0.5 * f, (1.5 * f).min(sp.max_frequency()));
    let fund = find_fundamental(&sp, band)?;
    let pairs = broken_bar_frequencies(&motor, args.k_max)?;
    let options = DetectOptions {
        tolerance: args.tolerance,
        floor_db: args.floor_db,
    };
    let matches = detect_sidebands(&sp, fund.frequency, &pairs, options)?;
    let severity = severity_from_sidebands(&matches);
    let thd = total_harmonic_distortion(&sp, fund.frequency, args.max_harmonic)?;
    let in_range: Vec<f64> = pairs
        .iter()
        .flat_map(|p| [p.lower, p.upper])
        .filter(|&x| x <= sp.max_frequency())
        .collect();
    let sideband_fraction = sideband_power_fraction(&sp, &in_range)?;

    let report = AnalyzeReport {
        schema_version: report::SCHEMA_VERSION,
        kind: "analyze".into(),
        tool_version: report::TOOL_VERSION.into(),
        timestamp_unix: report::timestamp(global.timestamp),
        input: InputInfo::new(&args.input, sig.len(), sig.sample_rate()),
        config: AnalyzeConfig {
            motor,
            window: window_name.into(),
            k_max: args.k_max,
            tolerance_hz: args.tolerance,
            floor_db: args.floor_db,
            max_harmonic: args.max_harmonic,
        },
        fundamental: FundamentalInfo {
            frequency_hz: fund.frequency,
            magnitude: fund.magnitude,
        },
        peaks: sp
            .peaks(0.01, 20)
            .into_iter()
            .map(|p| PeakInfo {
                frequency_hz: p.frequency,
                magnitude: p.magnitude,
            })
            .collect(),
        sidebands: matches.iter().map(SidebandInfo::from).collect(),
        severity: SeverityInfo {
            verdict: severity.verdict,
            db_difference: severity.db_difference,
        },
        thd,
        sideband_power_fraction: sideband_fraction,
    };

    if let Some(path) = side_csv(
        global.output.as_deref(),
        args.spectrum_csv.as_ref(),
        "spectrum.csv",
    ) {
        let rows = sp
            .frequencies()
            .iter()
            .zip(sp.magnitudes())
            .map(|(f, m)| [*f, *m]);
        write_csv(&path, ["frequency_hz", "magnitude"], rows)?;
    }

    let color = summary_colors(global.output.as_deref());
    let mut s = String::new();
    let _ = writeln!(
        s,
        "input       {} ({} samples at {} Hz)",
        args.input.display(),
        sig.len(),
        sig.sample_rate()
    );
    let _ = writeln!(s, "fundamental {:.3} Hz", fund.frequency);
    for m in &matches {
        let side = match m.side {
            Side::Lower => "lower",
            Side::Upper => "upper",
        };
        let at = m
            .frequency
            .map(|f| format!("{f:.3} Hz"))
            .unwrap_or_else(|| "-".into());
        let state = if m.present { "present" } else { "absent" };
        let _ = writeln!(
            s,
            "sideband    k={} {side} {:.3} Hz -> {at} {:.2} dB {state}",
            m.k, m.predicted, m.level_db
        );
    }
    let verdict = serde_json::to_value(severity.verdict).unwrap_or_default();
    let verdict = verdict.as_str().unwrap_or("?");
    let code = if severity.verdict.is_fault() {
        RED
    } else {
        GREEN
    };
    let _ = writeln!(
        s,
        "severity    {} ({:.2} dB below fundamental)",
        paint(verdict, code, color),
        severity.db_difference
    );
    let _ = writeln!(s, "thd         {thd:.4}");
    let _ = writeln!(
        s,
        "sidebands   {:.1}% of spectral power",
        100.0 * sideband_fraction
    );
    emit(global.output.as_deref(), &report::to_json(&report), &s)?;

    Ok(if severity.verdict.is_fault() {
        EXIT_FAULT
    } else {
        EXIT_OK
    })
}

pub fn run_diagnose(global: &GlobalOpts, args: &DiagnoseArgs) -> Result<i32> {
    let thresholds = Thresholds::new(global.healthy_max, global.faulty_min)?;
    let grid = order_grid(global.grid_step)?;
    let mode = if global.complex_rne {
        RneMode::Complex
    } else {
        match global.rne_mode {
            RneModeArg::Magnitude => RneMode::Magnitude,
            RneModeArg::Complex => RneMode::Complex,
        }
    };
    let (_, a) = load_signal(&args.reference)?;
    let (_, b) = load_signal(&args.candidate)?;
    let r = diagnose(
        &a,
        &b,
        &DiagnosisConfig {
            grid,
            mode,
            thresholds,
        },
    )?;

    let curve: Vec<CurvePoint> = r
        .curve
        .points()
        .map(|(order, rne)| CurvePoint { order, rne })
        .collect();
    let report = DiagnoseReport {
        schema_version: report::SCHEMA_VERSION,
        kind: "diagnose".into(),
        tool_version: report::TOOL_VERSION.into(),
        timestamp_unix: report::timestamp(global.timestamp),
        reference: InputInfo::new(&args.reference, a.len(), a.sample_rate()),
        candidate: InputInfo::new(&args.candidate, b.len(), b.sample_rate()),
        config: DiagnoseConfig {
            grid_step: global.grid_step,
            rne_mode: mode,
            healthy_max: thresholds.healthy_max,
            faulty_min: thresholds.faulty_min,
        },
        curve,
        mean_rne: r.mean_rne,
        verdict: r.verdict,
    };

    if let Some(path) = side_csv(global.output.as_deref(), args.rne_csv.as_ref(), "rne.csv") {
        write_csv(
            &path,
            ["order", "rne"],
            r.curve.points().map(|(o, e)| [o, e]),
        )?;
    }

    let color = summary_colors(global.output.as_deref());
    let (label, code, exit) = match r.verdict {
        Verdict::Healthy => ("healthy", GREEN, EXIT_OK),
        Verdict::Faulty => ("faulty", RED, EXIT_FAULT),
        Verdict::Indeterminate => ("indeterminate", YELLOW, EXIT_INDETERMINATE),
    };
    let mut s = String::new();
    let _ = writeln!(s, "reference   {}", args.reference.display());
    let _ = writeln!(s, "candidate   {}", args.candidate.display());
    let _ = writeln!(
        s,
        "orders      {} ({} mode)",
        r.curve.len(),
        if mode == RneMode::Complex {
            "complex"
        } else {
            "magnitude"
        }
    );
    let _ = writeln!(s, "mean rne    {:.4}", r.mean_rne);
    let _ = writeln!(
        s,
        "verdict     {} (healthy < {}, faulty > {})",
        paint(label, code, color),
        thresholds.healthy_max,
        thresholds.faulty_min
    );
    emit(global.output.as_deref(), &report::to_json(&report), &s)?;
    Ok(exit)
}

fn sim_source(args: &SimulateArgs) -> Result<SimConfig> {
    if let Some(base) = preset(&args.source) {
        let mut kv = KeyValues::default();
        kv.apply_overrides(&args.overrides)?;
        return config::sim_config(kv, base);
    }
    let path = Path::new(&args.source);
    if path.is_file() {
        let kv = KeyValues::from_sources(Some(path), &args.overrides)?;
        return config::sim_config(kv, SimConfig::default());
    }
    Err(CliError::UnknownPreset {
        name: args.source.clone(),
        available: presets().into_keys().collect(),
    })
}

pub fn simulate(args: &SimulateArgs) -> Result<i32> {
    let mut cfg = sim_source(args)?;
    if let Some(seed) = args.seed {
        cfg.seed = seed;
    }
    let sig = generate(&cfg)?;
    Recording::from_signal(&sig).write(&args.output)?;
    let mut out = std::io::stdout().lock();
    let _ = writeln!(
        out,
        "# wrote {} samples to {}",
        sig.len(),
        args.output.display()
    );
    let _ = writeln!(out, "# seed {}", cfg.seed);
    let _ = out.write_all(config::render_sim_config(&cfg).as_bytes());
    Ok(EXIT_OK)
}

pub fn signatures(args: &SignaturesArgs) -> Result<i32> {
    let motor = config::motor_params(KeyValues::from_sources(
        args.motor.config.as_deref(),
        &args.motor.overrides,
    )?)?;
    let units = if args.raw_hz {
        TermUnits::Hertz
    } else {
        TermUnits::SupplyMultiples
    };
    let rows: Vec<(String, f64, bool)> = match args.fault {
        FaultKind::Brb => broken_bar_frequencies(&motor, args.k_max)?
            .into_iter()
            .flat_map(|p| {
                [
                    (format!("k={} lower", p.k), p.lower, p.lower_reflected),
                    (format!("k={} upper", p.k), p.upper, false),
                ]
            })
            .collect(),
        FaultKind::Eccentricity => {
            let freqs = eccentricity_frequencies(&motor, &args.n_ws, units)?;
            freqs
                .into_iter()
                .map(|p| (String::from("eccentricity"), p.frequency, p.reflected))
                .collect()
        }
        FaultKind::Stator => {
            let mut rows = Vec::new();
            let freqs = stator_fault_frequencies(&motor, &args.n, &args.k, units)?;
            let mut it = freqs.into_iter();
            for n in &args.n {
                for k in &args.k {
                    for sign in ["+", "-"] {
                        let p = it.next().expect("two entries per (n, k)");
                        rows.push((format!("n={n} {sign}k={k}"), p.frequency, p.reflected));
                    }
                }
            }
            rows
        }
        FaultKind::Bearing => {
            let (outer, inner) = bearing_fault_frequencies(&motor)?;
            vec![
                ("outer race".into(), outer, false),
                ("inner race".into(), inner, false),
            ]
        }
    };

    let mut out = std::io::stdout().lock();
    let _ = writeln!(out, "{:<16} {:>14}", "term", "frequency_hz");
    for (term, f, reflected) in &rows {
        let note = if *reflected {
            "  (folded from negative)"
        } else {
            ""
        };
        let _ = writeln!(out, "{term:<16} {f:>14.3}{note}");
    }
    if let Some(path) = &args.csv {
        let file = std::fs::File::create(path).map_err(|e| CliError::io(path, e))?;
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(file);
        let io = |e: csv::Error| CliError::io(path, e.into());
        w.write_record(["term", "frequency_hz", "reflected"])
            .map_err(io)?;
        for (term, f, reflected) in &rows {
            w.write_record([term.clone(), f.to_string(), reflected.to_string()])
                .map_err(io)?;
        }
        w.flush().map_err(|e| CliError::io(path, e))?;
    }
    Ok(EXIT_OK)
}

fn write_csv(path: &Path, header: [&str; 2], rows: impl Iterator<Item = [f64; 2]>) -> Result<()> {
    let file = std::fs::File::create(path).map_err(|e| CliError::io(path, e))?;
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(std::io::BufWriter::new(file));
    let io = |e: csv::Error| CliError::io(path, e.into());
    w.write_record(header).map_err(io)?;
    for [a, b] in rows {
        w.write_record([a.to_string(), b.to_string()]).map_err(io)?;
    }
    w.flush().map_err(|e| CliError::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn paint_wraps_only_when_enabled() {
        assert_eq!(paint("ok", GREEN, false), "ok");
        assert_eq!(paint("ok", GREEN, true), "\x1b[32mok\x1b[0m");
        assert!(!color_enabled(false));
    }

    #[test]
    fn side_csv_defaults_next_to_report() {
        let p = side_csv(Some(Path::new("out/report.json")), None, "rne.csv").unwrap();
        assert_eq!(p, PathBuf::from("out/report.rne.csv"));
        let explicit = PathBuf::from("x.csv");
        assert_eq!(side_csv(None, Some(&explicit), "rne.csv"), Some(explicit));
        assert_eq!(side_csv(None, None, "rne.csv"), None);
    }
}
