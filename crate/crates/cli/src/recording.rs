//! `time_s,current_a` recordings.

use std::io::{Read, Write};
use std::path::Path;

use mcsa_core::Signal;

use crate::error::{CliError, Result};

pub const HEADER: [&str; 2] = ["time_s", "current_a"];

/// Relative tolerance on the sample spacing.
const SPACING_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
pub struct Recording {
    pub times: Vec<f64>,
    pub currents: Vec<f64>,
}

impl Recording {
    pub fn from_signal(signal: &Signal) -> Self {
        let fs = signal.sample_rate();
        Self {
            times: (0..signal.len()).map(|i| i as f64 / fs).collect(),
            currents: signal.samples().to_vec(),
        }
    }

    /// Sample rate from the mean spacing; snapped to an integer when within 1e-9.
    pub fn sample_rate(&self) -> f64 {
        let n = self.times.len();
        let dt = (self.times[n - 1] - self.times[0]) / (n - 1) as f64;
        let fs = 1.0 / dt;
        let rounded = fs.round();
        if rounded > 0.0 && (fs - rounded).abs() <= 1e-9 * fs {
            rounded
        } else {
            fs
        }
    }

    pub fn to_signal(&self, label: &str) -> Result<Signal> {
        Ok(Signal::new(
            self.currents.clone(),
            self.sample_rate(),
            label,
        )?)
    }

    pub fn parse(reader: impl Read, origin: &Path) -> Result<Self> {
        let fail = |message: String| CliError::Recording {
            path: origin.to_path_buf(),
            message,
        };
        let mut rdr = csv::ReaderBuilder::new()
            .has_headers(true)
            .from_reader(reader);
        let header = rdr.headers().map_err(|e| fail(e.to_string()))?.clone();
        if header.iter().collect::<Vec<_>>() != HEADER {
            return Err(fail(format!(
                "header must be `{}`, found `{}`",
                HEADER.join(","),
                header.iter().collect::<Vec<_>>().join(",")
            )));
        }
        let mut times = Vec::new();
        let mut currents = Vec::new();
        for (i, row) in rdr.records().enumerate() {
            let line = i + 2;
            let row = row.map_err(|e| fail(format!("line {line}: {e}")))?;
            let field = |j: usize| -> Result<f64> {
                let raw = row.get(j).unwrap_or("");
                let v: f64 = raw
                    .trim()
                    .parse()
                    .map_err(|_| fail(format!("line {line}: `{raw}` is not a number")))?;
                if v.is_finite() {
                    Ok(v)
                } else {
                    Err(fail(format!("line {line}: `{raw}` is not finite")))
                }
            };
            times.push(field(0)?);
            currents.push(field(1)?);
        }
        if times.len() < 2 {
            return Err(fail(format!(
                "recording has {} data row{}; at least 2 are required",
                times.len(),
                if times.len() == 1 { "" } else { "s" }
            )));
        }
        let n = times.len();
        let dt = (times[n - 1] - times[0]) / (n - 1) as f64;
        if dt.is_nan() || dt <= 0.0 {
            return Err(fail("time_s must increase".into()));
        }
        for (i, w) in times.windows(2).enumerate() {
            let step = w[1] - w[0];
            if step <= 0.0 {
                return Err(fail(format!("line {}: time_s does not increase", i + 3)));
            }
            if (step - dt).abs() > SPACING_TOLERANCE * dt {
                return Err(fail(format!(
                    "line {}: sample spacing {step} s departs from the mean {dt} s",
                    i + 3
                )));
            }
        }
        Ok(Self { times, currents })
    }

    pub fn read(path: &Path) -> Result<Self> {
        let file = std::fs::File::open(path).map_err(|e| CliError::io(path, e))?;
        Self::parse(std::io::BufReader::new(file), path)
    }

    /// Shortest round-trip decimal form, LF line endings.
    pub fn write_to(&self, writer: impl Write) -> std::io::Result<()> {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(writer);
        w.write_record(HEADER)?;
        let mut t = String::new();
        let mut c = String::new();
        for (time, current) in self.times.iter().zip(&self.currents) {
            use std::fmt::Write as _;
            t.clear();
            c.clear();
            let _ = write!(t, "{time}");
            let _ = write!(c, "{current}");
            w.write_record([t.as_str(), c.as_str()])?;
        }
        w.flush()
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        let file = std::fs::File::create(path).map_err(|e| CliError::io(path, e))?;
        self.write_to(std::io::BufWriter::new(file))
            .map_err(|e| CliError::io(path, e))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn parse(text: &str) -> Result<Recording> {
        Recording::parse(text.as_bytes(), Path::new("mem.csv"))
    }

    #[test]
    fn reads_lf_and_crlf() {
        let a = parse("time_s,current_a\n0,1.5\n0.001,-2\n0.002,3e-3\n").unwrap();
        let b = parse("time_s,current_a\r\n0,1.5\r\n0.001,-2\r\n0.002,3e-3\r\n").unwrap();
        assert_eq!(a, b);
        assert_eq!(a.sample_rate(), 1000.0);
        assert_eq!(a.currents, vec![1.5, -2.0, 0.003]);
    }

    #[test]
    fn rejects_bad_input() {
        let cases = [
            ("time,current\n0,1\n1,2\n", "header must be"),
            ("time_s,current_a\n0,1\n", "1 data row;"),
            ("time_s,current_a\n", "0 data rows"),
            (
                "time_s,current_a\n0,1\n0.1,x\n",
                "line 3: `x` is not a number",
            ),
            ("time_s,current_a\n0,1\n0.1,NaN\n", "not finite"),
            ("time_s,current_a\n0,1\n0.1,1\n0.3,1\n", "spacing"),
            ("time_s,current_a\n0.2,1\n0.1,1\n", "must increase"),
            ("time_s,current_a\n0,1\n0.1\n", "line 3"),
        ];
        for (text, needle) in cases {
            let err = parse(text).unwrap_err().to_string();
            assert!(err.contains(needle), "{text:?}: {err}");
        }
    }

    #[test]
    fn sample_rate_snaps_to_integer() {
        let sig = Signal::new(vec![0.0; 4000], 250.0, "").unwrap();
        assert_eq!(Recording::from_signal(&sig).sample_rate(), 250.0);
        let r = parse("time_s,current_a\n0,0\n0.3,0\n0.6,0\n").unwrap();
        assert!((r.sample_rate() - 1.0 / 0.3).abs() < 1e-12);
    }

    proptest! {
        #[test]
        fn write_parse_write_is_byte_identical(
            currents in prop::collection::vec(-1e6f64..1e6, 2..200),
            fs in prop_oneof![Just(250.0), Just(1000.0), Just(999.0), 1.0f64..5000.0],
        ) {
            let sig = Signal::new(currents, fs, "").unwrap();
            let rec = Recording::from_signal(&sig);
            let mut first = Vec::new();
            rec.write_to(&mut first).unwrap();
            let back = parse(std::str::from_utf8(&first).unwrap()).unwrap();
            prop_assert_eq!(&back, &rec);
            let mut second = Vec::new();
            back.write_to(&mut second).unwrap();
            prop_assert_eq!(first, second);
        }
    }
}
