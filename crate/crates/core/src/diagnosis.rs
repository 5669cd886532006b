//! Relative-norm-error curves across fractional orders and the threshold verdict.
//!
//! For each order `a` both captures are transformed and compared with
//! `‖F_a y - F_a x‖ / ‖F_a x‖`, the first capture `x` being the reference.
//! The mean over the grid is then compared with two thresholds.
//!
//! Because the transform is unitary, the complex-valued error is the same at
//! every order. [`RneMode::Magnitude`] (the default) compares `|F_a x|` with
//! `|F_a y|` instead, which does vary with the order.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::frft::{FractionalOrder, FrftPlan};
use crate::signal::Signal;

/// Sample rates closer than this (relative) count as equal.
const SAMPLE_RATE_TOLERANCE: f64 = 1e-9;

pub const DEFAULT_GRID_STEP: f64 = 0.01;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RneMode {
    /// Compare transform magnitudes.
    #[default]
    Magnitude,
    /// Compare complex transform values.
    Complex,
}

fn squared_norms(pairs: impl Iterator<Item = (Complex64, Complex64)>) -> (f64, f64) {
    pairs.fold((0.0, 0.0), |(diff, refn), (x, y)| {
        (diff + (y - x).norm_sqr(), refn + x.norm_sqr())
    })
}

fn ratio(diff_sq: f64, ref_sq: f64) -> Result<f64> {
    if ref_sq == 0.0 {
        return Err(Error::ZeroReferenceNorm);
    }
    Ok((diff_sq / ref_sq).sqrt())
}

/// `‖candidate - reference‖ / ‖reference‖`.
pub fn relative_norm_error(reference: &[Complex64], candidate: &[Complex64]) -> Result<f64> {
    if reference.len() != candidate.len() {
        return Err(Error::LengthMismatch {
            left: reference.len(),
            right: candidate.len(),
        });
    }
    let (d, r) = squared_norms(reference.iter().copied().zip(candidate.iter().copied()));
    ratio(d, r)
}

fn magnitude_rne(reference: &[Complex64], candidate: &[Complex64]) -> Result<f64> {
    let (d, r) = squared_norms(
        reference
            .iter()
            .zip(candidate)
            .map(|(x, y)| (Complex64::new(x.norm(), 0.0), Complex64::new(y.norm(), 0.0))),
    );
    ratio(d, r)
}

/// Error per order on a grid running strictly upward from 0 to 1.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawCurve")]
pub struct RneCurve {
    orders: Vec<FractionalOrder>,
    errors: Vec<f64>,
}

#[derive(Deserialize)]
struct RawCurve {
    orders: Vec<FractionalOrder>,
    errors: Vec<f64>,
}

impl TryFrom<RawCurve> for RneCurve {
    type Error = Error;
    fn try_from(raw: RawCurve) -> Result<Self> {
        RneCurve::new(raw.orders, raw.errors)
    }
}

impl RneCurve {
    pub fn new(orders: Vec<FractionalOrder>, errors: Vec<f64>) -> Result<Self> {
        validate_grid(&orders)?;
        if orders.len() != errors.len() {
            return Err(Error::LengthMismatch {
                left: orders.len(),
                right: errors.len(),
            });
        }
        if let Some(e) = errors.iter().find(|e| !(e.is_finite() && **e >= 0.0)) {
            return Err(Error::InvalidGrid(format!(
                "error value {e} is not a finite non-negative number"
            )));
        }
        Ok(Self { orders, errors })
    }

    pub fn orders(&self) -> &[FractionalOrder] {
        &self.orders
    }

    pub fn errors(&self) -> &[f64] {
        &self.errors
    }

    pub fn len(&self) -> usize {
        self.orders.len()
    }

    pub fn is_empty(&self) -> bool {
        self.orders.is_empty()
    }

    /// `(order, error)` pairs.
    pub fn points(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.orders
            .iter()
            .map(|o| o.value())
            .zip(self.errors.iter().copied())
    }

    /// Smallest error among orders inside `[low, high]`.
    pub fn min_over(&self, low: f64, high: f64) -> Option<f64> {
        self.points()
            .filter(|(a, _)| (low..=high).contains(a))
            .map(|(_, e)| e)
            .reduce(f64::min)
    }
}

fn validate_grid(grid: &[FractionalOrder]) -> Result<()> {
    let (first, last) = match (grid.first(), grid.last()) {
        (Some(f), Some(l)) => (f.value(), l.value()),
        _ => return Err(Error::EmptyGrid),
    };
    if first != 0.0 {
        return Err(Error::InvalidGrid(format!(
            "first order is {first}, expected 0"
        )));
    }
    if last != 1.0 {
        return Err(Error::InvalidGrid(format!(
            "last order is {last}, expected 1"
        )));
    }
    if let Some(w) = grid.windows(2).find(|w| w[1].value() <= w[0].value()) {
        return Err(Error::InvalidGrid(format!(
            "{} is not above {}",
            w[1].value(),
            w[0].value()
        )));
    }
    Ok(())
}

/// Uniform grid `0, step, 2·step, …, 1`. `1/step` must be (near) an integer.
pub fn order_grid(step: f64) -> Result<Vec<FractionalOrder>> {
    if !(step.is_finite() && step > 0.0 && step <= 1.0) {
        return Err(Error::InvalidGrid(format!(
            "step {step} must lie in (0, 1]"
        )));
    }
    let intervals = (1.0 / step).round();
    if (intervals * step - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidGrid(format!(
            "step {step} does not divide [0, 1] evenly"
        )));
    }
    let intervals = intervals as usize;
    (0..=intervals)
        .map(|i| FractionalOrder::new(i as f64 / intervals as f64))
        .collect()
}

pub fn default_grid() -> Vec<FractionalOrder> {
    order_grid(DEFAULT_GRID_STEP).expect("default step divides [0, 1]")
}

fn check_pair(a: &Signal, b: &Signal) -> Result<()> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    let (fa, fb) = (a.sample_rate(), b.sample_rate());
    if (fa - fb).abs() > SAMPLE_RATE_TOLERANCE * fa.max(fb) {
        return Err(Error::SampleRateMismatch {
            left: fa,
            right: fb,
        });
    }
    Ok(())
}

/// RNE of `candidate` against `reference` at every order of `grid`.
pub fn rne_curve(
    reference: &Signal,
    candidate: &Signal,
    grid: &[FractionalOrder],
    mode: RneMode,
) -> Result<RneCurve> {
    check_pair(reference, candidate)?;
    validate_grid(grid)?;
    rne_curve_with_plan(
        &FrftPlan::new(reference.len())?,
        reference,
        candidate,
        grid,
        mode,
    )
}

/// [`rne_curve`] with a prebuilt plan; building the plan dominates the cost
/// at a few thousand samples, so reuse it across pairs of the same length.
pub fn rne_curve_with_plan(
    plan: &FrftPlan,
    reference: &Signal,
    candidate: &Signal,
    grid: &[FractionalOrder],
    mode: RneMode,
) -> Result<RneCurve> {
    check_pair(reference, candidate)?;
    validate_grid(grid)?;
    let mut images = plan.sweep_real(&[reference.samples(), candidate.samples()], grid)?;
    let cand = images.pop().expect("two inputs");
    let refs = images.pop().expect("two inputs");
    let errors = refs
        .par_iter()
        .zip(&cand)
        .map(|(x, y)| match mode {
            RneMode::Magnitude => magnitude_rne(x, y),
            RneMode::Complex => relative_norm_error(x, y),
        })
        .collect::<Result<Vec<f64>>>()?;
    RneCurve::new(grid.to_vec(), errors)
}

pub fn mean_rne(curve: &RneCurve) -> f64 {
    curve.errors.iter().sum::<f64>() / curve.errors.len() as f64
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Thresholds {
    /// Means strictly below this are healthy.
    pub healthy_max: f64,
    /// Means strictly above this are faulty.
    pub faulty_min: f64,
}

impl Default for Thresholds {
    fn default() -> Self {
        Self {
            healthy_max: 0.3,
            faulty_min: 0.5,
        }
    }
}

impl Thresholds {
    pub fn new(healthy_max: f64, faulty_min: f64) -> Result<Self> {
        let t = Self {
            healthy_max,
            faulty_min,
        };
        t.validate()?;
        Ok(t)
    }

    pub fn validate(&self) -> Result<()> {
        let ok = self.healthy_max.is_finite()
            && self.faulty_min.is_finite()
            && 0.0 <= self.healthy_max
            && self.healthy_max <= self.faulty_min;
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidThresholds {
                healthy_max: self.healthy_max,
                faulty_min: self.faulty_min,
            })
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Healthy,
    Faulty,
    /// Mean RNE falls between the two thresholds (or on one of them).
    Indeterminate,
}

pub fn classify(mean_rne: f64, thresholds: &Thresholds) -> Verdict {
    if mean_rne < thresholds.healthy_max {
        Verdict::Healthy
    } else if mean_rne > thresholds.faulty_min {
        Verdict::Faulty
    } else {
        Verdict::Indeterminate
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiagnosisConfig {
    pub grid: Vec<FractionalOrder>,
    pub mode: RneMode,
    pub thresholds: Thresholds,
}

impl Default for DiagnosisConfig {
    fn default() -> Self {
        Self {
            grid: default_grid(),
            mode: RneMode::default(),
            thresholds: Thresholds::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiagnosisReport {
    pub curve: RneCurve,
    pub mean_rne: f64,
    pub verdict: Verdict,
    pub thresholds: Thresholds,
    pub mode: RneMode,
    pub reference_label: String,
    pub candidate_label: String,
}

pub fn diagnose(
    reference: &Signal,
    candidate: &Signal,
    config: &DiagnosisConfig,
) -> Result<DiagnosisReport> {
    config.thresholds.validate()?;
    check_pair(reference, candidate)?;
    validate_grid(&config.grid)?;
    diagnose_with_plan(
        &FrftPlan::new(reference.len())?,
        reference,
        candidate,
        config,
    )
}

pub fn diagnose_with_plan(
    plan: &FrftPlan,
    reference: &Signal,
    candidate: &Signal,
    config: &DiagnosisConfig,
) -> Result<DiagnosisReport> {
    config.thresholds.validate()?;
    let curve = rne_curve_with_plan(plan, reference, candidate, &config.grid, config.mode)?;
    let mean = mean_rne(&curve);
    Ok(DiagnosisReport {
        verdict: classify(mean, &config.thresholds),
        mean_rne: mean,
        curve,
        thresholds: config.thresholds,
        mode: config.mode,
        reference_label: reference.label().to_string(),
        candidate_label: candidate.label().to_string(),
    })
}

/// Shift of `candidate` (0..=max_lag samples) that best lines it up with the
/// start of `reference`, by normalized cross-correlation over the overlap
/// `len - max_lag`. Nothing in the pipeline applies it implicitly.
pub fn alignment_lag(reference: &[f64], candidate: &[f64], max_lag: usize) -> Result<usize> {
    if reference.len() != candidate.len() {
        return Err(Error::LengthMismatch {
            left: reference.len(),
            right: candidate.len(),
        });
    }
    let n = reference.len();
    if max_lag + 2 > n {
        return Err(Error::InvalidParameter {
            name: "max_lag",
            reason: format!("{max_lag} leaves fewer than 2 overlapping samples out of {n}"),
        });
    }
    let overlap = n - max_lag;
    let head = &reference[..overlap];
    let head_norm = head.iter().map(|v| v * v).sum::<f64>().sqrt();
    if head_norm == 0.0 {
        return Err(Error::ZeroReferenceNorm);
    }
    let score = |lag: usize| {
        let w = &candidate[lag..lag + overlap];
        let dot: f64 = head.iter().zip(w).map(|(a, b)| a * b).sum();
        let norm = w.iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm == 0.0 {
            f64::NEG_INFINITY
        } else {
            dot / (head_norm * norm)
        }
    };
    Ok((0..=max_lag)
        .map(|lag| (lag, score(lag)))
        .fold((0, f64::NEG_INFINITY), |best, cur| {
            if cur.1 > best.1 {
                cur
            } else {
                best
            }
        })
        .0)
}
