//! Discrete fractional Fourier transform.
//!
//! The transform of order `a` is the `a`-th power of the centered unitary DFT,
//! taken through the Hermite-Gauss-like eigenbasis in [`basis`]:
//!
//! ```text
//! F_a = Σ_k exp(-iπ a k / 2) · v_k v_kᵀ
//! ```
//!
//! This is exactly unitary, index-additive (`F_a F_b = F_{a+b}`), equal to the
//! identity at `a = 0`, the centered DFT at `a = 1` and index reversal at
//! `a = ±2`, and it approaches the continuous kernel in [`kernel`] as `N`
//! grows. Samples sit on the centered grid `x_n = (n - (N-1)/2) / √N`.
//!
//! [`FrftPlan`] caches the eigenbasis; reuse it when transforming several
//! signals of the same length or sweeping many orders.

mod basis;
pub mod kernel;
mod tridiag;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::signal::Signal;

/// Orders within this distance of 0 or ±2 (mod 4) are snapped to the exact
/// identity or index reversal.
pub const DEGENERATE_ORDER_GUARD: f64 = 1e-6;

/// Fractional order `a`; the rotation angle is `a·π/2`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct FractionalOrder(f64);

impl FractionalOrder {
    pub const ZERO: FractionalOrder = FractionalOrder(0.0);
    pub const ONE: FractionalOrder = FractionalOrder(1.0);

    pub fn new(a: f64) -> Result<Self> {
        if a.is_finite() && (-2.0..=2.0).contains(&a) {
            Ok(Self(a))
        } else {
            Err(Error::InvalidOrder(a))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn angle(self) -> f64 {
        self.0 * PI / 2.0
    }

    fn reduced(self) -> f64 {
        self.0.rem_euclid(4.0)
    }

    pub fn is_identity(self) -> bool {
        let r = self.reduced();
        r.min(4.0 - r) < DEGENERATE_ORDER_GUARD
    }

    pub fn is_parity(self) -> bool {
        (self.reduced() - 2.0).abs() < DEGENERATE_ORDER_GUARD
    }

    /// `sin α` vanishes: the continuous kernel is a delta.
    pub fn is_degenerate(self) -> bool {
        self.is_identity() || self.is_parity()
    }

    /// Eigenvalue `exp(-iπ a k / 2)` for Hermite index `k`.
    fn eigenphase(self, k: usize) -> Complex64 {
        let r = (self.0 * k as f64).rem_euclid(4.0);
        Complex64::from_polar(1.0, -PI / 2.0 * r)
    }
}

impl TryFrom<f64> for FractionalOrder {
    type Error = Error;
    fn try_from(a: f64) -> Result<Self> {
        Self::new(a)
    }
}

impl From<FractionalOrder> for f64 {
    fn from(o: FractionalOrder) -> f64 {
        o.0
    }
}

/// Fractional-domain samples for one order.
#[derive(Debug, Clone, PartialEq)]
pub struct FrftResult {
    pub order: FractionalOrder,
    pub values: Vec<Complex64>,
    pub sample_rate: f64,
}

impl FrftResult {
    pub fn magnitudes(&self) -> Vec<f64> {
        self.values.iter().map(|v| v.norm()).collect()
    }

    /// Dimensionless centered coordinate `ξ_m = (m - (N-1)/2) / √N`.
    pub fn fractional_axis(&self) -> Vec<f64> {
        let n = self.values.len() as f64;
        let c = (n - 1.0) / 2.0;
        (0..self.values.len())
            .map(|m| (m as f64 - c) / n.sqrt())
            .collect()
    }

    /// Hz reading of the axis, `(m - (N-1)/2)·fs/N`; exact at order 1.
    pub fn frequency_axis(&self) -> Vec<f64> {
        let n = self.values.len() as f64;
        let c = (n - 1.0) / 2.0;
        (0..self.values.len())
            .map(|m| (m as f64 - c) * self.sample_rate / n)
            .collect()
    }
}

/// Dense `N×N` transform matrix for one order, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct FrftKernelMatrix {
    order: FractionalOrder,
    dim: usize,
    entries: Vec<Complex64>,
}

impl FrftKernelMatrix {
    pub fn order(&self) -> FractionalOrder {
        self.order
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.entries[row * self.dim + col]
    }

    pub fn row(&self, row: usize) -> &[Complex64] {
        &self.entries[row * self.dim..(row + 1) * self.dim]
    }

    /// Plain O(N²) matrix-vector product.
    pub fn apply(&self, input: &[Complex64]) -> Result<Vec<Complex64>> {
        if input.len() != self.dim {
            return Err(Error::LengthMismatch {
                left: self.dim,
                right: input.len(),
            });
        }
        Ok((0..self.dim)
            .map(|m| self.row(m).iter().zip(input).map(|(k, x)| k * x).sum())
            .collect())
    }

    /// Matrix product, used to check index additivity.
    pub fn compose(&self, other: &FrftKernelMatrix) -> Result<Vec<Complex64>> {
        if other.dim != self.dim {
            return Err(Error::LengthMismatch {
                left: self.dim,
                right: other.dim,
            });
        }
        let n = self.dim;
        let mut out = vec![Complex64::new(0.0, 0.0); n * n];
        out.par_chunks_mut(n).enumerate().for_each(|(i, row)| {
            for k in 0..n {
                let a = self.entries[i * n + k];
                for (j, slot) in row.iter_mut().enumerate() {
                    *slot += a * other.entries[k * n + j];
                }
            }
        });
        Ok(out)
    }

    fn identity(order: FractionalOrder, n: usize) -> Self {
        let mut entries = vec![Complex64::new(0.0, 0.0); n * n];
        for i in 0..n {
            entries[i * n + i] = Complex64::new(1.0, 0.0);
        }
        Self {
            order,
            dim: n,
            entries,
        }
    }

    fn parity(order: FractionalOrder, n: usize) -> Self {
        let mut entries = vec![Complex64::new(0.0, 0.0); n * n];
        for i in 0..n {
            entries[i * n + (n - 1 - i)] = Complex64::new(1.0, 0.0);
        }
        Self {
            order,
            dim: n,
            entries,
        }
    }
}

/// Cached eigenbasis for transforms of length `n`.
#[derive(Debug, Clone)]
pub struct FrftPlan {
    basis: DMatrix<f64>,
}

impl FrftPlan {
    pub fn new(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::DimensionTooSmall(n));
        }
        Ok(Self {
            basis: basis::hermite_basis(n),
        })
    }

    pub fn len(&self) -> usize {
        self.basis.nrows()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    fn check_len(&self, got: usize) -> Result<()> {
        if got == self.len() {
            Ok(())
        } else {
            Err(Error::LengthMismatch {
                left: self.len(),
                right: got,
            })
        }
    }

    /// Dense kernel `V·diag(λ^a)·Vᵀ`. O(N³); meant for N up to a few hundred.
    pub fn kernel(&self, order: FractionalOrder) -> FrftKernelMatrix {
        let n = self.len();
        if order.is_identity() {
            return FrftKernelMatrix::identity(order, n);
        }
        if order.is_parity() {
            return FrftKernelMatrix::parity(order, n);
        }
        let phases: Vec<Complex64> = (0..n).map(|k| order.eigenphase(k)).collect();
        let mut re_scaled = self.basis.clone();
        let mut im_scaled = self.basis.clone();
        for (k, p) in phases.iter().enumerate() {
            re_scaled.column_mut(k).scale_mut(p.re);
            im_scaled.column_mut(k).scale_mut(p.im);
        }
        let vt = self.basis.transpose();
        let re = re_scaled * &vt;
        let im = im_scaled * &vt;
        let entries = (0..n * n)
            .map(|idx| {
                let (r, c) = (idx / n, idx % n);
                Complex64::new(re[(r, c)], im[(r, c)])
            })
            .collect();
        FrftKernelMatrix {
            order,
            dim: n,
            entries,
        }
    }

    /// Transform of a complex sequence via the factored form `V·(λ^a ⊙ Vᵀx)`.
    pub fn transform(&self, input: &[Complex64], order: FractionalOrder) -> Result<Vec<Complex64>> {
        self.check_len(input.len())?;
        if let Some(exact) = degenerate(input, order) {
            return Ok(exact);
        }
        let n = self.len();
        let re = nalgebra::DVector::from_iterator(n, input.iter().map(|c| c.re));
        let im = nalgebra::DVector::from_iterator(n, input.iter().map(|c| c.im));
        let pr = self.basis.tr_mul(&re);
        let pi = self.basis.tr_mul(&im);
        let mut yr = nalgebra::DVector::zeros(n);
        let mut yi = nalgebra::DVector::zeros(n);
        for k in 0..n {
            let p = Complex64::new(pr[k], pi[k]) * order.eigenphase(k);
            yr[k] = p.re;
            yi[k] = p.im;
        }
        let or = &self.basis * yr;
        let oi = &self.basis * yi;
        Ok(or
            .iter()
            .zip(oi.iter())
            .map(|(&r, &i)| Complex64::new(r, i))
            .collect())
    }

    pub fn transform_real(&self, input: &[f64], order: FractionalOrder) -> Result<Vec<Complex64>> {
        Ok(self
            .sweep_real(&[input], &[order])?
            .pop()
            .and_then(|mut v| v.pop())
            .expect("one input, one order"))
    }

    /// Transforms every real input at every order with one matrix product.
    /// Output is indexed `[input][order]`.
    pub fn sweep_real(
        &self,
        inputs: &[&[f64]],
        orders: &[FractionalOrder],
    ) -> Result<Vec<Vec<Vec<Complex64>>>> {
        for x in inputs {
            self.check_len(x.len())?;
        }
        let n = self.len();
        let m = orders.len();
        if inputs.is_empty() || m == 0 {
            return Ok(vec![Vec::new(); inputs.len()]);
        }

        // Columns: for each input, for each order, (real, imag) of λ^a ⊙ Vᵀx.
        let mut coeffs = DMatrix::<f64>::zeros(n, 2 * m * inputs.len());
        for (s, x) in inputs.iter().enumerate() {
            let proj = self.basis.tr_mul(&nalgebra::DVector::from_column_slice(x));
            for (j, order) in orders.iter().enumerate() {
                let col = 2 * (s * m + j);
                for k in 0..n {
                    let p = order.eigenphase(k) * proj[k];
                    coeffs[(k, col)] = p.re;
                    coeffs[(k, col + 1)] = p.im;
                }
            }
        }
        let out = &self.basis * coeffs;

        Ok(inputs
            .iter()
            .enumerate()
            .map(|(s, x)| {
                orders
                    .iter()
                    .enumerate()
                    .map(|(j, &order)| {
                        if order.is_degenerate() {
                            let as_complex: Vec<Complex64> =
                                x.iter().map(|&v| Complex64::new(v, 0.0)).collect();
                            return degenerate(&as_complex, order).expect("degenerate order");
                        }
                        let col = 2 * (s * m + j);
                        (0..n)
                            .map(|i| Complex64::new(out[(i, col)], out[(i, col + 1)]))
                            .collect()
                    })
                    .collect()
            })
            .collect())
    }
}

fn degenerate(input: &[Complex64], order: FractionalOrder) -> Option<Vec<Complex64>> {
    if order.is_identity() {
        Some(input.to_vec())
    } else if order.is_parity() {
        Some(input.iter().rev().copied().collect())
    } else {
        None
    }
}

/// Dense transform matrix of order `order` and size `n`.
pub fn build_kernel(order: FractionalOrder, n: usize) -> Result<FrftKernelMatrix> {
    if n < 2 {
        return Err(Error::DimensionTooSmall(n));
    }
    if order.is_identity() {
        return Ok(FrftKernelMatrix::identity(order, n));
    }
    if order.is_parity() {
        return Ok(FrftKernelMatrix::parity(order, n));
    }
    Ok(FrftPlan::new(n)?.kernel(order))
}

pub fn frft(signal: &Signal, order: FractionalOrder) -> Result<FrftResult> {
    let input: Vec<Complex64> = signal
        .samples()
        .iter()
        .map(|&v| Complex64::new(v, 0.0))
        .collect();
    let values = match degenerate(&input, order) {
        Some(v) => v,
        None => FrftPlan::new(signal.len())?.transform(&input, order)?,
    };
    Ok(FrftResult {
        order,
        values,
        sample_rate: signal.sample_rate(),
    })
}

/// One result per order, in the given order. Builds the eigenbasis once.
pub fn frft_sweep(signal: &Signal, orders: &[FractionalOrder]) -> Result<Vec<FrftResult>> {
    if orders.is_empty() {
        return Err(Error::EmptyGrid);
    }
    let plan = FrftPlan::new(signal.len())?;
    let mut out = plan.sweep_real(&[signal.samples()], orders)?;
    Ok(out
        .pop()
        .unwrap_or_default()
        .into_iter()
        .zip(orders)
        .map(|(values, &order)| FrftResult {
            order,
            values,
            sample_rate: signal.sample_rate(),
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn order(a: f64) -> FractionalOrder {
        FractionalOrder::new(a).unwrap()
    }

    fn signal(n: usize) -> Signal {
        let samples = (0..n)
            .map(|i| ((i * 7919 % 113) as f64 / 56.5) - 1.0)
            .collect();
        Signal::new(samples, 100.0, "s").unwrap()
    }

    fn rel_l2(a: &[Complex64], b: &[Complex64]) -> f64 {
        let num: f64 = a.iter().zip(b).map(|(x, y)| (x - y).norm_sqr()).sum();
        let den: f64 = b.iter().map(|y| y.norm_sqr()).sum();
        (num / den).sqrt()
    }

    #[test]
    fn order_validation() {
        assert!(FractionalOrder::new(2.0).is_ok());
        assert!(FractionalOrder::new(-2.0).is_ok());
        assert_eq!(FractionalOrder::new(2.5), Err(Error::InvalidOrder(2.5)));
        assert!(FractionalOrder::new(f64::NAN).is_err());
        assert!((order(1.0).angle() - PI / 2.0).abs() < 1e-15);
        assert!(order(4e-7).is_identity());
        assert!(order(-4e-7).is_identity());
        assert!(order(2.0 - 1e-7).is_parity());
        assert!(order(-2.0).is_parity());
        assert!(!order(1e-3).is_degenerate());
    }

    #[test]
    fn identity_and_parity_kernels_are_exact() {
        let k = build_kernel(order(0.0), 8).unwrap();
        for i in 0..8 {
            for j in 0..8 {
                let want = if i == j { 1.0 } else { 0.0 };
                assert_eq!(k.get(i, j), Complex64::new(want, 0.0));
            }
        }
        for a in [2.0, -2.0] {
            let k = build_kernel(order(a), 5).unwrap();
            for i in 0..5 {
                for j in 0..5 {
                    let want = if i + j == 4 { 1.0 } else { 0.0 };
                    assert_eq!(k.get(i, j), Complex64::new(want, 0.0));
                }
            }
        }
        assert_eq!(
            build_kernel(order(0.5), 1),
            Err(Error::DimensionTooSmall(1))
        );
    }

    #[test]
    fn order_zero_returns_input_exactly() {
        let s = signal(33);
        let r = frft(&s, order(0.0)).unwrap();
        for (v, x) in r.values.iter().zip(s.samples()) {
            assert_eq!(*v, Complex64::new(*x, 0.0));
        }
    }

    #[test]
    fn production_path_matches_dense_kernel() {
        for n in [2, 3, 16, 45, 64] {
            let s = signal(n);
            let plan = FrftPlan::new(n).unwrap();
            let x: Vec<Complex64> = s
                .samples()
                .iter()
                .map(|&v| Complex64::new(v, 0.0))
                .collect();
            for a in [0.1, 0.5, 0.97, 1.0, 1.5, -0.3] {
                let dense = plan.kernel(order(a)).apply(&x).unwrap();
                let fast = plan.transform(&x, order(a)).unwrap();
                let swept = plan.transform_real(s.samples(), order(a)).unwrap();
                assert!(rel_l2(&fast, &dense) < 1e-12);
                assert!(rel_l2(&swept, &dense) < 1e-12);
            }
        }
    }

    #[test]
    fn sweep_matches_single_calls() {
        let s = signal(40);
        let orders: Vec<_> = [0.0, 0.85, 0.9, 0.95, 1.0]
            .iter()
            .map(|&a| order(a))
            .collect();
        let sweep = frft_sweep(&s, &orders).unwrap();
        assert_eq!(sweep.len(), 5);
        for (r, &o) in sweep.iter().zip(&orders) {
            let single = frft(&s, o).unwrap();
            assert_eq!(r.order, o);
            assert!(rel_l2(&r.values, &single.values) < 1e-12);
        }
        assert_eq!(sweep[0].values, frft(&s, order(0.0)).unwrap().values);

        let dup = frft_sweep(&s, &[order(0.5), order(0.5)]).unwrap();
        assert_eq!(dup[0].values, dup[1].values);
        assert_eq!(frft_sweep(&s, &[]), Err(Error::EmptyGrid));
    }

    #[test]
    fn length_checks() {
        let plan = FrftPlan::new(8).unwrap();
        assert!(matches!(
            plan.transform_real(&[1.0; 7], order(0.5)),
            Err(Error::LengthMismatch { left: 8, right: 7 })
        ));
    }
}
