//! Eigenpairs of a real symmetric tridiagonal matrix by Sturm bisection and
//! inverse iteration. Cost is O(n²) for the full spectrum, which is what makes
//! the FrFT basis affordable at recording lengths of a few thousand samples.

use rayon::prelude::*;

/// Eigenvectors whose eigenvalues sit closer than this (relative to the
/// matrix norm) are explicitly orthogonalized against each other.
const CLUSTER_GAP: f64 = 1e-5;
const INVERSE_ITERATIONS: usize = 3;

#[derive(Debug, Clone)]
pub(crate) struct SymTridiagonal {
    diag: Vec<f64>,
    off: Vec<f64>,
}

impl SymTridiagonal {
    pub(crate) fn new(diag: Vec<f64>, off: Vec<f64>) -> Self {
        assert!(!diag.is_empty());
        assert_eq!(off.len(), diag.len() - 1);
        Self { diag, off }
    }

    pub(crate) fn len(&self) -> usize {
        self.diag.len()
    }

    fn gershgorin(&self) -> (f64, f64) {
        let n = self.len();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            let r = if i > 0 { self.off[i - 1].abs() } else { 0.0 }
                + if i + 1 < n { self.off[i].abs() } else { 0.0 };
            lo = lo.min(self.diag[i] - r);
            hi = hi.max(self.diag[i] + r);
        }
        (lo, hi)
    }

    fn norm(&self) -> f64 {
        let (lo, hi) = self.gershgorin();
        lo.abs().max(hi.abs()).max(f64::MIN_POSITIVE)
    }

    fn pivmin(&self) -> f64 {
        let emax = self.off.iter().map(|e| e * e).fold(1.0_f64, f64::max);
        f64::MIN_POSITIVE * emax
    }

    /// Number of eigenvalues strictly below `x` (Sturm sequence).
    fn count_below(&self, x: f64, pivmin: f64) -> usize {
        let mut q = self.diag[0] - x;
        if q.abs() < pivmin {
            q = -pivmin;
        }
        let mut count = usize::from(q < 0.0);
        for i in 1..self.len() {
            q = self.diag[i] - x - self.off[i - 1] * self.off[i - 1] / q;
            if q.abs() < pivmin {
                q = -pivmin;
            }
            count += usize::from(q < 0.0);
        }
        count
    }

    /// The `j`-th smallest eigenvalue (0-based).
    fn eigenvalue(&self, j: usize, bounds: (f64, f64), pivmin: f64) -> f64 {
        let (mut lo, mut hi) = bounds;
        loop {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                return mid;
            }
            let tol = 2.0 * f64::EPSILON * lo.abs().max(hi.abs()) + pivmin;
            if hi - lo <= tol {
                return mid;
            }
            if self.count_below(mid, pivmin) > j {
                hi = mid;
            } else {
                lo = mid;
            }
        }
    }

    /// All eigenvalues in descending order.
    pub(crate) fn eigenvalues_desc(&self) -> Vec<f64> {
        let n = self.len();
        let (lo, hi) = self.gershgorin();
        let pad = 4.0 * f64::EPSILON * self.norm();
        let bounds = (lo - pad, hi + pad);
        let pivmin = self.pivmin();
        (0..n)
            .into_par_iter()
            .map(|i| self.eigenvalue(n - 1 - i, bounds, pivmin))
            .collect()
    }

    /// Eigenpairs with eigenvalues in descending order; vectors are unit norm.
    pub(crate) fn eigenpairs_desc(&self) -> (Vec<f64>, Vec<Vec<f64>>) {
        let n = self.len();
        let mut values = self.eigenvalues_desc();
        let norm = self.norm();

        // Separate exact or near-exact ties so the shifted systems differ.
        let min_sep = 10.0 * f64::EPSILON * norm;
        for i in 1..n {
            if values[i - 1] - values[i] < min_sep {
                values[i] = values[i - 1] - min_sep;
            }
        }

        let mut clusters = Vec::new();
        let mut start = 0;
        for i in 1..=n {
            if i == n || values[i - 1] - values[i] > CLUSTER_GAP * norm {
                clusters.push(start..i);
                start = i;
            }
        }

        let vectors: Vec<Vec<f64>> = clusters
            .into_par_iter()
            .flat_map_iter(|range| {
                let mut done: Vec<Vec<f64>> = Vec::with_capacity(range.len());
                for j in range {
                    let v = self.inverse_iteration(values[j], j, &done, norm);
                    done.push(v);
                }
                done
            })
            .collect();
        (values, vectors)
    }

    fn inverse_iteration(
        &self,
        lambda: f64,
        seed: usize,
        against: &[Vec<f64>],
        norm: f64,
    ) -> Vec<f64> {
        let n = self.len();
        let lu = ShiftedLu::factor(self, lambda, norm);
        let mut x: Vec<f64> = (0..n).map(|i| start_entry(i, seed)).collect();
        normalize(&mut x);
        for _ in 0..INVERSE_ITERATIONS {
            orthogonalize(&mut x, against);
            lu.solve(&mut x);
            orthogonalize(&mut x, against);
            if !normalize(&mut x) {
                x = (0..n).map(|i| start_entry(i, seed + 7919)).collect();
                normalize(&mut x);
            }
        }
        // A second pass keeps cluster members orthogonal to rounding level.
        if !against.is_empty() {
            orthogonalize(&mut x, against);
            normalize(&mut x);
        }
        x
    }
}

fn start_entry(i: usize, seed: usize) -> f64 {
    const PHI: f64 = 0.618_033_988_749_894_9;
    ((i + 1) as f64 * PHI + (seed + 1) as f64 * std::f64::consts::SQRT_2).fract() - 0.5
}

fn normalize(x: &mut [f64]) -> bool {
    let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    if !(norm.is_finite() && norm > 0.0) {
        return false;
    }
    x.iter_mut().for_each(|v| *v /= norm);
    true
}

fn orthogonalize(x: &mut [f64], against: &[Vec<f64>]) {
    for q in against {
        let dot: f64 = x.iter().zip(q).map(|(a, b)| a * b).sum();
        x.iter_mut().zip(q).for_each(|(a, b)| *a -= dot * b);
    }
}

/// LU factorization with partial pivoting of `T - λI`.
struct ShiftedLu {
    u0: Vec<f64>,
    u1: Vec<f64>,
    u2: Vec<f64>,
    mult: Vec<f64>,
    swapped: Vec<bool>,
}

impl ShiftedLu {
    fn factor(t: &SymTridiagonal, lambda: f64, norm: f64) -> Self {
        let n = t.len();
        let mut u0: Vec<f64> = t.diag.iter().map(|d| d - lambda).collect();
        let mut u1 = t.off.clone();
        u1.push(0.0);
        let mut u2 = vec![0.0; n];
        let mut mult = vec![0.0; n.saturating_sub(1)];
        let mut swapped = vec![false; n.saturating_sub(1)];

        for i in 0..n.saturating_sub(1) {
            let below = t.off[i];
            if u0[i].abs() >= below.abs() {
                let m = if u0[i] != 0.0 { below / u0[i] } else { 0.0 };
                mult[i] = m;
                u0[i + 1] -= m * u1[i];
                if i + 2 < n {
                    u1[i + 1] -= m * u2[i];
                }
            } else {
                let m = u0[i] / below;
                mult[i] = m;
                swapped[i] = true;
                let (r0, r1, r2) = (below, u0[i + 1], if i + 2 < n { u1[i + 1] } else { 0.0 });
                let (s1, s2) = (u1[i], u2[i]);
                u0[i] = r0;
                u1[i] = r1;
                u2[i] = r2;
                u0[i + 1] = s1 - m * r1;
                if i + 2 < n {
                    u1[i + 1] = s2 - m * r2;
                }
            }
        }

        let tiny = f64::EPSILON * norm;
        for p in &mut u0 {
            if p.abs() < tiny {
                *p = if *p < 0.0 { -tiny } else { tiny };
            }
        }
        Self {
            u0,
            u1,
            u2,
            mult,
            swapped,
        }
    }

    fn solve(&self, b: &mut [f64]) {
        let n = b.len();
        for i in 0..n.saturating_sub(1) {
            if self.swapped[i] {
                b.swap(i, i + 1);
            }
            b[i + 1] -= self.mult[i] * b[i];
        }
        for i in (0..n).rev() {
            let mut acc = b[i];
            if i + 1 < n {
                acc -= self.u1[i] * b[i + 1];
            }
            if i + 2 < n {
                acc -= self.u2[i] * b[i + 2];
            }
            b[i] = acc / self.u0[i];
        }
        // Rescale to dodge overflow when λ is an eigenvalue to full precision.
        let big = b.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        if big > 1e100 {
            b.iter_mut().for_each(|v| *v /= big);
        }
    }
}
