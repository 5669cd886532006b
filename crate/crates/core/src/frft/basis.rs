//! Hermite-Gauss-like eigenbasis of the centered unitary DFT.
//!
//! The centered DFT `F[m, n] = N^{-1/2} exp(-2πi (m-c)(n-c)/N)`, `c = (N-1)/2`,
//! commutes with the symmetric tridiagonal matrix
//!
//! ```text
//! T[n, n]   = cos(2π (n - c) / N)
//! T[n, n+1] = sin²(π (n + 1) / N)
//! ```
//!
//! All off-diagonals are positive, so the eigenvalues are simple and the
//! eigenvector of the k-th largest eigenvalue has exactly k sign changes,
//! the discrete analogue of the k-th Hermite-Gauss function. `F` acts on it
//! as `(-i)^k`. `T` is persymmetric, so the problem splits into an even and
//! an odd half that are solved separately.

use nalgebra::DMatrix;

use super::tridiag::SymTridiagonal;

/// Commuting matrix of the centered DFT of size `n`.
pub(crate) fn commuting_matrix(n: usize) -> (Vec<f64>, Vec<f64>) {
    let c = (n as f64 - 1.0) / 2.0;
    let nf = n as f64;
    let diag = (0..n)
        .map(|i| (2.0 * std::f64::consts::PI * (i as f64 - c) / nf).cos())
        .collect();
    let off = (0..n.saturating_sub(1))
        .map(|i| (std::f64::consts::PI * (i + 1) as f64 / nf).sin().powi(2))
        .collect();
    (diag, off)
}

/// Columns are unit eigenvectors ordered by Hermite index `k = 0..n`.
pub(crate) fn hermite_basis(n: usize) -> DMatrix<f64> {
    assert!(n >= 2);
    let (diag, off) = commuting_matrix(n);
    let half = n / 2;
    let odd_len = n % 2 == 1;

    // Even vectors v[j] = v[n-1-j]; odd vectors v[j] = -v[n-1-j].
    let (even, odd) = if odd_len {
        let mut ed = diag[..=half].to_vec();
        let mut eo = off[..half].to_vec();
        *eo.last_mut().unwrap() *= std::f64::consts::SQRT_2;
        ed.truncate(half + 1);
        let even = SymTridiagonal::new(ed, eo);
        let odd = SymTridiagonal::new(diag[..half].to_vec(), off[..half - 1].to_vec());
        (even, odd)
    } else {
        let coupling = off[half - 1];
        let mut ed = diag[..half].to_vec();
        let mut od = diag[..half].to_vec();
        *ed.last_mut().unwrap() += coupling;
        *od.last_mut().unwrap() -= coupling;
        let sub = off[..half - 1].to_vec();
        (
            SymTridiagonal::new(ed, sub.clone()),
            SymTridiagonal::new(od, sub),
        )
    };

    let ((_, even_vecs), (_, odd_vecs)) =
        rayon::join(|| even.eigenpairs_desc(), || odd.eigenpairs_desc());

    let mut basis = DMatrix::<f64>::zeros(n, n);
    let inv_sqrt2 = std::f64::consts::FRAC_1_SQRT_2;
    for (j, u) in even_vecs.iter().enumerate() {
        let mut col = basis.column_mut(2 * j);
        for i in 0..half {
            let v = u[i] * inv_sqrt2;
            col[i] = v;
            col[n - 1 - i] = v;
        }
        if odd_len {
            col[half] = u[half];
        }
    }
    for (j, u) in odd_vecs.iter().enumerate() {
        let mut col = basis.column_mut(2 * j + 1);
        for i in 0..half {
            let v = u[i] * inv_sqrt2;
            col[i] = v;
            col[n - 1 - i] = -v;
        }
    }
    basis
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    fn centered_dft(n: usize) -> Vec<Vec<Complex64>> {
        let c = (n as f64 - 1.0) / 2.0;
        let s = 1.0 / (n as f64).sqrt();
        (0..n)
            .map(|m| {
                (0..n)
                    .map(|k| {
                        let ang = -2.0 * std::f64::consts::PI * (m as f64 - c) * (k as f64 - c)
                            / n as f64;
                        Complex64::from_polar(s, ang)
                    })
                    .collect()
            })
            .collect()
    }

    #[test]
    fn commutes_with_centered_dft() {
        for n in [2, 3, 4, 7, 8, 15, 32, 33] {
            let (d, e) = commuting_matrix(n);
            let f = centered_dft(n);
            let t = |i: usize, j: usize| -> f64 {
                if i == j {
                    d[i]
                } else if i + 1 == j {
                    e[i]
                } else if j + 1 == i {
                    e[j]
                } else {
                    0.0
                }
            };
            for i in 0..n {
                for j in 0..n {
                    let tf: Complex64 = (0..n).map(|k| f[k][j] * t(i, k)).sum();
                    let ft: Complex64 = (0..n).map(|k| f[i][k] * t(k, j)).sum();
                    assert!((tf - ft).norm() < 1e-13, "n={n}");
                }
            }
        }
    }

    #[test]
    fn basis_is_orthonormal_with_hermite_sign_changes() {
        for n in [2, 3, 5, 16, 31, 64, 129] {
            let v = hermite_basis(n);
            let gram = v.transpose() * &v;
            let err = (gram - DMatrix::<f64>::identity(n, n)).abs().max();
            assert!(err < 1e-12, "n={n}: {err}");
            for k in 0..n.min(12) {
                let col = v.column(k);
                let changes = col
                    .iter()
                    .filter(|x| x.abs() > 1e-12)
                    .collect::<Vec<_>>()
                    .windows(2)
                    .filter(|w| w[0].signum() != w[1].signum())
                    .count();
                assert_eq!(changes, k, "n={n} k={k}");
            }
        }
    }

    #[test]
    fn dft_eigenvalues_follow_hermite_index() {
        for n in 2..=40 {
            let v = hermite_basis(n);
            let f = centered_dft(n);
            for k in 0..n {
                let col = v.column(k);
                let want = Complex64::new(0.0, -1.0).powu(k as u32);
                for m in 0..n {
                    let fv: Complex64 = (0..n).map(|j| f[m][j] * col[j]).sum();
                    assert!((fv - want * col[m]).norm() < 1e-10, "n={n} k={k}");
                }
            }
        }
    }
}
