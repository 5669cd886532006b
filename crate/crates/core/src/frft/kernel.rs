//! The continuous fractional Fourier kernel
//!
//! ```text
//! K_a(ξ, x) = C_a · exp(-iπ (2xξ / sin α - (x² + ξ²) cot α)),   α = aπ/2
//! C_a       = sqrt(1 - i cot α)
//! ```
//!
//! The discrete transform in the parent module does not sample this kernel
//! directly (a sampled kernel is neither unitary nor index-additive); these
//! functions exist so the discrete transform can be checked against the
//! continuous one by quadrature.

use num_complex::Complex64;
use std::f64::consts::PI;

use super::FractionalOrder;

/// `C_a = sqrt(1 - i·cot α)` with the principal square root.
/// `None` where `sin α = 0` and the kernel degenerates to a delta.
pub fn envelope(order: FractionalOrder) -> Option<Complex64> {
    if order.is_degenerate() {
        return None;
    }
    let alpha = order.angle();
    let cot = alpha.cos() / alpha.sin();
    Some(Complex64::new(1.0, -cot).sqrt())
}

/// Polar form of the same envelope,
/// `exp(-i(π·sgn(sin α)/4 - α/2)) / sqrt(|sin α|)`.
pub fn envelope_polar(order: FractionalOrder) -> Option<Complex64> {
    if order.is_degenerate() {
        return None;
    }
    let alpha = order.angle();
    let s = alpha.sin();
    let phase = -(PI * s.signum() / 4.0 - alpha / 2.0);
    Some(Complex64::from_polar(1.0 / s.abs().sqrt(), phase))
}

/// `K_a(ξ, x)`; `None` at the degenerate angles.
pub fn kernel_value(order: FractionalOrder, x: f64, xi: f64) -> Option<Complex64> {
    let c = envelope(order)?;
    let alpha = order.angle();
    let cot = alpha.cos() / alpha.sin();
    let phase = -PI * (2.0 * x * xi / alpha.sin() - (x * x + xi * xi) * cot);
    Some(c * Complex64::from_polar(1.0, phase))
}

/// Trapezoidal quadrature of `∫ K_a(ξ, x) f(x) dx` over `[-half_width, half_width]`.
pub fn continuous_transform_at(
    order: FractionalOrder,
    f: impl Fn(f64) -> f64,
    xi: f64,
    half_width: f64,
    step: f64,
) -> Option<Complex64> {
    let steps = (2.0 * half_width / step).ceil() as usize;
    let h = 2.0 * half_width / steps as f64;
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..=steps {
        let x = -half_width + i as f64 * h;
        let w = if i == 0 || i == steps { 0.5 } else { 1.0 };
        acc += kernel_value(order, x, xi)? * (w * f(x));
    }
    Some(acc * h)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn order(a: f64) -> FractionalOrder {
        FractionalOrder::new(a).unwrap()
    }

    #[test]
    fn envelope_forms_agree() {
        for i in -199..=199 {
            let a = i as f64 / 100.0;
            let o = order(a);
            match (envelope(o), envelope_polar(o)) {
                (Some(x), Some(y)) => assert!((x - y).norm() < 1e-9 * x.norm(), "a={a}"),
                (None, None) => assert!(o.is_degenerate()),
                other => panic!("a={a}: {other:?}"),
            }
        }
    }

    #[test]
    fn order_one_is_fourier_kernel() {
        let o = order(1.0);
        assert!((envelope(o).unwrap() - Complex64::new(1.0, 0.0)).norm() < 1e-15);
        for (x, xi) in [(0.3, -1.2), (2.0, 0.25), (-0.7, -0.9)] {
            let k = kernel_value(o, x, xi).unwrap();
            let want = Complex64::from_polar(1.0, -2.0 * PI * x * xi);
            assert!((k - want).norm() < 1e-12);
        }
    }

    #[test]
    fn degenerate_angles_have_no_kernel() {
        assert!(kernel_value(order(0.0), 0.1, 0.2).is_none());
        assert!(kernel_value(order(2.0), 0.1, 0.2).is_none());
        assert!(kernel_value(order(-2.0), 0.1, 0.2).is_none());
        assert!(kernel_value(order(5e-7), 0.1, 0.2).is_none());
    }

    #[test]
    fn gaussian_is_a_fixed_point() {
        // exp(-πx²) is the zeroth Hermite-Gauss function: every order maps it to itself.
        let g = |x: f64| (-PI * x * x).exp();
        for a in [0.3, 0.5, 1.0, 1.7, -0.6] {
            for xi in [-1.0, 0.0, 0.4, 1.3] {
                let y = continuous_transform_at(order(a), g, xi, 8.0, 1e-3).unwrap();
                assert!(
                    (y - Complex64::new(g(xi), 0.0)).norm() < 1e-6,
                    "a={a} xi={xi} {y}"
                );
            }
        }
    }
}
