//! Shared finite-difference and quadrature oracles, written independently
//! of the library's own differential-geometry and Fourier routines so the
//! two can disagree if either is wrong.

#![allow(dead_code)]

use nalgebra::{Matrix2, Matrix3, Vector3};
use num_complex::Complex64;

/// Richardson-extrapolated central first derivative of a vector function.
pub fn fd_derivative<F: Fn(f64) -> Vector3<f64>>(f: F, x: f64, h: f64) -> Vector3<f64> {
    let d = |step: f64| (f(x + step) - f(x - step)) / (2.0 * step);
    let coarse = d(h);
    let fine = d(h / 2.0);
    (fine * 4.0 - coarse) / 3.0
}

/// Unit normal of a chart from finite differences of the map alone.
pub fn fd_normal<F: Fn(f64, f64) -> Vector3<f64>>(
    map: &F,
    q1: f64,
    q2: f64,
    h: f64,
    orientation: f64,
) -> Vector3<f64> {
    let t1 = fd_derivative(|x| map(x, q2), q1, h);
    let t2 = fd_derivative(|y| map(q1, y), q2, h);
    let n = t1.cross(&t2) * orientation;
    n / n.norm()
}

/// Weingarten matrix estimated without second fundamental forms: finite
/// differences of the normal field expanded in the dual tangent basis,
/// `∂_μ n = A^λ_μ t_λ`.
pub fn fd_weingarten<F: Fn(f64, f64) -> Vector3<f64>>(
    map: &F,
    q1: f64,
    q2: f64,
    h: f64,
    orientation: f64,
) -> Matrix2<f64> {
    let t1 = fd_derivative(|x| map(x, q2), q1, h);
    let t2 = fd_derivative(|y| map(q1, y), q2, h);
    let g = Matrix2::new(t1.dot(&t1), t1.dot(&t2), t2.dot(&t1), t2.dot(&t2));
    let g_inv = g.try_inverse().expect("oracle expects a nondegenerate point");
    let dn1 = fd_derivative(|x| fd_normal(map, x, q2, h, orientation), q1, h);
    let dn2 = fd_derivative(|y| fd_normal(map, q1, y, h, orientation), q2, h);
    // Components of ∂n in the tangent basis via the metric inverse:
    // A^λ_μ = g^{λν} (t_ν · ∂_μ n).
    let proj = Matrix2::new(t1.dot(&dn1), t1.dot(&dn2), t2.dot(&dn1), t2.dot(&dn2));
    g_inv * proj
}

/// Brute-force shell metric: the full 3×3 first fundamental form of the
/// thickened map `R(q¹,q²,q³) = r + q³ n`, all three tangents taken by
/// finite differences of `R` itself.
pub fn fd_shell_metric<F: Fn(f64, f64) -> Vector3<f64>>(
    map: &F,
    q1: f64,
    q2: f64,
    q3: f64,
    h: f64,
    orientation: f64,
) -> Matrix3<f64> {
    let shell = |a: f64, b: f64, c: f64| map(a, b) + fd_normal(map, a, b, h, orientation) * c;
    let e1 = fd_derivative(|x| shell(x, q2, q3), q1, h);
    let e2 = fd_derivative(|y| shell(q1, y, q3), q2, h);
    let e3 = fd_derivative(|z| shell(q1, q2, z), q3, h);
    let cols = [e1, e2, e3];
    Matrix3::from_fn(|i, j| cols[i].dot(&cols[j]))
}

/// Dense uniform-trapezoid Fourier transform of the stripe harmonic's
/// u-factor: `(2π)^{-1/2} Σ f(u_j) e^{i k u_j} h`. For these analytic,
/// exponentially decaying integrands the uniform trapezoid sum converges
/// spectrally (aliasing error ~ |Q(k ± 2π/h)|), so step 0.02 on [-40, 40]
/// is exact to machine precision — a genuinely different discretization
/// from the library's panel-based Gauss rules.
pub fn trapezoid_fourier<F: Fn(f64) -> f64>(f: F, k: f64, u_max: f64, step: f64) -> Complex64 {
    let n = (2.0 * u_max / step).round() as i64;
    let mut sum = Complex64::new(0.0, 0.0);
    for j in 0..=n {
        let u = -u_max + j as f64 * step;
        let weight = if j == 0 || j == n { 0.5 } else { 1.0 };
        sum += Complex64::from_polar(1.0, k * u) * (f(u) * weight);
    }
    sum * step / (2.0 * std::f64::consts::PI).sqrt()
}
