//! Gauss–Legendre quadrature and the composite rules built on it.
//!
//! Everything downstream (operator matrix elements, Fourier transforms of
//! stripe harmonics, normalization checks) reduces to integrals of smooth
//! functions, so a fixed-order Gauss–Legendre panel subdivided finely enough
//! for the local oscillation rate is all that is needed.

use num_complex::Complex64;

/// Nodes and weights of the `n`-point Gauss–Legendre rule on `[-1, 1]`.
///
/// Nodes are the roots of the Legendre polynomial `P_n`, found by Newton
/// iteration from the Chebyshev-like initial guess; weights are
/// `2 / ((1 - x^2) P_n'(x)^2)`. Nodes are returned in ascending order.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1, "quadrature order must be at least 1");
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        // Root i (counted from the largest) of P_n.
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (p, d) = legendre_and_derivative(n, x);
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let (_, dp) = legendre_and_derivative(n, x);
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[n - 1 - i] = x;
        weights[n - 1 - i] = w;
        nodes[i] = -x;
        weights[i] = w;
    }
    if n % 2 == 1 {
        // Central node of an odd rule is exactly zero.
        nodes[n / 2] = 0.0;
        let (_, d) = legendre_and_derivative(n, 0.0);
        weights[n / 2] = 2.0 / (d * d);
    }
    (nodes, weights)
}

/// Value and derivative of the Legendre polynomial `P_n` at `x` from the
/// three-term recurrence `(k+1) P_{k+1} = (2k+1) x P_k - k P_{k-1}`.
fn legendre_and_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 1..n {
        let k = k as f64;
        let p2 = ((2.0 * k + 1.0) * x * p1 - k * p0) / (k + 1.0);
        p0 = p1;
        p1 = p2;
    }
    // P_n'(x) = n (x P_n - P_{n-1}) / (x^2 - 1)
    let d = (n as f64) * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// A reusable Gauss–Legendre rule of fixed order.
#[derive(Debug, Clone)]
pub struct GaussRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussRule {
    pub fn new(order: usize) -> Self {
        let (nodes, weights) = gauss_legendre(order);
        Self { nodes, weights }
    }

    /// Integrate `f` over `[a, b]` with this rule on a single panel.
    pub fn integrate<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, mut f: F) -> f64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        let mut acc = 0.0;
        for (&x, &w) in self.nodes.iter().zip(&self.weights) {
            acc += w * f(mid + half * x);
        }
        acc * half
    }
}

/// Order used for all composite panels in this crate. High enough that panel
/// truncation error is far below roundoff for the panel widths chosen below.
pub const PANEL_ORDER: usize = 16;

/// Composite Gauss–Legendre integral of a real function over `[a, b]`
/// with panels no wider than `max_width`.
pub fn integrate_composite<F: FnMut(f64) -> f64>(
    a: f64,
    b: f64,
    max_width: f64,
    mut f: F,
) -> f64 {
    let rule = GaussRule::new(PANEL_ORDER);
    let n_panels = ((b - a) / max_width).ceil().max(1.0) as usize;
    let width = (b - a) / n_panels as f64;
    let mut acc = 0.0;
    for i in 0..n_panels {
        let lo = a + width * i as f64;
        acc += rule.integrate(lo, lo + width, &mut f);
    }
    acc
}

/// Panel width appropriate for integrands carrying an `exp(i k u)` factor:
/// at least four panels per oscillation period, never wider than 1.
pub fn oscillatory_panel_width(k: f64) -> f64 {
    let period = 2.0 * std::f64::consts::PI / k.abs().max(1e-30);
    period.min(1.0) / 4.0
}

/// Composite Gauss–Legendre evaluation of `∫_{-u_max}^{u_max} f(u) e^{iku} du`
/// for a smooth real or complex-valued `f` supplied through `eval`, which
/// must fill `out[j]` with the j-th component of `f(u)` (several integrals
/// sharing the same oscillatory factor are computed in one sweep).
pub fn fourier_integral_batch<F: FnMut(f64, &mut [f64])>(
    k: f64,
    u_max: f64,
    n_components: usize,
    mut eval: F,
    out: &mut [Complex64],
) {
    assert_eq!(out.len(), n_components);
    let rule = GaussRule::new(PANEL_ORDER);
    let width_cap = oscillatory_panel_width(k);
    let n_panels = (2.0 * u_max / width_cap).ceil().max(1.0) as usize;
    let width = 2.0 * u_max / n_panels as f64;
    let mut values = vec![0.0; n_components];
    for v in out.iter_mut() {
        *v = Complex64::new(0.0, 0.0);
    }
    for p in 0..n_panels {
        let lo = -u_max + width * p as f64;
        let half = 0.5 * width;
        let mid = lo + half;
        for (&x, &w) in rule.nodes.iter().zip(&rule.weights) {
            let u = mid + half * x;
            eval(u, &mut values);
            let phase = Complex64::new(0.0, k * u).exp() * (w * half);
            for (o, &v) in out.iter_mut().zip(values.iter()) {
                *o += phase * v;
            }
        }
    }
}

/// Scalar convenience wrapper around [`fourier_integral_batch`].
pub fn fourier_integral<F: FnMut(f64) -> f64>(
    k: f64,
    u_max: f64,
    mut f: F,
) -> Complex64 {
    let mut out = [Complex64::new(0.0, 0.0)];
    fourier_integral_batch(k, u_max, 1, |u, vals| vals[0] = f(u), &mut out);
    out[0]
}

/// Trapezoid rule on a uniformly spaced grid of samples.
pub fn trapezoid_uniform(step: f64, values: &[f64]) -> f64 {
    if values.len() < 2 {
        return 0.0;
    }
    let interior: f64 = values[1..values.len() - 1].iter().sum();
    step * (0.5 * (values[0] + values[values.len() - 1]) + interior)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn gauss_legendre_integrates_monomials_exactly() {
        // An n-point rule is exact for polynomials of degree 2n-1.
        for n in [2usize, 5, 8, 16, 28] {
            let (x, w) = gauss_legendre(n);
            for j in 0..(2 * n) {
                let quad: f64 = x
                    .iter()
                    .zip(&w)
                    .map(|(&xi, &wi)| wi * xi.powi(j as i32))
                    .sum();
                let exact = if j % 2 == 0 { 2.0 / (j as f64 + 1.0) } else { 0.0 };
                assert!(
                    (quad - exact).abs() < 1e-13,
                    "n = {n}, degree {j}: {quad} vs {exact}"
                );
            }
        }
    }

    #[test]
    fn two_point_rule_matches_hand_values() {
        // Classical nodes ±1/sqrt(3), weights 1.
        let (x, w) = gauss_legendre(2);
        assert_relative_eq!(x[0], -(1.0f64 / 3.0).sqrt(), epsilon = 1e-15);
        assert_relative_eq!(x[1], (1.0f64 / 3.0).sqrt(), epsilon = 1e-15);
        assert_relative_eq!(w[0], 1.0, epsilon = 1e-15);
        assert_relative_eq!(w[1], 1.0, epsilon = 1e-15);
    }

    #[test]
    fn weights_sum_to_interval_length() {
        for n in [1usize, 3, 7, 20, 52] {
            let (_, w) = gauss_legendre(n);
            let s: f64 = w.iter().sum();
            assert_relative_eq!(s, 2.0, epsilon = 1e-13);
        }
    }

    #[test]
    fn composite_rule_handles_smooth_integrands() {
        // ∫_0^π sin = 2
        let v = integrate_composite(0.0, std::f64::consts::PI, 0.5, |x| x.sin());
        assert_relative_eq!(v, 2.0, epsilon = 1e-14);
    }

    #[test]
    fn fourier_integral_of_sech_matches_closed_form() {
        // ∫ sech(u) e^{iku} du = π sech(πk/2), a classical transform pair.
        for &k in &[0.0, 0.35, 1.0, 3.7, -2.2, 10.0] {
            let got = fourier_integral(k, 40.0, |u| 1.0 / u.cosh());
            let want = std::f64::consts::PI / (std::f64::consts::PI * k / 2.0).cosh();
            assert!(
                (got.re - want).abs() < 1e-12 && got.im.abs() < 1e-12,
                "k = {k}: {got} vs {want}"
            );
        }
    }

    #[test]
    fn fourier_integral_of_sech_squared_matches_closed_form() {
        // ∫ sech²(u) e^{iku} du = πk / sinh(πk/2).
        for &k in &[0.25, 1.0, 4.0, -6.0] {
            let got = fourier_integral(k, 40.0, |u| {
                let s = 1.0 / u.cosh();
                s * s
            });
            let half_pi_k = std::f64::consts::PI * k / 2.0;
            let want = std::f64::consts::PI * k / half_pi_k.sinh();
            assert!(
                (got.re - want).abs() < 1e-12 && got.im.abs() < 1e-12,
                "k = {k}: {got} vs {want}"
            );
        }
    }

    #[test]
    fn trapezoid_on_decaying_smooth_function_is_spectrally_accurate() {
        // For a smooth function that vanishes with all derivatives at the
        // ends, the trapezoid rule converges faster than any power of the
        // step; Gaussian over ±10 at step 0.05 is exact to roundoff.
        let step = 0.05;
        let n = (20.0 / step) as usize + 1;
        let vals: Vec<f64> = (0..n)
            .map(|i| {
                let x = -10.0 + step * i as f64;
                (-x * x / 2.0).exp()
            })
            .collect();
        let got = trapezoid_uniform(step, &vals);
        assert_relative_eq!(got, (2.0 * std::f64::consts::PI).sqrt(), epsilon = 1e-13);
    }
}
