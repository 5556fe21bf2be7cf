//! Associated Legendre functions and harmonic-oscillator eigenfunctions.
//!
//! The associated Legendre functions `P_l^m` carry the Condon–Shortley phase
//! `(-1)^m` and are evaluated by the standard upward recurrence in `l` at
//! fixed `m`, which is stable on `[-1, 1]`. First and second derivatives are
//! obtained from the derivative recurrence, not from the differential
//! equation, so eigenvalue checks downstream remain independent.

/// `(l - m)! / (l + m)!` evaluated as a cancelled product, exact in f64 for
/// every order used here.
pub fn factorial_ratio(l: u32, m: u32) -> f64 {
    assert!(m <= l, "need m <= l, got l = {l}, m = {m}");
    let mut acc = 1.0;
    for j in (l - m + 1)..=(l + m) {
        acc /= j as f64;
    }
    acc
}

/// Associated Legendre function `P_l^m(x)` for `0 <= m <= l`, `|x| <= 1`,
/// Condon–Shortley phase included: `P_m^m(x) = (-1)^m (2m-1)!! (1-x²)^{m/2}`.
pub fn assoc_legendre(l: u32, m: u32, x: f64) -> f64 {
    let mut sweep = [0.0; 2];
    assoc_legendre_pair(l, m, x, &mut sweep);
    sweep[1]
}

/// Writes `P_{l-1}^m(x)` and `P_l^m(x)` into `out` (the first entry is zero
/// when `l == m`). Shared by the value and derivative evaluators.
fn assoc_legendre_pair(l: u32, m: u32, x: f64, out: &mut [f64; 2]) {
    assert!(m <= l, "need m <= l, got l = {l}, m = {m}");
    assert!((-1.0..=1.0).contains(&x), "argument out of range: {x}");
    // Seed: P_m^m.
    let mut pmm = 1.0;
    if m > 0 {
        let somx2 = ((1.0 - x) * (1.0 + x)).sqrt();
        let mut fact = 1.0;
        for _ in 0..m {
            pmm *= -fact * somx2;
            fact += 2.0;
        }
    }
    if l == m {
        *out = [0.0, pmm];
        return;
    }
    // P_{m+1}^m = x (2m+1) P_m^m, then the three-term recurrence upward.
    let mut p_prev = pmm;
    let mut p_curr = x * (2.0 * m as f64 + 1.0) * pmm;
    for ll in (m + 2)..=l {
        let ll = ll as f64;
        let mf = m as f64;
        let p_next =
            (x * (2.0 * ll - 1.0) * p_curr - (ll + mf - 1.0) * p_prev) / (ll - mf);
        p_prev = p_curr;
        p_curr = p_next;
    }
    *out = [p_prev, p_curr];
}

/// All of `P_m^m(x) .. P_{l_max}^m(x)` in one upward sweep; `out[i]` holds
/// `P_{m+i}^m(x)`. Used where a whole `l`-range shares one grid point.
pub fn assoc_legendre_sweep(m: u32, l_max: u32, x: f64, out: &mut [f64]) {
    assert!(m <= l_max);
    assert_eq!(out.len(), (l_max - m + 1) as usize);
    let mut pmm = 1.0;
    if m > 0 {
        let somx2 = ((1.0 - x) * (1.0 + x)).sqrt();
        let mut fact = 1.0;
        for _ in 0..m {
            pmm *= -fact * somx2;
            fact += 2.0;
        }
    }
    out[0] = pmm;
    if l_max == m {
        return;
    }
    out[1] = x * (2.0 * m as f64 + 1.0) * pmm;
    for ll in (m + 2)..=l_max {
        let i = (ll - m) as usize;
        let llf = ll as f64;
        let mf = m as f64;
        out[i] = (x * (2.0 * llf - 1.0) * out[i - 1] - (llf + mf - 1.0) * out[i - 2])
            / (llf - mf);
    }
}

/// Derivative `dP_l^m/dx` from `(1-x²) P_l^m'(x) = (l+m) P_{l-1}^m - l x P_l^m`.
/// Requires `|x| < 1`.
pub fn assoc_legendre_dx(l: u32, m: u32, x: f64) -> f64 {
    assert!(x.abs() < 1.0, "derivative recurrence needs |x| < 1");
    if l == 0 {
        return 0.0;
    }
    let mut pair = [0.0; 2];
    assoc_legendre_pair(l, m, x, &mut pair);
    let [p_lm1, p_l] = pair;
    ((l + m) as f64 * p_lm1 - l as f64 * x * p_l) / (1.0 - x * x)
}

/// Value and first two θ-derivatives of `P_l^m(cos θ)` for `0 < θ < π`.
///
/// With `x = cos θ`, `s = sin θ` and `u(θ) = l x P_l^m - (l+m) P_{l-1}^m`:
/// `d/dθ P_l^m(cos θ) = u / s`, and the second derivative follows from the
/// quotient rule using the same recurrence one level down.
pub fn assoc_legendre_theta_derivs(l: u32, m: u32, theta: f64) -> (f64, f64, f64) {
    assert!(
        theta > 0.0 && theta < std::f64::consts::PI,
        "θ must lie strictly between 0 and π"
    );
    let x = theta.cos();
    let s = theta.sin();
    let lf = l as f64;
    let mf = m as f64;

    let mut pair = [0.0; 2];
    assoc_legendre_pair(l, m, x, &mut pair);
    let [p_lm1, p_l] = pair;

    if l == 0 {
        return (p_l, 0.0, 0.0);
    }

    // dθ-derivative of P_l^m(cos θ).
    let u = lf * x * p_l - (lf + mf) * p_lm1;
    let d1 = u / s;

    // dθ-derivative of P_{l-1}^m(cos θ), needed for the second derivative.
    let d1_lm1 = if l - 1 < m {
        0.0
    } else if l - 1 == m {
        // P_m^m(cos θ) = (-1)^m (2m-1)!! sin^m θ  ⇒  d/dθ = m cot θ · P_m^m.
        mf * (x / s) * p_lm1
    } else {
        let mut pair_lm1 = [0.0; 2];
        assoc_legendre_pair(l - 1, m, x, &mut pair_lm1);
        ((lf - 1.0) * x * pair_lm1[1] - (lf - 1.0 + mf) * pair_lm1[0]) / s
    };

    let du = -lf * s * p_l + lf * x * d1 - (lf + mf) * d1_lm1;
    let d2 = du / s - u * x / (s * s);
    (p_l, d1, d2)
}

/// Unit-normalized harmonic-oscillator eigenfunction `φ_n(x)` of the
/// dimensionless oscillator, `∫ φ_n² dx = 1`:
/// `φ_0 = π^{-1/4} e^{-x²/2}`, `φ_{n+1} = √(2/(n+1)) x φ_n − √(n/(n+1)) φ_{n-1}`.
pub fn hermite_function(n: u32, x: f64) -> f64 {
    let phi0 = std::f64::consts::PI.powf(-0.25) * (-0.5 * x * x).exp();
    if n == 0 {
        return phi0;
    }
    let mut prev = phi0;
    let mut curr = std::f64::consts::SQRT_2 * x * phi0;
    for k in 1..n {
        let kf = k as f64;
        let next = (2.0 / (kf + 1.0)).sqrt() * x * curr - (kf / (kf + 1.0)).sqrt() * prev;
        prev = curr;
        curr = next;
    }
    curr
}
