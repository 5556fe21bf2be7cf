//! Spherical harmonics `Y_lm(θ, φ)` with the Condon–Shortley phase, their
//! analytic θ-derivatives, and the flat indexing used by the operator
//! matrices.
//!
//! Conventions: `Y_lm = T_lm(θ) e^{imφ}` with the real θ-component
//! `T_lm(θ) = √((2l+1)/(4π) · (l-m)!/(l+m)!) P_l^m(cos θ)` for `m ≥ 0` and
//! `T_{l,-m} = (-1)^m T_{l,m}`, so that `Y_{l,-m} = (-1)^m conj(Y_{l,m})`.

use num_complex::Complex64;

use crate::special::{assoc_legendre, assoc_legendre_theta_derivs, factorial_ratio};

/// Quantum numbers `(l, m)` of one spherical harmonic.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct HarmonicIndex {
    pub l: u32,
    pub m: i32,
}

impl HarmonicIndex {
    pub fn new(l: u32, m: i32) -> Self {
        assert!(m.unsigned_abs() <= l, "|m| must not exceed l (l={l}, m={m})");
        Self { l, m }
    }

    /// Position in the flat basis ordering `(0,0), (1,-1), (1,0), (1,1), …`:
    /// `l² + l + m`.
    pub fn flat(&self) -> usize {
        (self.l * self.l) as usize + (self.l as i64 + self.m as i64) as usize
    }

    /// Inverse of [`flat`](Self::flat).
    pub fn from_flat(index: usize) -> Self {
        let l = (index as f64).sqrt() as u32;
        let l = if ((l + 1) * (l + 1)) as usize <= index { l + 1 } else { l };
        let m = index as i64 - (l * l) as i64 - l as i64;
        Self::new(l, m as i32)
    }

    /// Number of harmonics with `l ≤ l_max`: `(l_max + 1)²`.
    pub fn count(l_max: u32) -> usize {
        ((l_max + 1) * (l_max + 1)) as usize
    }
}

impl std::fmt::Display for HarmonicIndex {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Y({},{})", self.l, self.m)
    }
}

/// Normalization of the θ-part over `∫₀^π … sinθ dθ = 1` together with the
/// `e^{imφ}/√(2π)` azimuthal factor: `√((2l+1)/(4π) · (l-m)!/(l+m)!)`.
pub fn sphere_norm(l: u32, m: u32) -> f64 {
    assert!(m <= l);
    ((2 * l + 1) as f64 / (4.0 * std::f64::consts::PI) * factorial_ratio(l, m)).sqrt()
}

/// Normalization for the unit-weight measure `dθ` of the band
/// (no azimuthal factor): `√((2l+1)/2 · (l-m)!/(l+m)!)`.
pub fn stripe_norm(l: u32, m: u32) -> f64 {
    assert!(m <= l);
    ((2 * l + 1) as f64 / 2.0 * factorial_ratio(l, m)).sqrt()
}

/// Real θ-component `T_lm(θ)` (the full harmonic is `T_lm(θ) e^{imφ}`).
pub fn theta_component(l: u32, m: i32, theta: f64) -> f64 {
    let ma = m.unsigned_abs();
    let sign = if m < 0 && ma % 2 == 1 { -1.0 } else { 1.0 };
    sign * sphere_norm(l, ma) * assoc_legendre(l, ma, theta.cos())
}

/// `(T, dT/dθ, d²T/dθ²)` of the θ-component, analytic throughout `(0, π)`.
pub fn theta_component_derivs(l: u32, m: i32, theta: f64) -> (f64, f64, f64) {
    let ma = m.unsigned_abs();
    let sign = if m < 0 && ma % 2 == 1 { -1.0 } else { 1.0 };
    let norm = sign * sphere_norm(l, ma);
    let (p, dp, ddp) = assoc_legendre_theta_derivs(l, ma, theta);
    (norm * p, norm * dp, norm * ddp)
}

/// Value of `Y_lm(θ, φ)`.
pub fn harmonic(l: u32, m: i32, theta: f64, phi: f64) -> Complex64 {
    let t = theta_component(l, m, theta);
    Complex64::from_polar(1.0, m as f64 * phi) * t
}

/// `(Y, ∂Y/∂θ, ∂Y/∂φ)` at a point strictly inside the band `0 < θ < π`.
pub fn harmonic_derivs(l: u32, m: i32, theta: f64, phi: f64) -> (Complex64, Complex64, Complex64) {
    let (t, dt, _) = theta_component_derivs(l, m, theta);
    let phase = Complex64::from_polar(1.0, m as f64 * phi);
    let y = phase * t;
    (y, phase * dt, Complex64::new(0.0, m as f64) * y)
}
