//! Quantum mechanics of a particle confined to a curved surface.
//!
//! Three connected computations, plus the numerics they stand on:
//!
//! * [`surface`] — differential geometry of parametrized surfaces embedded
//!   in R³: metric, curvatures, the thin-shell metric expansion, and the
//!   curvature-induced potential `V_g = -ħ²/(2μ)(M² - K)` that appears when
//!   a 3D particle is squeezed onto the surface.
//! * [`operators`] — the geometric momentum and angular momentum on the
//!   unit sphere as differential operators and as matrices in a truncated
//!   spherical-harmonic basis, together with their so(3,1) commutation
//!   algebra and the `p_z` eigenfunctions.
//! * [`momentum`] — momentum-space amplitudes `Q_lm(p_z)` of spherical
//!   harmonics through the stripe map `u = ln tan(θ/2)`: closed forms for
//!   `l ≤ 2`, quadrature for all `(l, m)`, and the structural checks
//!   (orthogonality, parity, difference equation, node counts, oscillator
//!   comparison).
//!
//! Supporting modules: [`harmonics`] (spherical harmonics and their
//! derivatives), [`special`] (associated Legendre and Hermite functions),
//! [`quadrature`] (Gauss–Legendre rules and oscillatory Fourier
//! integrals), and [`output`] (CSV/JSON serialization).
//!
//! Conventions used throughout: associated Legendre functions include the
//! Condon–Shortley phase; surface normals point along the chart's oriented
//! cross product (outward for the built-in sphere and torus); `ħ` is an
//! explicit parameter wherever it enters an operator, a distribution, or a
//! tolerance.

pub mod harmonics;
pub mod momentum;
pub mod operators;
pub mod output;
pub mod quadrature;
pub mod special;
pub mod surface;

pub use harmonics::HarmonicIndex;
pub use num_complex::Complex64;
pub use momentum::{
    AmplitudeSource, AmplitudeTable, MomentumError, MomentumGrid, StripeHarmonic,
};
pub use operators::{OpId, OperatorError, OperatorSet, SphereGrid};
pub use surface::{GeometryError, SurfaceChart, SurfaceGeometry};
