//! Momentum and angular-momentum operators on the unit sphere.
//!
//! In the dimensionless convention (`p_i r → p_i`) the three momentum
//! components read
//!
//! ```text
//! p_x = -iħ (cosθ cosφ ∂_θ - sinφ/sinθ ∂_φ - sinθ cosφ)
//! p_y = -iħ (cosθ sinφ ∂_θ + cosφ/sinθ ∂_φ - sinθ sinφ)
//! p_z =  iħ (sinθ ∂_θ + cosθ)
//! ```
//!
//! and together with the angular momenta `L_x, L_y, L_z` they close the
//! so(3,1) commutator table
//!
//! ```text
//! [p_i, p_j] = -iħ ε_ijk L_k     [L_i, p_j] = iħ ε_ijk p_k
//! [L_i, L_j] =  iħ ε_ijk L_k     [p_i, L_i] = 0
//! ```
//!
//! This module evaluates the operators analytically on spherical harmonics,
//! builds their matrices in the truncated `Y_lm` basis by Gauss–Legendre ×
//! uniform quadrature (exact for band-limited integrands), and provides the
//! residual checks for the algebra, the rotation equivalences, and the joint
//! `(p_z, L_z)` eigenfunctions.

use nalgebra::DMatrix;
use num_complex::Complex64;
use thiserror::Error;

use crate::harmonics::{theta_component, theta_component_derivs, HarmonicIndex};
use crate::momentum::u_to_theta;
use crate::quadrature::{gauss_legendre, integrate_composite, oscillatory_panel_width};

#[derive(Debug, Error)]
pub enum OperatorError {
    /// The grid cannot represent functions of the requested band limit.
    #[error(
        "grid too coarse for band limit {l_max}: need n_theta > {l_max} and n_phi > {}, \
         got {n_theta} x {n_phi}",
        2 * l_max + 1
    )]
    GridTooCoarse { n_theta: usize, n_phi: usize, l_max: u32 },
    /// Commutator checks need two spare `l` shells above the interior block.
    #[error("truncation too tight: interior l = {l_interior} needs l_max >= {}", l_interior + 2)]
    TruncationTooTight { l_interior: u32, l_max: u32 },
    /// The requested point sits on the coordinate poles θ ∈ {0, π}.
    #[error("coordinate pole at theta = {theta}")]
    PoleSingularity { theta: f64 },
}

/// Identifier of one of the seven operators handled here.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OpId {
    Px,
    Py,
    Pz,
    Lx,
    Ly,
    Lz,
    L2,
}

impl OpId {
    /// The six so(3,1) generators (excludes the Casimir-like `L²`).
    pub const GENERATORS: [OpId; 6] = [OpId::Px, OpId::Py, OpId::Pz, OpId::Lx, OpId::Ly, OpId::Lz];

    pub fn name(self) -> &'static str {
        match self {
            OpId::Px => "px",
            OpId::Py => "py",
            OpId::Pz => "pz",
            OpId::Lx => "Lx",
            OpId::Ly => "Ly",
            OpId::Lz => "Lz",
            OpId::L2 => "L2",
        }
    }
}

impl std::fmt::Display for OpId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Applies an operator to the spherical harmonic `Y_lm` at one point using
/// analytic derivatives (`∂_φ → im`, θ-derivatives from the Legendre
/// recurrences). Exact to rounding error for `0 < θ < π`.
pub fn apply_to_harmonic(
    op: OpId,
    l: u32,
    m: i32,
    theta: f64,
    phi: f64,
    hbar: f64,
) -> Complex64 {
    let (t, dt, ddt) = theta_component_derivs(l, m, theta);
    let phase = Complex64::from_polar(1.0, m as f64 * phi);
    let y = phase * t;
    let dy_th = phase * dt;
    let dy_ph = Complex64::new(0.0, m as f64) * y;
    let i = Complex64::new(0.0, 1.0);
    let (st, ct) = theta.sin_cos();
    let (sp, cp) = phi.sin_cos();
    match op {
        OpId::Pz => i * hbar * (dy_th * st + y * ct),
        OpId::Px => -i * hbar * (dy_th * (ct * cp) - dy_ph * (sp / st) - y * (st * cp)),
        OpId::Py => -i * hbar * (dy_th * (ct * sp) + dy_ph * (cp / st) - y * (st * sp)),
        OpId::Lx => i * hbar * (dy_th * sp + dy_ph * (ct / st * cp)),
        OpId::Ly => -i * hbar * (dy_th * cp - dy_ph * (ct / st * sp)),
        OpId::Lz => -i * hbar * dy_ph,
        OpId::L2 => {
            let mm = (m as f64) * (m as f64);
            -hbar * hbar * phase * (ddt + ct / st * dt - mm / (st * st) * t)
        }
    }
}

/// Tensor-product quadrature grid on the sphere: Gauss–Legendre nodes in
/// cosθ times uniform nodes in φ, with cached harmonic values for the
/// spherical-harmonic transform up to `l_max`.
pub struct SphereGrid {
    pub l_max: u32,
    /// θ values of the Gauss–Legendre nodes (cosθ ascending).
    pub thetas: Vec<f64>,
    /// Gauss–Legendre weights for ∫ d(cosθ) (sum to 2).
    pub weights: Vec<f64>,
    /// Uniform azimuthal nodes `φ_j = 2πj/N_φ`.
    pub phis: Vec<f64>,
    /// `theta_parts[flat(l,m)][i] = T_lm(θ_i)`.
    theta_parts: Vec<Vec<f64>>,
}

impl SphereGrid {
    /// Default sizing for exact matrix elements of first-order operators
    /// between harmonics of degree ≤ `l_max`: `N_θ = 2 l_max + 4`,
    /// `N_φ = 4 l_max + 4`.
    pub fn for_band_limit(l_max: u32) -> Self {
        Self::with_sizes(l_max, 2 * l_max as usize + 4, 4 * l_max as usize + 4)
    }

    /// Grid with explicit sizes. No adequacy check happens here; operators
    /// applied through an undersized grid report
    /// [`OperatorError::GridTooCoarse`].
    pub fn with_sizes(l_max: u32, n_theta: usize, n_phi: usize) -> Self {
        assert!(n_theta >= 1 && n_phi >= 1);
        let (nodes, weights) = gauss_legendre(n_theta);
        let thetas: Vec<f64> = nodes.iter().map(|&x| x.acos()).collect();
        let phis: Vec<f64> = (0..n_phi)
            .map(|j| 2.0 * std::f64::consts::PI * j as f64 / n_phi as f64)
            .collect();
        let mut theta_parts = Vec::with_capacity(HarmonicIndex::count(l_max));
        for idx in 0..HarmonicIndex::count(l_max) {
            let hi = HarmonicIndex::from_flat(idx);
            theta_parts.push(thetas.iter().map(|&th| theta_component(hi.l, hi.m, th)).collect());
        }
        Self { l_max, thetas, weights, phis, theta_parts }
    }

    pub fn n_theta(&self) -> usize {
        self.thetas.len()
    }

    pub fn n_phi(&self) -> usize {
        self.phis.len()
    }

    fn adequate(&self) -> bool {
        self.n_theta() > self.l_max as usize && self.n_phi() > 2 * self.l_max as usize + 1
    }

    fn coarse_error(&self) -> OperatorError {
        OperatorError::GridTooCoarse {
            n_theta: self.n_theta(),
            n_phi: self.n_phi(),
            l_max: self.l_max,
        }
    }

    /// Samples a function on the grid, row-major over (θ index, φ index).
    pub fn sample<F: FnMut(f64, f64) -> Complex64>(&self, mut f: F) -> Vec<Complex64> {
        let mut out = Vec::with_capacity(self.n_theta() * self.n_phi());
        for &th in &self.thetas {
            for &ph in &self.phis {
                out.push(f(th, ph));
            }
        }
        out
    }

    /// Azimuthal Fourier sums `F_m(θ_i) = (2π/N_φ) Σ_j f_ij e^{-imφ_j}`.
    fn phase_sums(&self, samples: &[Complex64], m: i32) -> Vec<Complex64> {
        let nphi = self.n_phi();
        let scale = 2.0 * std::f64::consts::PI / nphi as f64;
        (0..self.n_theta())
            .map(|i| {
                let mut acc = Complex64::new(0.0, 0.0);
                for (j, &ph) in self.phis.iter().enumerate() {
                    acc += samples[i * nphi + j] * Complex64::from_polar(1.0, -(m as f64) * ph);
                }
                acc * scale
            })
            .collect()
    }

    /// Spherical-harmonic analysis: coefficients `c_lm = ⟨Y_lm | f⟩` for all
    /// `l ≤ l_max`, in flat index order.
    pub fn analyze(&self, samples: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(samples.len(), self.n_theta() * self.n_phi());
        let mut coeffs = vec![Complex64::new(0.0, 0.0); HarmonicIndex::count(self.l_max)];
        for m in -(self.l_max as i32)..=self.l_max as i32 {
            let sums = self.phase_sums(samples, m);
            for l in m.unsigned_abs()..=self.l_max {
                let idx = HarmonicIndex::new(l, m).flat();
                let parts = &self.theta_parts[idx];
                let mut acc = Complex64::new(0.0, 0.0);
                for i in 0..self.n_theta() {
                    acc += sums[i] * (self.weights[i] * parts[i]);
                }
                coeffs[idx] = acc;
            }
        }
        coeffs
    }

    /// Inverse transform: grid samples of `Σ c_lm Y_lm`.
    pub fn synthesize(&self, coeffs: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(coeffs.len(), HarmonicIndex::count(self.l_max));
        let nphi = self.n_phi();
        let mut out = vec![Complex64::new(0.0, 0.0); self.n_theta() * nphi];
        for (idx, &c) in coeffs.iter().enumerate() {
            if c.norm_sqr() == 0.0 {
                continue;
            }
            let hi = HarmonicIndex::from_flat(idx);
            let parts = &self.theta_parts[idx];
            for i in 0..self.n_theta() {
                let ct = c * parts[i];
                for (j, &ph) in self.phis.iter().enumerate() {
                    out[i * nphi + j] += ct * Complex64::from_polar(1.0, hi.m as f64 * ph);
                }
            }
        }
        out
    }
}

/// Applies an operator to a band-limited function given by its grid samples:
/// the samples are analyzed into harmonic coefficients and the operator acts
/// analytically on each basis harmonic (spectral differentiation).
pub fn apply_operator(
    grid: &SphereGrid,
    op: OpId,
    samples: &[Complex64],
    hbar: f64,
) -> Result<Vec<Complex64>, OperatorError> {
    if !grid.adequate() {
        return Err(grid.coarse_error());
    }
    let coeffs = grid.analyze(samples);
    let nphi = grid.n_phi();
    let mut out = vec![Complex64::new(0.0, 0.0); grid.n_theta() * nphi];
    for (idx, &c) in coeffs.iter().enumerate() {
        if c.norm() < 1e-300 {
            continue;
        }
        let hi = HarmonicIndex::from_flat(idx);
        for (i, &th) in grid.thetas.iter().enumerate() {
            for (j, &ph) in grid.phis.iter().enumerate() {
                out[i * nphi + j] += c * apply_to_harmonic(op, hi.l, hi.m, th, ph, hbar);
            }
        }
    }
    Ok(out)
}

/// Matrix of one operator in the truncated spherical-harmonic basis.
#[derive(Debug, Clone)]
pub struct OperatorMatrix {
    pub op: OpId,
    pub l_max: u32,
    pub hbar: f64,
    /// `(L_max+1)²`-dimensional matrix over the flat `(l,m)` index.
    pub matrix: DMatrix<Complex64>,
}

impl OperatorMatrix {
    pub fn dim(&self) -> usize {
        HarmonicIndex::count(self.l_max)
    }

    pub fn entry(&self, row: HarmonicIndex, col: HarmonicIndex) -> Complex64 {
        self.matrix[(row.flat(), col.flat())]
    }

    /// Max-norm of `A - A†`.
    pub fn hermiticity_defect(&self) -> f64 {
        let a = &self.matrix;
        let mut worst: f64 = 0.0;
        for r in 0..a.nrows() {
            for c in 0..a.ncols() {
                worst = worst.max((a[(r, c)] - a[(c, r)].conj()).norm());
            }
        }
        worst
    }

    /// Largest entry that violates the operator's selection rules
    /// (`Δl, Δm` couplings listed in the module docs).
    pub fn selection_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for r in 0..self.dim() {
            let ri = HarmonicIndex::from_flat(r);
            for c in 0..self.dim() {
                let ci = HarmonicIndex::from_flat(c);
                let dl = ri.l as i64 - ci.l as i64;
                let dm = ri.m as i64 - ci.m as i64;
                let allowed = match self.op {
                    OpId::Pz => dl.abs() == 1 && dm == 0,
                    OpId::Px | OpId::Py => dl.abs() == 1 && dm.abs() == 1,
                    OpId::Lx | OpId::Ly => dl == 0 && dm.abs() == 1,
                    OpId::Lz | OpId::L2 => dl == 0 && dm == 0,
                };
                if !allowed {
                    worst = worst.max(self.matrix[(r, c)].norm());
                }
            }
        }
        worst
    }
}

/// Builds `⟨Y_{l'm'} | Op | Y_{lm}⟩` for all `l, l' ≤ l_max` by quadrature on
/// the [`SphereGrid::for_band_limit`] grid. The integrands are band-limited,
/// so the quadrature is exact up to rounding.
pub fn operator_matrix(op: OpId, l_max: u32, hbar: f64) -> OperatorMatrix {
    assert!(l_max >= 1, "operator matrices need l_max >= 1");
    let grid = SphereGrid::for_band_limit(l_max);
    let dim = HarmonicIndex::count(l_max);
    let mut matrix = DMatrix::zeros(dim, dim);
    for col in 0..dim {
        let hi = HarmonicIndex::from_flat(col);
        let samples = grid.sample(|th, ph| apply_to_harmonic(op, hi.l, hi.m, th, ph, hbar));
        for (row, c) in grid.analyze(&samples).into_iter().enumerate() {
            matrix[(row, col)] = c;
        }
    }
    OperatorMatrix { op, l_max, hbar, matrix }
}

/// All seven operator matrices at a common truncation.
pub struct OperatorSet {
    pub l_max: u32,
    pub hbar: f64,
    matrices: Vec<OperatorMatrix>,
}

impl OperatorSet {
    pub fn new(l_max: u32, hbar: f64) -> Self {
        let ids = [OpId::Px, OpId::Py, OpId::Pz, OpId::Lx, OpId::Ly, OpId::Lz, OpId::L2];
        Self {
            l_max,
            hbar,
            matrices: ids.iter().map(|&op| operator_matrix(op, l_max, hbar)).collect(),
        }
    }

    pub fn get(&self, op: OpId) -> &OperatorMatrix {
        let pos = match op {
            OpId::Px => 0,
            OpId::Py => 1,
            OpId::Pz => 2,
            OpId::Lx => 3,
            OpId::Ly => 4,
            OpId::Lz => 5,
            OpId::L2 => 6,
        };
        &self.matrices[pos]
    }
}

/// Max-norm over the matrix block with row and column degrees `l ≤ l_interior`.
fn interior_norm(m: &DMatrix<Complex64>, l_interior: u32) -> f64 {
    let cut = HarmonicIndex::count(l_interior);
    let mut worst: f64 = 0.0;
    for r in 0..cut.min(m.nrows()) {
        for c in 0..cut.min(m.ncols()) {
            worst = worst.max(m[(r, c)].norm());
        }
    }
    worst
}

fn check_interior(l_interior: u32, l_max: u32) -> Result<(), OperatorError> {
    if l_interior + 2 > l_max {
        return Err(OperatorError::TruncationTooTight { l_interior, l_max });
    }
    Ok(())
}

/// Residual of `[A, B] = Σ c_j (iħ) Op_j` on the interior block: the
/// `expected` terms are pairs `(c_j, Op_j)` with real `c_j` multiplying `iħ`.
/// Returns the max-norm of the difference restricted to rows and columns
/// with `l ≤ l_interior` (momentum operators couple `l → l ± 1`, so the
/// commutator is only exact away from the truncation boundary).
pub fn commutator_residual(
    set: &OperatorSet,
    a: OpId,
    b: OpId,
    expected: &[(f64, OpId)],
    l_interior: u32,
) -> Result<f64, OperatorError> {
    check_interior(l_interior, set.l_max)?;
    let ma = &set.get(a).matrix;
    let mb = &set.get(b).matrix;
    let mut diff = ma * mb - mb * ma;
    let ihbar = Complex64::new(0.0, set.hbar);
    for &(c, op) in expected {
        diff -= &set.get(op).matrix * (ihbar * c);
    }
    Ok(interior_norm(&diff, l_interior))
}

/// One commutation relation of the algebra, in the form
/// `[a, b] = Σ coeff · iħ · op`.
pub struct Relation {
    pub a: OpId,
    pub b: OpId,
    pub expected: Vec<(f64, OpId)>,
    pub label: &'static str,
}

/// The full table: three `[p_i, p_j] = -iħ ε_ijk L_k`, three
/// `[L_i, p_j] = iħ ε_ijk p_k`, three `[L_i, L_j] = iħ ε_ijk L_k`, and the
/// three complete-set relations `[p_i, L_i] = 0`.
pub fn so31_relations() -> Vec<Relation> {
    use OpId::*;
    vec![
        Relation { a: Px, b: Py, expected: vec![(-1.0, Lz)], label: "[px,py] = -ihbar Lz" },
        Relation { a: Py, b: Pz, expected: vec![(-1.0, Lx)], label: "[py,pz] = -ihbar Lx" },
        Relation { a: Pz, b: Px, expected: vec![(-1.0, Ly)], label: "[pz,px] = -ihbar Ly" },
        Relation { a: Lx, b: Py, expected: vec![(1.0, Pz)], label: "[Lx,py] = ihbar pz" },
        Relation { a: Ly, b: Pz, expected: vec![(1.0, Px)], label: "[Ly,pz] = ihbar px" },
        Relation { a: Lz, b: Px, expected: vec![(1.0, Py)], label: "[Lz,px] = ihbar py" },
        Relation { a: Lx, b: Ly, expected: vec![(1.0, Lz)], label: "[Lx,Ly] = ihbar Lz" },
        Relation { a: Ly, b: Lz, expected: vec![(1.0, Lx)], label: "[Ly,Lz] = ihbar Lx" },
        Relation { a: Lz, b: Lx, expected: vec![(1.0, Ly)], label: "[Lz,Lx] = ihbar Ly" },
        Relation { a: Px, b: Lx, expected: vec![], label: "[px,Lx] = 0" },
        Relation { a: Py, b: Ly, expected: vec![], label: "[py,Ly] = 0" },
        Relation { a: Pz, b: Lz, expected: vec![], label: "[pz,Lz] = 0" },
    ]
}

/// Residuals of every relation in [`so31_relations`], labeled.
pub fn so31_residual_table(
    set: &OperatorSet,
    l_interior: u32,
) -> Result<Vec<(&'static str, f64)>, OperatorError> {
    so31_relations()
        .into_iter()
        .map(|rel| {
            commutator_residual(set, rel.a, rel.b, &rel.expected, l_interior)
                .map(|res| (rel.label, res))
        })
        .collect()
}

/// Matrix exponential by scaling and squaring with a Taylor series.
pub fn matrix_exp(m: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    let norm = m.iter().map(|z| z.norm()).fold(0.0f64, f64::max) * m.nrows() as f64;
    let squarings = if norm > 0.5 { (norm / 0.5).log2().ceil() as u32 } else { 0 };
    let scaled = m / Complex64::new(2f64.powi(squarings as i32), 0.0);
    let dim = m.nrows();
    let mut result = DMatrix::<Complex64>::identity(dim, dim);
    let mut term = DMatrix::<Complex64>::identity(dim, dim);
    for k in 1..=40 {
        term = &term * &scaled / Complex64::new(k as f64, 0.0);
        result += &term;
        if term.iter().map(|z| z.norm()).fold(0.0f64, f64::max) < 1e-20 {
            break;
        }
    }
    for _ in 0..squarings {
        result = &result * &result;
    }
    result
}

/// Which triple of operators a rotation check acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OperatorFamily {
    Momentum,
    AngularMomentum,
}

/// Which component is produced from the z-component by a quarter turn.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RotationTarget {
    /// `f_x = exp(-iπL_y/2ħ) f_z exp(iπL_y/2ħ)`.
    XFromZ,
    /// `f_y = exp(iπL_x/2ħ) f_z exp(-iπL_x/2ħ)`.
    YFromZ,
}

/// Interior-block max-norm of the difference between the rotated
/// z-component and the target component.
pub fn rotation_equivalence_residual(
    set: &OperatorSet,
    family: OperatorFamily,
    target: RotationTarget,
    l_interior: u32,
) -> Result<f64, OperatorError> {
    check_interior(l_interior, set.l_max)?;
    let (fz, ft) = match (family, target) {
        (OperatorFamily::Momentum, RotationTarget::XFromZ) => (OpId::Pz, OpId::Px),
        (OperatorFamily::Momentum, RotationTarget::YFromZ) => (OpId::Pz, OpId::Py),
        (OperatorFamily::AngularMomentum, RotationTarget::XFromZ) => (OpId::Lz, OpId::Lx),
        (OperatorFamily::AngularMomentum, RotationTarget::YFromZ) => (OpId::Lz, OpId::Ly),
    };
    let half_pi = std::f64::consts::FRAC_PI_2;
    let generator = match target {
        RotationTarget::XFromZ => {
            &set.get(OpId::Ly).matrix * Complex64::new(0.0, -half_pi / set.hbar)
        }
        RotationTarget::YFromZ => {
            &set.get(OpId::Lx).matrix * Complex64::new(0.0, half_pi / set.hbar)
        }
    };
    let u = matrix_exp(&generator);
    let u_dag = u.adjoint();
    let rotated = &u * &set.get(fz).matrix * &u_dag;
    let diff = rotated - &set.get(ft).matrix;
    Ok(interior_norm(&diff, l_interior))
}

/// Joint eigenfunction of `p_z` (eigenvalue `p`) and `L_z` (eigenvalue `mħ`):
/// `ψ_{p,m}(θ,φ) = (2πħ)^{-1/2} (sinθ)^{-1} e^{-i(p/ħ) ln tan(θ/2)} ·
/// (2π)^{-1/2} e^{imφ}`.
#[derive(Debug, Clone, Copy)]
pub struct PzEigenfunction {
    pub p: f64,
    pub m: i32,
    pub hbar: f64,
}

impl PzEigenfunction {
    pub fn new(p: f64, m: i32, hbar: f64) -> Self {
        assert!(hbar > 0.0);
        Self { p, m, hbar }
    }

    fn check_theta(theta: f64) -> Result<(), OperatorError> {
        if theta <= 0.0 || theta >= std::f64::consts::PI {
            return Err(OperatorError::PoleSingularity { theta });
        }
        Ok(())
    }

    pub fn eval(&self, theta: f64, phi: f64) -> Result<Complex64, OperatorError> {
        Self::check_theta(theta)?;
        let u = (theta / 2.0).tan().ln();
        let amp = 1.0 / (2.0 * std::f64::consts::PI * self.hbar.sqrt() * theta.sin());
        Ok(Complex64::from_polar(amp, -self.p / self.hbar * u + self.m as f64 * phi))
    }

    /// Relative residual `|p_z ψ - p ψ| / |p ψ|` (or `/|ψ|ħ` when `p = 0`)
    /// with `p_z ψ` evaluated through the analytic θ-derivative of the
    /// closed form.
    pub fn eigen_residual(&self, theta: f64, phi: f64) -> Result<f64, OperatorError> {
        let psi = self.eval(theta, phi)?;
        let (st, ct) = theta.sin_cos();
        // ∂_θ ψ = ψ (-cosθ/sinθ - i (p/ħ)/sinθ); p_z = iħ(sinθ ∂_θ + cosθ).
        let dpsi = psi * Complex64::new(-ct / st, -self.p / self.hbar / st);
        let pz_psi = Complex64::new(0.0, self.hbar) * (dpsi * st + psi * ct);
        let expected = psi * self.p;
        let scale = expected.norm().max(psi.norm() * self.hbar);
        Ok((pz_psi - expected).norm() / scale)
    }
}

/// Inner product `⟨ψ_{p', m'} | ψ_{p, m}⟩` restricted to the window
/// `u ∈ [-U, U]` of the stripe coordinate, evaluated numerically from the
/// closed-form eigenfunctions with the sphere measure. For `m' = m` this
/// reproduces the Dirichlet kernel `sin((p'-p)U/ħ) / (π(p'-p))`, whose peak
/// `U/(πħ)` grows linearly with the window — the finite-window version of
/// delta normalization.
pub fn windowed_overlap(
    p_prime: f64,
    p: f64,
    m_prime: i32,
    m: i32,
    window_u: f64,
    hbar: f64,
) -> Complex64 {
    assert!(window_u > 0.0 && hbar > 0.0);
    if m_prime != m {
        // The φ integral ∫ e^{i(m-m')φ} dφ / 2π vanishes exactly.
        return Complex64::new(0.0, 0.0);
    }
    let bra = PzEigenfunction::new(p_prime, m_prime, hbar);
    let ket = PzEigenfunction::new(p, m, hbar);
    // dΩ = sinθ dθ dφ = sin²θ du dφ with sinθ = sech u; the φ integral gives 2π.
    let freq = (p - p_prime) / hbar;
    let width = oscillatory_panel_width(freq);
    let re = integrate_composite(-window_u, window_u, width, |u| {
        let th = u_to_theta(u);
        let s = th.sin();
        let prod = bra.eval(th, 0.0).unwrap().conj() * ket.eval(th, 0.0).unwrap();
        (prod * (s * s)).re
    });
    let im = integrate_composite(-window_u, window_u, width, |u| {
        let th = u_to_theta(u);
        let s = th.sin();
        let prod = bra.eval(th, 0.0).unwrap().conj() * ket.eval(th, 0.0).unwrap();
        (prod * (s * s)).im
    });
    Complex64::new(re, im) * (2.0 * std::f64::consts::PI)
}
