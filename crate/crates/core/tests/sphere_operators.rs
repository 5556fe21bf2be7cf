//! Integration checks of the sphere operator algebra: matrix-element
//! anchors, commutation relations, rotation equivalence, and the `p_z`
//! eigenfunctions.

use approx::{assert_abs_diff_eq, assert_relative_eq};
use geomom::harmonics::{harmonic, HarmonicIndex};
use geomom::operators::{
    apply_operator, apply_to_harmonic, operator_matrix, rotation_equivalence_residual,
    so31_residual_table, windowed_overlap, OpId, OperatorError, OperatorFamily, OperatorSet,
    PzEigenfunction, RotationTarget, SphereGrid,
};
use num_complex::Complex64;
use proptest::prelude::*;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const PI: f64 = std::f64::consts::PI;

#[test]
fn momentum_matrix_element_anchors() {
    let hbar = 1.0;
    let pz = operator_matrix(OpId::Pz, 3, hbar);
    // ⟨Y_{1,0}| p_z |Y_{0,0}⟩ = iħ/√3.
    let got = pz.entry(HarmonicIndex::new(1, 0), HarmonicIndex::new(0, 0));
    let want = Complex64::new(0.0, hbar / 3.0f64.sqrt());
    assert_abs_diff_eq!((got - want).norm(), 0.0, epsilon = 1e-12);
    // Hermitian partner: ⟨Y_{0,0}| p_z |Y_{1,0}⟩ is the conjugate.
    let partner = pz.entry(HarmonicIndex::new(0, 0), HarmonicIndex::new(1, 0));
    assert_abs_diff_eq!((partner - want.conj()).norm(), 0.0, epsilon = 1e-12);

    // ⟨Y_{1,1}| p_x |Y_{0,0}⟩ = -iħ/√6.
    let px = operator_matrix(OpId::Px, 3, hbar);
    let got = px.entry(HarmonicIndex::new(1, 1), HarmonicIndex::new(0, 0));
    let want = Complex64::new(0.0, -hbar / 6.0f64.sqrt());
    assert_abs_diff_eq!((got - want).norm(), 0.0, epsilon = 1e-12);
    // And the m = -1 partner carries the same magnitude.
    let got = px.entry(HarmonicIndex::new(1, -1), HarmonicIndex::new(0, 0));
    assert_abs_diff_eq!(got.norm(), 1.0 / 6.0f64.sqrt(), epsilon = 1e-12);
}

#[test]
fn operator_matrices_are_hermitian_with_clean_selection_rules() {
    for hbar in [1.0, 0.7] {
        let set = OperatorSet::new(8, hbar);
        for op in [OpId::Px, OpId::Py, OpId::Pz, OpId::Lx, OpId::Ly, OpId::Lz, OpId::L2] {
            let m = set.get(op);
            assert!(
                m.hermiticity_defect() <= 1e-10 * hbar.max(1.0),
                "{op:?} hermiticity defect {:.2e}",
                m.hermiticity_defect()
            );
            assert!(
                m.selection_defect() <= 1e-10 * hbar.max(1.0),
                "{op:?} selection defect {:.2e}",
                m.selection_defect()
            );
        }
    }
}

#[test]
fn angular_momentum_matrices_are_diagonal_in_their_quantum_numbers() {
    let hbar = 1.0;
    let lz = operator_matrix(OpId::Lz, 6, hbar);
    let l2 = operator_matrix(OpId::L2, 6, hbar);
    for flat in 0..lz.dim() {
        let hi = HarmonicIndex::from_flat(flat);
        let got = lz.entry(hi, hi);
        assert_abs_diff_eq!(got.re, hi.m as f64 * hbar, epsilon = 1e-12);
        assert_abs_diff_eq!(got.im, 0.0, epsilon = 1e-12);
        let got = l2.entry(hi, hi);
        let want = (hi.l * (hi.l + 1)) as f64 * hbar * hbar;
        assert_abs_diff_eq!(got.re, want, epsilon = 1e-10);
    }
}

#[test]
fn matrices_scale_linearly_in_hbar() {
    let base = operator_matrix(OpId::Py, 3, 1.0);
    let scaled = operator_matrix(OpId::Py, 3, 2.5);
    let diff = (&scaled.matrix - &base.matrix * Complex64::from(2.5))
        .iter()
        .map(|z| z.norm())
        .fold(0.0f64, f64::max);
    assert!(diff <= 1e-12, "hbar scaling defect {diff:.2e}");
}

#[test]
fn commutator_table_closes_on_the_interior_block() {
    for hbar in [1.0, 0.5] {
        let set = OperatorSet::new(8, hbar);
        let table = so31_residual_table(&set, 6).unwrap();
        assert_eq!(table.len(), 12);
        let budget = 1e-8 * hbar * hbar;
        for (label, residual) in table {
            assert!(residual <= budget, "{label}: residual {residual:.2e} > {budget:.2e}");
        }
    }
}

#[test]
fn rotation_carries_z_components_into_x_and_y() {
    let set = OperatorSet::new(8, 1.0);
    for family in [OperatorFamily::Momentum, OperatorFamily::AngularMomentum] {
        for target in [RotationTarget::XFromZ, RotationTarget::YFromZ] {
            let residual = rotation_equivalence_residual(&set, family, target, 6).unwrap();
            assert!(
                residual <= 1e-8,
                "{family:?}/{target:?}: residual {residual:.2e}"
            );
        }
    }
}

#[test]
fn truncation_and_grid_guards() {
    let set = OperatorSet::new(4, 1.0);
    // Interior l = 3 needs l_max >= 5.
    assert!(matches!(
        so31_residual_table(&set, 3),
        Err(OperatorError::TruncationTooTight { .. })
    ));
    assert!(so31_residual_table(&set, 2).is_ok());

    // Colatitude count must exceed the band limit.
    let coarse = SphereGrid::with_sizes(4, 4, 20);
    let samples = coarse.sample(|th, ph| harmonic(2, 1, th, ph));
    assert!(matches!(
        apply_operator(&coarse, OpId::Pz, &samples, 1.0),
        Err(OperatorError::GridTooCoarse { .. })
    ));
    // Azimuthal count must exceed 2 l_max + 1.
    let coarse = SphereGrid::with_sizes(4, 10, 9);
    let samples = coarse.sample(|th, ph| harmonic(2, 1, th, ph));
    assert!(matches!(
        apply_operator(&coarse, OpId::Pz, &samples, 1.0),
        Err(OperatorError::GridTooCoarse { .. })
    ));
}

#[test]
fn spectral_application_matches_analytic_on_random_superpositions() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let l_max = 5u32;
    let grid = SphereGrid::for_band_limit(l_max + 1);
    let dim = HarmonicIndex::count(l_max);
    let coeffs: Vec<Complex64> = (0..dim)
        .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
        .collect();
    let field = |th: f64, ph: f64| -> Complex64 {
        (0..dim)
            .map(|flat| {
                let hi = HarmonicIndex::from_flat(flat);
                coeffs[flat] * harmonic(hi.l, hi.m, th, ph)
            })
            .sum()
    };
    let samples = grid.sample(field);
    for op in [OpId::Px, OpId::Lz, OpId::L2] {
        let applied = apply_operator(&grid, op, &samples, 1.0).unwrap();
        let direct = grid.sample(|th, ph| {
            (0..dim)
                .map(|flat| {
                    let hi = HarmonicIndex::from_flat(flat);
                    coeffs[flat] * apply_to_harmonic(op, hi.l, hi.m, th, ph, 1.0)
                })
                .sum()
        });
        let worst = applied
            .iter()
            .zip(&direct)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0f64, f64::max);
        assert!(worst <= 1e-9, "{op:?}: max deviation {worst:.2e}");
    }
}

#[test]
fn pz_eigenfunctions_satisfy_the_eigenvalue_equation() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for _ in 0..100 {
        let theta = rng.random_range(0.05..PI - 0.05);
        let phi = rng.random_range(0.0..2.0 * PI);
        let p = rng.random_range(-5.0..5.0);
        let m = rng.random_range(-3..=3);
        let hbar = *[0.5, 1.0, 2.0].iter().nth(rng.random_range(0..3)).unwrap();
        let psi = PzEigenfunction::new(p, m, hbar);
        let residual = psi.eigen_residual(theta, phi).unwrap();
        assert!(
            residual <= 1e-10,
            "p={p:.3} m={m} hbar={hbar} at ({theta:.3},{phi:.3}): residual {residual:.2e}"
        );
    }
    // Value anchor: at θ = π/2, p = 0, m = 0 the amplitude is 1/(2π√ħ).
    let psi = PzEigenfunction::new(0.0, 0, 1.0);
    let v = psi.eval(PI / 2.0, 0.0).unwrap();
    assert_relative_eq!(v.re, 1.0 / (2.0 * PI), epsilon = 1e-12);
    assert_abs_diff_eq!(v.im, 0.0, epsilon = 1e-15);
    // Poles are rejected.
    assert!(matches!(
        psi.eval(0.0, 0.0),
        Err(OperatorError::PoleSingularity { .. })
    ));
}

#[test]
fn windowed_overlaps_form_a_dirichlet_kernel() {
    // Diagonal: the overlap grows linearly with the window, slope 1/(πħ).
    for hbar in [1.0, 0.5] {
        for window in [5.0, 10.0, 20.0] {
            let peak = windowed_overlap(0.7, 0.7, 1, 1, window, hbar);
            assert_relative_eq!(peak.re, window / (PI * hbar), max_relative = 1e-10);
            assert_abs_diff_eq!(peak.im, 0.0, epsilon = 1e-12);
        }
    }
    // Off-diagonal: sin((p'-p)U/ħ) / (π(p'-p)).
    let got = windowed_overlap(1.0, 0.5, 0, 0, 10.0, 1.0);
    let want = (0.5f64 * 10.0).sin() / (PI * 0.5);
    assert_relative_eq!(got.re, want, max_relative = 1e-9);
    assert_abs_diff_eq!(got.im, 0.0, epsilon = 1e-12);
    // Different azimuthal numbers are exactly orthogonal.
    let zero = windowed_overlap(1.0, 0.5, 2, 1, 10.0, 1.0);
    assert_eq!(zero, Complex64::new(0.0, 0.0));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn pz_anchor_scales_with_hbar(hbar in 0.2f64..2.0) {
        let pz = operator_matrix(OpId::Pz, 2, hbar);
        let got = pz.entry(HarmonicIndex::new(1, 0), HarmonicIndex::new(0, 0));
        let want = Complex64::new(0.0, hbar / 3.0f64.sqrt());
        prop_assert!((got - want).norm() <= 1e-12 * (1.0 + hbar));
    }

    #[test]
    fn eigen_residual_holds_for_random_parameters(
        p in -8.0f64..8.0,
        m in -5i32..=5,
        theta in 0.1f64..3.0,
        phi in 0.0f64..6.2,
    ) {
        let psi = PzEigenfunction::new(p, m, 1.0);
        prop_assert!(psi.eigen_residual(theta, phi).unwrap() <= 1e-10);
    }
}
