mod common;

use std::f64::consts::TAU;

use common::*;
use nalgebra::DMatrix;
use num_complex::Complex64;
use proptest::prelude::*;
use pyragas::eqspec::*;
use pyragas::model::{DelayFeedback, Tolerances};
use pyragas::track::TrackOptions;
use pyragas::linalg::to_complex;

fn roots(cm: &CharacteristicMatrix<f64>) -> SpectrumReport<f64> {
    find_roots(cm, &default_region(cm, &Tolerances::default()), &Tolerances::default()).unwrap()
}

fn random_cm(seed: u64, n: usize, delay: f64) -> CharacteristicMatrix<f64> {
    let mut r = rng(seed);
    let j = uniform_matrix(&mut r, n, 1.0);
    let fb = DelayFeedback::new(uniform_matrix(&mut r, n, 0.8), delay).unwrap();
    CharacteristicMatrix::new(j, &fb, 1.0).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn real_problems_have_conjugate_symmetric_roots(seed in any::<u64>(), n in 1usize..4, delay in 0.5f64..4.0) {
        let report = roots(&random_cm(seed, n, delay));
        let zs = report.expanded();
        for z in &zs {
            prop_assert!(zs.iter().any(|w| (w - z.conj()).norm() <= 1e-9 * z.norm().max(1.0)), "no partner for {z}");
        }
    }

    #[test]
    fn no_root_beyond_the_a_priori_bound(seed in any::<u64>(), n in 1usize..4, delay in 0.5f64..4.0) {
        let cm = random_cm(seed, n, delay);
        let bound = cm.jacobian_norm() + 2.0 * cm.gain_norm() + 1.0;
        for r in roots(&cm).roots {
            prop_assert!(r.value.re <= bound);
            prop_assert!(cm.relative_residual(r.value) <= 1e-8);
        }
    }

    #[test]
    fn resonating_center_is_invariant(seed in any::<u64>(), g in 1usize..3, n in 1i64..3) {
        let mut r = rng(seed);
        let delay = 1.0 + 4.0 * rand::Rng::gen::<f64>(&mut r);
        let j = resonant_jacobian(&mut r, g, delay, n);
        let fb = DelayFeedback::new(uniform_matrix(&mut r, 5, 1.0), delay).unwrap();
        let cm = CharacteristicMatrix::new(j, &fb, 1.0).unwrap();
        let check = check_resonance_invariance(&cm, n, &Tolerances::default());
        prop_assert!(check.equal);
        prop_assert_eq!(check.dim_controlled, g);
    }
}

#[test]
fn parity_of_unstable_count_is_conserved_along_the_homotopy() {
    let tol = Tolerances::default();
    for seed in 0..6 {
        let cm = random_cm(100 + seed, 2, 2.0);
        assert!(cm.jacobian().determinant().abs() > 1e-3);
        let tr = homotopy_trace(&cm.with_alpha(0.0), None, &tol, &TrackOptions::default()).unwrap();
        let parity = tr.steps[0].data.unstable_count(tol.tol_axis) % 2;
        for step in &tr.steps {
            assert_eq!(step.data.unstable_count(tol.tol_axis) % 2, parity, "seed {seed}, alpha {}", step.s);
        }
    }
}

#[test]
fn hopf_crossing_adds_two_unstable_roots_on_the_right() {
    let tol = Tolerances::default();
    let family = hopf_curves(0.05, TAU, &[0, 1], 7, 0.05).unwrap();
    for branch in &family.branches {
        for s in &branch.samples[1..6] {
            // Unstable dimension of the real 2x2 realization: roots for k and for its conjugate.
            let count = |k: Complex64| {
                [k, k.conj()]
                    .into_iter()
                    .map(|k| {
                        let cm = CharacteristicMatrix::with_complex_gain(DMatrix::from_element(1, 1, 0.05), DMatrix::from_element(1, 1, k), TAU, 1.0).unwrap();
                        roots(&cm).unstable_count(tol.tol_axis)
                    })
                    .sum::<usize>()
            };
            let eps = 1e-3 * s.gain.norm().max(1.0);
            let (right, left) = (count(s.gain + s.right_normal * eps), count(s.gain - s.right_normal * eps));
            assert_eq!(right, left + 2, "branch {}, omega {}", branch.m, s.omega);
        }
    }
}

#[test]
fn hopf_gain_puts_a_root_on_the_imaginary_axis() {
    for omega in [0.3, 1.7, 2.4] {
        let k = hopf_gain(0.05, TAU, omega);
        let cm = CharacteristicMatrix::with_complex_gain(DMatrix::from_element(1, 1, 0.05), DMatrix::from_element(1, 1, k), TAU, 1.0).unwrap();
        assert!(cm.det(Complex64::new(0.0, omega)).norm() < 1e-12);
    }
}

#[test]
fn resonant_line_is_invariant_under_scalar_gains() {
    let tol = Tolerances::default();
    let j = DMatrix::from_row_slice(2, 2, &[0.05, -1.0, 1.0, 0.05]);
    let path = GainPath::scalar(2, Complex64::new(1.0, 0.0), -0.5, 0.5);
    let tr = eigenvalue_locus(&j, TAU, &path, None, &tol, &TrackOptions::default()).unwrap();
    for step in &tr.steps {
        let on_line: Vec<_> = step.points.iter().filter(|z| z.re > tol.tol_axis && z.im > 0.0).collect();
        assert!(!on_line.is_empty());
        for z in on_line.iter().filter(|z| (z.im - 1.0).abs() < 0.5) {
            assert!((z.im - 1.0).abs() <= 1e-8, "{z} at s = {}", step.s);
        }
    }
}

#[test]
fn uncontrolled_roots_are_jacobian_eigenvalues() {
    let j = DMatrix::from_row_slice(2, 2, &[0.05, -1.0, 1.0, 0.05]);
    let fb = DelayFeedback::new(DMatrix::identity(2, 2), 3.0).unwrap();
    let report = roots(&CharacteristicMatrix::new(j.clone(), &fb, 0.0).unwrap());
    let zs = report.expanded();
    assert_eq!(zs.len(), 2);
    for z in zs {
        assert!((z - Complex64::new(0.05, z.im.signum())).norm() < 1e-12);
    }
    assert_eq!(to_complex(&j).nrows(), 2);
}
