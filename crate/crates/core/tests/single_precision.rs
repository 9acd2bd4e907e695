//! The analyses instantiated with `f32`.

use nalgebra::{DMatrix, DVector};
use pyragas::eqspec::{default_region, find_roots, CharacteristicMatrix};
use pyragas::floquet::{multipliers, ode_monodromy};
use pyragas::model::{DelayFeedback, PeriodicLinearProblem, Tolerances};
use pyragas::sim::{growth_rate, integrate, HistorySegment};
use pyragas::vfield::{CoefficientFn, VectorFieldSpec};

const T: f32 = std::f32::consts::TAU;

#[test]
fn scalar_root_in_single_precision() {
    let tol = Tolerances::single_precision();
    let fb = DelayFeedback::<f32>::new(DMatrix::from_element(1, 1, 0.3), T).unwrap();
    let cm = CharacteristicMatrix::new(DMatrix::from_element(1, 1, 0.05f32), &fb, 1.0).unwrap();
    let dom = find_roots(&cm, &default_region(&cm, &tol), &tol).unwrap().dominant().unwrap().value;
    assert!((dom.re - 0.306_185_66).abs() < 1e-4 && dom.im.abs() < 1e-4);
}

#[test]
fn ode_multipliers_in_single_precision() {
    let a = CoefficientFn::Constant(DMatrix::from_row_slice(2, 2, &[0.1f32, 0.0, 0.0, -0.2]));
    let p = PeriodicLinearProblem::new(a, T, DelayFeedback::new(DMatrix::zeros(2, 2), T).unwrap()).unwrap();
    let r = multipliers(&ode_monodromy(&p, 512).unwrap(), &Tolerances::single_precision()).unwrap();
    assert_eq!(r.real_above_one, 1);
    assert!((r.multipliers[0].value.re - (0.1 * T).exp()).abs() < 1e-4);
}

#[test]
fn simulation_in_single_precision() {
    let f = VectorFieldSpec::<f32>::parse(&["0.05*x1"], &Default::default()).unwrap();
    let fb = DelayFeedback::new(DMatrix::from_element(1, 1, 0.3f32), T).unwrap();
    let h = HistorySegment::constant(T, 100, DVector::from_element(1, 1e-3f32)).unwrap();
    let traj = integrate(&f, &fb, &h, 20.0 * T, 0.05).unwrap();
    let g = growth_rate(&traj, &DVector::zeros(1), 8.0 * T).unwrap();
    assert!((g.rate.unwrap() - 0.306).abs() < 0.03);
}
