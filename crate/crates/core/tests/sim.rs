mod common;

use std::f64::consts::TAU;

use common::*;
use nalgebra::DVector;
use num_complex::Complex64;
use pyragas::eqspec::{default_region, find_roots, CharacteristicMatrix};
use pyragas::model::Tolerances;
use pyragas::sim::*;
use pyragas::EquilibriumProblem;

fn dominant(p: &EquilibriumProblem) -> Complex64 {
    let tol = Tolerances::default();
    let cm = CharacteristicMatrix::from_problem(p, 1.0).unwrap();
    find_roots(&cm, &default_region(&cm, &tol), &tol).unwrap().dominant().unwrap().value
}

/// History `Re(e^{μθ} v)` is a mode; the solution must stay `Re(e^{μt} v)`.
fn check_mode(p: &EquilibriumProblem, v: &[Complex64]) {
    let mu = dominant(p);
    let mode = |t: f64| DVector::from_iterator(v.len(), v.iter().map(|c| ((mu * t).exp() * c).re));
    let dt = 0.01;
    let (_, per_delay) = step_size(TAU, dt).unwrap();
    let history = HistorySegment::from_fn(TAU, per_delay, mode).unwrap();
    let traj = integrate(p.field(), p.feedback(), &history, 5.0 * TAU, dt).unwrap();
    let scale = (mu.re * 5.0 * TAU).exp();
    for (i, x) in traj.states().iter().enumerate() {
        let t = traj.time(i);
        assert!((x - mode(t)).amax() <= 1e-6 * scale, "t = {t}: {x} vs {}", mode(t));
    }
}

#[test]
fn linear_fields_follow_characteristic_modes() {
    check_mode(&equilibrium("scalar-equilibrium"), &[Complex64::new(1.0, 0.0)]);
    check_mode(&equilibrium("focus-resonant"), &[Complex64::new(1.0, 0.0), Complex64::new(0.0, -1.0)]);
}

#[test]
fn perturbed_runs_are_reproducible() {
    let p = equilibrium("focus-rotation-gain");
    let run = |seed| {
        let h = HistorySegment::perturbed(p.point(), TAU, 200, 1e-6, seed).unwrap();
        integrate(p.field(), p.feedback(), &h, 3.0 * TAU, 0.05).unwrap()
    };
    assert_eq!(run(5), run(5));
    assert_ne!(run(5), run(6));
}

#[test]
fn growth_rates_match_dominant_roots() {
    for name in ["scalar-equilibrium", "focus-resonant", "focus-rotation-gain", "odd-3d"] {
        let p = equilibrium(name);
        let h = HistorySegment::perturbed(p.point(), TAU, 629, 1e-6, 11).unwrap();
        let traj = integrate(p.field(), p.feedback(), &h, 40.0 * TAU, 0.01).unwrap();
        assert!(traj.blow_up.is_none());
        let g = growth_rate(&traj, p.point(), 20.0 * TAU).unwrap();
        let want = dominant(&p).re;
        let rate = g.rate.unwrap();
        assert_eq!(g.stability, Stability::Growing);
        assert!((rate - want).abs() <= 0.1 * want, "{name}: {rate} vs {want}");
    }
}

#[test]
fn stable_scalar_decays() {
    let p = equilibrium("stable-scalar");
    let h = HistorySegment::perturbed(p.point(), TAU, 629, 1e-6, 3).unwrap();
    let traj = integrate(p.field(), p.feedback(), &h, 40.0 * TAU, 0.01).unwrap();
    let g = growth_rate(&traj, p.point(), 20.0 * TAU).unwrap();
    assert_eq!(g.stability, Stability::Decaying);
    assert!((g.rate.unwrap() + 1.0).abs() < 1e-3);
}
