//! Limitation rules for equilibria.

use nalgebra::DMatrix;
use num_complex::Complex;

use super::charmat::CharacteristicMatrix;
use super::roots::default_region;
use crate::error::Result;
use crate::linalg::{commutator_norm_real, eigenvalues_real, kernel_dimension, rank_threshold, spectral_norm_real, to_complex};
use crate::model::{EquilibriumProblem, Tolerances};
use crate::scalar::Real;
use crate::verdict::{Premise, Rule, Verdict, Witness};

pub(crate) fn fmt_complex(z: Complex<f64>) -> String {
    if z.im == 0.0 {
        format!("{}", z.re)
    } else if z.im < 0.0 {
        format!("{}-{}i", z.re, -z.im)
    } else {
        format!("{}+{}i", z.re, z.im)
    }
}

pub(crate) fn fmt_list(zs: &[Complex<f64>]) -> String {
    let items: Vec<String> = zs.iter().map(|z| fmt_complex(*z)).collect();
    format!("[{}]", items.join(", "))
}

fn spectrum<R: Real>(j: &DMatrix<R>) -> Vec<Complex<f64>> {
    let mut ev: Vec<Complex<f64>> = eigenvalues_real(j).into_iter().map(|z| Complex::new(z.re.to_f64_lossy(), z.im.to_f64_lossy())).collect();
    ev.sort_by(|a, b| (b.re, b.im).partial_cmp(&(a.re, a.im)).unwrap_or(std::cmp::Ordering::Equal));
    ev
}

fn nondegenerate<R: Real>(j: &DMatrix<R>, tol: &Tolerances) -> Premise {
    let cj = to_complex(j);
    let smax = spectral_norm_real(j);
    let tau = rank_threshold(j.nrows(), smax, R::lit(tol.rank_factor));
    let kernel = kernel_dimension(&cj, tau);
    Premise::new(
        "zero is not an eigenvalue of the Jacobian",
        kernel == 0,
        format!("numerical kernel dimension of J: {kernel}"),
        Some(tau.to_f64_lossy()),
    )
}

/// Odd number of eigenvalues in the open right half plane and `0 ∉ σ(J)`.
pub fn odd_number_verdict<R: Real>(problem: &EquilibriumProblem<R>, tol: &Tolerances) -> Result<Verdict> {
    let j = problem.jacobian()?;
    let ev = spectrum(&j);
    let unstable: Vec<Complex<f64>> = ev.iter().copied().filter(|z| z.re > tol.tol_axis).collect();
    let count = unstable.len();
    let premises = vec![
        nondegenerate(&j, tol),
        Premise::new(
            "odd number of eigenvalues with positive real part",
            count % 2 == 1,
            format!("{count} eigenvalue(s) with Re > tol_axis among {}", fmt_list(&ev)),
            Some(tol.tol_axis),
        ),
    ];
    let witness = unstable.iter().find(|z| z.im == 0.0).map(|z| Witness {
        description: "real eigenvalue of the Jacobian in the right half plane".into(),
        re: z.re,
        im: z.im,
    });
    Ok(Verdict::from_premises(Rule::OddNumberEquilibrium, premises, witness))
}

/// Unstable eigenvalue `λ* + 2πni/T`, `λ* > 0`, `|n| ≤ n_max`.
fn resonant_eigenvalue<R: Real>(j: &DMatrix<R>, delay: f64, n_max: i64, tol: &Tolerances) -> (Option<(Complex<f64>, i64)>, String) {
    let ev = spectrum(j);
    let slack = tol.tol_resonance * spectral_norm_real(j).to_f64_lossy().max(1.0);
    let w = std::f64::consts::TAU / delay;
    let hit = ev.iter().filter(|z| z.re > tol.tol_axis).find_map(|z| {
        let n = (z.im / w).round();
        ((n.abs() as i64) <= n_max && (z.im - n * w).abs() <= slack).then_some((*z, n as i64))
    });
    let detail = match hit {
        Some((z, n)) => format!("eigenvalue {} lies on the line Im = 2*pi*{n}/T", fmt_complex(z)),
        None => format!("no eigenvalue of {} with Re > 0 on a line Im = 2*pi*n/T, |n| <= {n_max}", fmt_list(&ev)),
    };
    (hit, detail)
}

fn commutes<R: Real>(j: &DMatrix<R>, k: &DMatrix<R>, tol: &Tolerances) -> Premise {
    let c = commutator_norm_real(j, k).to_f64_lossy();
    let bound = tol.tol_comm * spectral_norm_real(j).to_f64_lossy() * spectral_norm_real(k).to_f64_lossy();
    Premise::new("gain commutes with the Jacobian", c <= bound, format!("||JK - KJ|| = {c:e}"), Some(bound))
}

fn resonance_premise<R: Real>(problem: &EquilibriumProblem<R>, j: &DMatrix<R>, tol: &Tolerances) -> Result<(Premise, Option<Witness>)> {
    let cm = CharacteristicMatrix::new(j.clone(), problem.feedback(), R::one())?;
    let region = default_region(&cm, tol);
    let delay = problem.feedback().delay().to_f64_lossy();
    let n_max = (region.im_max * delay / std::f64::consts::TAU).ceil() as i64;
    let (hit, detail) = resonant_eigenvalue(j, delay, n_max, tol);
    let premise = Premise::new("unstable eigenvalue resonant with the delay", hit.is_some(), detail, Some(tol.tol_resonance));
    let witness = hit.map(|(z, _)| Witness { description: "resonant unstable eigenvalue of the Jacobian".into(), re: z.re, im: z.im });
    Ok((premise, witness))
}

/// Resonant unstable eigenvalue, commuting gain with real spectrum.
pub fn any_number_real_verdict<R: Real>(problem: &EquilibriumProblem<R>, tol: &Tolerances) -> Result<Verdict> {
    let j = problem.jacobian()?;
    let k = problem.feedback().gain();
    let (resonance, witness) = resonance_premise(problem, &j, tol)?;
    let spec = eigenvalues_real(k);
    let worst = spec.iter().map(|z| z.im.abs().to_f64_lossy()).fold(0.0, f64::max);
    let bound = tol.tol_spec * spectral_norm_real(k).to_f64_lossy();
    let real = Premise::new(
        "gain has real spectrum",
        worst <= bound,
        format!("largest |Im| over the gain eigenvalues: {worst:e}"),
        Some(bound),
    );
    let premises = vec![resonance, commutes(&j, k, tol), real];
    Ok(Verdict::from_premises(Rule::AnyNumberRealEquilibrium, premises, witness))
}

/// Resonant unstable eigenvalue pair and a commuting gain.
pub fn any_number_complex_verdict<R: Real>(problem: &EquilibriumProblem<R>, tol: &Tolerances) -> Result<Verdict> {
    let j = problem.jacobian()?;
    let (resonance, witness) = resonance_premise(problem, &j, tol)?;
    let premises = vec![resonance, commutes(&j, problem.feedback().gain(), tol)];
    Ok(Verdict::from_premises(Rule::AnyNumberComplexEquilibrium, premises, witness))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::DelayFeedback;
    use crate::verdict::Outcome;
    use crate::vfield::{CoefficientFn, VectorFieldSpec};
    use nalgebra::DVector;
    use std::f64::consts::PI;

    fn problem(j: &[f64], k: &[f64], t: f64) -> EquilibriumProblem {
        let n = (j.len() as f64).sqrt() as usize;
        let field = VectorFieldSpec::linear(CoefficientFn::Constant(DMatrix::from_row_slice(n, n, j)));
        let fb = DelayFeedback::new(DMatrix::from_row_slice(n, n, k), t).unwrap();
        EquilibriumProblem::new(field, DVector::zeros(n), fb).unwrap()
    }

    #[test]
    fn odd_number_examples() {
        let tol = Tolerances::default();
        let v = odd_number_verdict(&problem(&[1.0], &[0.5], 1.0), &tol).unwrap();
        assert_eq!(v.outcome, Outcome::Excluded);
        assert_eq!(v.witness.unwrap().re, 1.0);
        let v = odd_number_verdict(&problem(&[1.0, 0.0, 0.0, 2.0], &[0.0; 4], 1.0), &tol).unwrap();
        assert_eq!(v.outcome, Outcome::NotExcluded);
        let v = odd_number_verdict(&problem(&[0.0, 0.0, 0.0, 1.0], &[0.0; 4], 1.0), &tol).unwrap();
        assert_eq!(v.outcome, Outcome::NotExcluded);
        assert!(!v.premises[0].holds && v.premises[1].holds);
    }

    const FOCUS: [f64; 4] = [0.05, -1.0, 1.0, 0.05];

    #[test]
    fn any_number_real_examples() {
        let tol = Tolerances::default();
        let scalar_gain = [0.7, 0.0, 0.0, 0.7];
        assert!(any_number_real_verdict(&problem(&FOCUS, &scalar_gain, 2.0 * PI), &tol).unwrap().is_excluded());
        let v = any_number_real_verdict(&problem(&FOCUS, &scalar_gain, 3.0), &tol).unwrap();
        assert!(!v.is_excluded() && !v.premises[0].holds);
        let v = any_number_real_verdict(&problem(&FOCUS, &[0.2, -0.5, 0.5, 0.2], 2.0 * PI), &tol).unwrap();
        assert!(!v.is_excluded() && v.premises[1].holds && !v.premises[2].holds);
    }

    #[test]
    fn any_number_complex_examples() {
        let tol = Tolerances::default();
        let rotation_gain = [0.2, -0.5, 0.5, 0.2];
        assert!(any_number_complex_verdict(&problem(&FOCUS, &rotation_gain, 2.0 * PI), &tol).unwrap().is_excluded());
        assert!(any_number_complex_verdict(&problem(&FOCUS, &rotation_gain, 4.0 * PI), &tol).unwrap().is_excluded());
        assert!(!any_number_complex_verdict(&problem(&FOCUS, &rotation_gain, 3.0), &tol).unwrap().is_excluded());
        let v = any_number_complex_verdict(&problem(&FOCUS, &[1.0, 0.0, 0.0, 2.0], 2.0 * PI), &tol).unwrap();
        assert!(!v.is_excluded() && !v.premises[1].holds);
    }
}
