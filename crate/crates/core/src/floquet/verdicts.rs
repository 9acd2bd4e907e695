//! Limitation rules for periodic systems.

use nalgebra::DMatrix;
use nalgebra::ComplexField;
use num_complex::Complex;

use super::commute::{common_eigenpair, commuting_check, CommonEigenpair};
use super::dde::dde_monodromy;
use super::decompose::floquet_decompose;
use super::multipliers::{check_determining_invariance, multipliers, MultiplierReport};
use super::ode::ode_monodromy;
use crate::eqspec::{default_region, find_roots, fmt_complex, fmt_list, CharacteristicMatrix};
use crate::error::{Error, Result};
use crate::linalg::{eigenvalues_real, spectral_norm_real, CMatrix};
use crate::model::{PeriodicLinearProblem, Tolerances};
use crate::scalar::{c64, Real};
use crate::verdict::{Premise, Rule, Verdict, Witness};

const ODE_STEPS: usize = 2048;

/// Roots of `λ = λ* + k*(1 − e^{−λT})`; excluded iff one has positive real part.
pub fn scalar_reduction_verdict<R: Real>(lambda: R, k: Complex<R>, delay: R, tol: &Tolerances) -> Result<Verdict> {
    let positive = Premise::new("lambda* is positive", lambda > R::zero(), format!("lambda* = {}", lambda.to_f64_lossy()), None);
    let j = DMatrix::from_element(1, 1, lambda);
    let gain = CMatrix::<R>::from_element(1, 1, k);
    let cm = CharacteristicMatrix::with_complex_gain(j, gain, delay, R::one())?;
    let region = default_region(&cm, tol);
    let report = find_roots(&cm, &region, tol)?;
    let roots: Vec<Complex<f64>> = report.roots.iter().map(|r| c64(r.value)).collect();
    let unstable: Vec<Complex<f64>> = roots.iter().copied().filter(|z| z.re > tol.tol_axis).collect();
    let rightmost = |zs: &mut dyn Iterator<Item = Complex<f64>>| zs.max_by(|a, b| a.re.partial_cmp(&b.re).unwrap_or(std::cmp::Ordering::Equal));
    // Prefer a real unstable root when the gain is real.
    let pick = if k.im == R::zero() {
        rightmost(&mut unstable.iter().copied().filter(|z| z.im == 0.0)).or_else(|| rightmost(&mut unstable.iter().copied()))
    } else {
        rightmost(&mut unstable.iter().copied())
    };
    let found = Premise::new(
        "reduced scalar equation has a root with positive real part",
        !unstable.is_empty(),
        format!("{} root(s) in the search region: {}", roots.len(), fmt_list(&roots)),
        Some(tol.tol_axis),
    );
    let witness = pick.map(|z| Witness { description: "unstable root of the reduced scalar equation".into(), re: z.re, im: z.im });
    Ok(Verdict::from_premises(Rule::ScalarReduction, vec![positive, found], witness))
}

fn no_multiplier_one<R: Real>(report: &MultiplierReport<R>, tol: &Tolerances) -> Premise {
    let algebraic: usize = report
        .multipliers
        .iter()
        .filter(|m| (m.value - Complex::new(R::one(), R::zero())).modulus() <= R::lit(tol.tol_one))
        .map(|m| m.algebraic)
        .sum();
    Premise::new(
        "no Floquet multiplier 1 without control",
        algebraic == 0,
        format!("multiplier 1 with algebraic multiplicity {algebraic}, geometric {}", report.at_one),
        Some(tol.tol_one),
    )
}

fn multiplier_list<R: Real>(report: &MultiplierReport<R>) -> String {
    fmt_list(&report.expanded().into_iter().map(c64).collect::<Vec<_>>())
}

/// Largest real controlled multiplier above 1 of the discretized monodromy operator.
fn controlled_witness<R: Real>(report: &MultiplierReport<R>, tol: &Tolerances, description: &str) -> Option<Witness> {
    report
        .multipliers
        .iter()
        .filter(|m| report.is_real(m, tol) && m.value.re > R::one())
        .map(|m| c64(m.value))
        .max_by(|a, b| a.re.partial_cmp(&b.re).unwrap_or(std::cmp::Ordering::Equal))
        .map(|z| Witness { description: description.into(), re: z.re, im: 0.0 })
}

/// Floquet verdicts for the controlled periodic system, in a fixed order:
/// determining-center bookkeeping, odd-number rule, commuting rules.
pub fn periodic_verdicts<R: Real>(problem: &PeriodicLinearProblem<R>, nodes: usize, tol: &Tolerances) -> Result<Vec<Verdict>> {
    let ode = ode_monodromy(problem, ODE_STEPS)?;
    let free = multipliers(&ode, tol)?;
    let controlled = multipliers(&dde_monodromy(problem, R::one(), nodes, tol)?, tol)?;
    let non_degenerate = no_multiplier_one(&free, tol);
    let mut out = Vec::with_capacity(4);

    let center = match check_determining_invariance(problem, R::one(), nodes, tol) {
        Ok(c) => Premise::new(
            "multiplicity of the multiplier 1 is preserved",
            c.equal,
            format!("without control {}, with control {} (M = {nodes}) and {} (M = {})", c.g_ode, c.g_dde, c.g_dde_refined, 2 * nodes),
            Some(tol.tol_one),
        ),
        Err(Error::Inconclusive(msg)) => Premise::new("multiplicity of the multiplier 1 is preserved", false, format!("inconclusive: {msg}"), Some(tol.tol_one)),
        Err(e) => return Err(e),
    };
    out.push(Verdict::informational(Rule::DeterminingCenter, vec![non_degenerate.clone(), center], None));

    let odd = Premise::new(
        "odd number of real multipliers above 1 without control",
        free.real_above_one % 2 == 1,
        format!("{} real multiplier(s) above 1 among {}", free.real_above_one, multiplier_list(&free)),
        Some(tol.unit_band),
    );
    let witness = controlled_witness(&controlled, tol, "real multiplier above 1 of the discretized controlled monodromy");
    out.push(Verdict::from_premises(Rule::OddNumberPeriodic, vec![non_degenerate, odd], witness));

    let (real, complex) = commuting_verdicts(problem, &ode, &free, tol)?;
    out.push(real);
    out.push(complex);
    Ok(out)
}

fn commuting_verdicts<R: Real>(
    problem: &PeriodicLinearProblem<R>,
    ode: &super::ode::MonodromyOde<R>,
    free: &MultiplierReport<R>,
    tol: &Tolerances,
) -> Result<(Verdict, Verdict)> {
    let gain = problem.feedback().gain();
    let period = problem.period();
    let unstable = free
        .multipliers
        .iter()
        .filter(|m| free.is_real(m, tol) && m.value.re > R::one() + R::lit(tol.unit_band))
        .max_by(|a, b| a.value.re.partial_cmp(&b.value.re).unwrap_or(std::cmp::Ordering::Equal))
        .copied();
    let has_unstable = Premise::new(
        "real multiplier above 1 without control",
        unstable.is_some(),
        format!("multipliers without control: {}", multiplier_list(free)),
        Some(tol.unit_band),
    );

    let fd = floquet_decompose(ode, tol)?;
    let cc = commuting_check(&fd, gain, tol)?;
    let comm_b = Premise::new("gain commutes with B", cc.commutes_b, format!("relative ||KB - BK|| = {:e}", cc.residual_b), Some(cc.tolerance));
    let comm_p = Premise::new(
        "gain commutes with P(t)",
        cc.commutes_p,
        format!("largest relative ||KP(t) - P(t)K|| over one period = {:e}", cc.residual_p),
        Some(cc.tolerance),
    );

    // Common eigenpairs for λ* = log(μ*)/T, reduced to the scalar equation.
    let mut pairs: Vec<CommonEigenpair<R>> = Vec::new();
    let mut kernel_odd = false;
    if let (Some(mu), true, true) = (unstable, cc.commutes_b, cc.commutes_p) {
        let lambda = Complex::new(mu.value.re.ln() / period, R::zero());
        let mut loose = tol.clone();
        loose.tol_comm = tol.tol_comm_floquet;
        pairs = common_eigenpair(&fd.b, &crate::linalg::to_complex(gain), lambda, &loose)?;
        kernel_odd = mu.geometric % 2 == 1;
    }

    let spec = eigenvalues_real(gain);
    let worst = spec.iter().map(|z| z.im.abs().to_f64_lossy()).fold(0.0, f64::max);
    let bound = tol.tol_spec * spectral_norm_real(gain).to_f64_lossy().max(1.0);
    let real_spec = worst <= bound;
    let spectrum = Premise::new(
        "gain has real spectrum (waived for an odd-dimensional unstable eigenspace)",
        real_spec || kernel_odd,
        format!("largest |Im| over the gain eigenvalues: {worst:e}; unstable eigenspace odd-dimensional: {kernel_odd}"),
        Some(bound),
    );

    let reduce = |prefer_real: bool| -> Result<Option<Witness>> {
        let Some(unstable) = unstable else { return Ok(None) };
        let lambda = unstable.value.re.ln() / period;
        let chosen = pairs
            .iter()
            .find(|p| !prefer_real || p.k_is_real(tol))
            .or_else(|| pairs.first());
        let Some(pair) = chosen else { return Ok(None) };
        let mut k = pair.k;
        if pair.k_is_real(tol) {
            k.im = R::zero();
        }
        let v = scalar_reduction_verdict(lambda, k, period, tol)?;
        Ok(v.witness.map(|w| {
            let mu = Complex::new(w.re * period.to_f64_lossy(), w.im * period.to_f64_lossy()).exp();
            Witness {
                description: format!(
                    "controlled multiplier e^(lambda T) from the reduced scalar equation with k* = {}, root lambda = {}",
                    fmt_complex(c64(k)),
                    fmt_complex(Complex::new(w.re, w.im))
                ),
                re: mu.re,
                im: mu.im,
            }
        }))
    };

    let real = Verdict::from_premises(
        Rule::AnyNumberRealPeriodic,
        vec![has_unstable.clone(), spectrum, comm_b.clone(), comm_p.clone()],
        reduce(true)?,
    );
    let complex = Verdict::from_premises(Rule::AnyNumberComplexPeriodic, vec![has_unstable, comm_b, comm_p], reduce(false)?);
    Ok((real, complex))
}
