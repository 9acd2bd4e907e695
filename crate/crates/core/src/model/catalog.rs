//! Benchmark problems with known spectra and verdicts.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::document::TWO_PI;
use super::{FieldDocument, Problem, ProblemDocument, ProblemKind};
use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::verdict::{Outcome, Rule};
use crate::vfield::CoefficientFn;

/// Where an expected fact comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    /// Stated in the published analysis this library implements.
    Literature,
    /// Follows by inspection (linear algebra, parity, premise failure).
    Elementary,
    /// Known by construction and confirmed by an independent computation in the tests.
    Oracle,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Fact {
    /// Eigenvalues of `f′(x*)`, or of `A` when the coefficient is constant, as `[re, im]`.
    LinearizationSpectrum(Vec<[f64; 2]>),
    /// Rightmost characteristic root with the gain multiplied by `gain_scale`.
    DominantRoot { gain_scale: f64, root: [f64; 2] },
    /// Floquet multipliers of the uncontrolled system.
    Multipliers(Vec<[f64; 2]>),
    /// Geometric multiplicity of the multiplier 1.
    DeterminingCenter(usize),
    Verdict { rule: Rule, outcome: Outcome },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExpectedFact {
    pub fact: Fact,
    pub provenance: Provenance,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchmarkCase {
    pub name: String,
    pub description: String,
    pub document: ProblemDocument,
    pub facts: Vec<ExpectedFact>,
}

impl BenchmarkCase {
    pub fn problem(&self) -> Problem<f64> {
        self.document.build().expect("catalog documents are valid")
    }
}

/// Names accepted in the `builtin` field of a problem document.
pub const BUILTINS: [&str; 2] = ["constructed-periodic", "constructed-periodic-degenerate"];

/// `(S, B)` of a builtin constructed-periodic coefficient.
pub fn builtin_construction(name: &str) -> Option<(DMatrix<f64>, DMatrix<f64>)> {
    let s = DMatrix::from_row_slice(2, 2, &[0.0, 0.5, -0.5, 0.0]);
    match name {
        "constructed-periodic" => Some((s, DMatrix::from_row_slice(2, 2, &[0.1, 0.2, 0.0, -0.15]))),
        "constructed-periodic-degenerate" => Some((s, DMatrix::from_row_slice(2, 2, &[0.0, 0.2, 0.0, -0.15]))),
        _ => None,
    }
}

pub fn builtin_coefficient<R: Real>(name: &str, period: R) -> Option<CoefficientFn<R>> {
    let (s, b) = builtin_construction(name)?;
    constructed_periodic(s.map(R::lit), b.map(R::lit), period).ok()
}

/// `A(t) = P′(t)P(t)⁻¹ + P(t) B P(t)⁻¹` with `P(t) = exp(S sin(2πt/T))`.
///
/// The fundamental matrix is `P(t) e^{Bt}`, so the multipliers are `e^{σ(B)T}`.
pub fn constructed_periodic<R: Real>(s: DMatrix<R>, b: DMatrix<R>, period: R) -> Result<CoefficientFn<R>> {
    let n = s.nrows();
    if s.ncols() != n || b.nrows() != n || b.ncols() != n || n == 0 {
        return Err(Error::Input("S and B must be square of equal size".into()));
    }
    if (&s + s.transpose()).norm() > R::zero() {
        return Err(Error::Input("S must be skew-symmetric".into()));
    }
    if !(period > R::zero()) {
        return Err(Error::Input("period must be positive".into()));
    }
    let w = R::two_pi() / period;
    Ok(CoefficientFn::function(n, move |t: R| {
        let phase = (w * t).sin();
        let p = (&s * phase).exp();
        let p_inv = (&s * (-phase)).exp();
        &s * (w * (w * t).cos()) + &p * &b * p_inv
    }))
}

fn fact(fact: Fact, provenance: Provenance) -> ExpectedFact {
    ExpectedFact { fact, provenance }
}

fn verdict(rule: Rule, outcome: Outcome, provenance: Provenance) -> ExpectedFact {
    fact(Fact::Verdict { rule, outcome }, provenance)
}

fn equilibrium(field: FieldDocument, dimension: usize, gain: Vec<f64>, delay: f64) -> ProblemDocument {
    ProblemDocument {
        kind: ProblemKind::Equilibrium,
        dimension,
        field,
        point: Some(vec![0.0; dimension]),
        period: None,
        gain,
        delay,
        tolerances: None,
        region: None,
    }
}

fn periodic(field: FieldDocument, dimension: usize, gain: Vec<f64>, period: f64) -> ProblemDocument {
    ProblemDocument {
        kind: ProblemKind::PeriodicLinear,
        dimension,
        field,
        point: None,
        period: Some(period),
        gain,
        delay: period,
        tolerances: None,
        region: None,
    }
}

fn case(name: &str, description: &str, document: ProblemDocument, facts: Vec<ExpectedFact>) -> BenchmarkCase {
    BenchmarkCase { name: name.into(), description: description.into(), document, facts }
}

/// The benchmark catalog.
pub fn catalog() -> Vec<BenchmarkCase> {
    use Outcome::*;
    use Provenance::*;
    use Rule::*;

    let focus = || FieldDocument::expressions(["l*x1 - w*x2", "w*x1 + l*x2"], &[("l", 0.05), ("w", 1.0)]);
    let scalar = || FieldDocument::expressions(["lambda*x1"], &[("lambda", 0.05)]);
    let t = TWO_PI;
    let e = |x: f64| [x.exp(), 0.0];

    vec![
        case(
            "scalar-equilibrium",
            "Scalar unstable equilibrium, rate 0.05, delay 2*pi, scalar gain 0.3",
            equilibrium(scalar(), 1, vec![0.3], t),
            vec![
                fact(Fact::DominantRoot { gain_scale: 0.0, root: [0.05, 0.0] }, Literature),
                verdict(OddNumberEquilibrium, Excluded, Literature),
                verdict(AnyNumberRealEquilibrium, Excluded, Elementary),
            ],
        ),
        case(
            "focus-resonant",
            "Unstable focus 0.05 +- i with delay 2*pi (resonant) and scalar gain",
            equilibrium(focus(), 2, vec![0.3, 0.0, 0.0, 0.3], t),
            vec![
                fact(Fact::LinearizationSpectrum(vec![[0.05, -1.0], [0.05, 1.0]]), Literature),
                verdict(OddNumberEquilibrium, NotExcluded, Elementary),
                verdict(AnyNumberRealEquilibrium, Excluded, Literature),
                verdict(AnyNumberComplexEquilibrium, Excluded, Literature),
            ],
        ),
        case(
            "focus-nonresonant",
            "Same focus with delay 3 (no resonance)",
            equilibrium(focus(), 2, vec![0.3, 0.0, 0.0, 0.3], 3.0),
            vec![
                fact(Fact::LinearizationSpectrum(vec![[0.05, -1.0], [0.05, 1.0]]), Literature),
                verdict(AnyNumberRealEquilibrium, NotExcluded, Elementary),
                verdict(AnyNumberComplexEquilibrium, NotExcluded, Elementary),
            ],
        ),
        case(
            "focus-rotation-gain",
            "Resonant focus with a commuting rotation-form gain of complex spectrum",
            equilibrium(focus(), 2, vec![0.2, -0.5, 0.5, 0.2], t),
            vec![
                verdict(AnyNumberRealEquilibrium, NotExcluded, Elementary),
                verdict(AnyNumberComplexEquilibrium, Excluded, Literature),
            ],
        ),
        case(
            "odd-3d",
            "Three-dimensional equilibrium with eigenvalues 1 and -1 +- i",
            equilibrium(
                FieldDocument::expressions(["x1", "-x2 - x3", "x2 - x3"], &[]),
                3,
                vec![0.4, 0.1, 0.0, -0.2, 0.3, 0.1, 0.0, 0.2, 0.5],
                t,
            ),
            vec![
                fact(Fact::LinearizationSpectrum(vec![[-1.0, -1.0], [-1.0, 1.0], [1.0, 0.0]]), Elementary),
                verdict(OddNumberEquilibrium, Excluded, Literature),
            ],
        ),
        case(
            "stable-scalar",
            "Stable scalar equilibrium without control",
            equilibrium(FieldDocument::expressions(["-x1"], &[]), 1, vec![0.0], t),
            vec![
                fact(Fact::DominantRoot { gain_scale: 1.0, root: [-1.0, 0.0] }, Elementary),
                verdict(OddNumberEquilibrium, NotExcluded, Elementary),
            ],
        ),
        case(
            "center-2d",
            "Constant rotation generator, period 2*pi: monodromy is the identity",
            periodic(FieldDocument::expressions(["-x2", "x1"], &[]), 2, vec![1.0, 2.0, 0.0, 1.0], t),
            vec![
                fact(Fact::LinearizationSpectrum(vec![[0.0, -1.0], [0.0, 1.0]]), Elementary),
                fact(Fact::Multipliers(vec![[1.0, 0.0], [1.0, 0.0]]), Elementary),
                fact(Fact::DeterminingCenter(2), Elementary),
                verdict(OddNumberPeriodic, NotExcluded, Elementary),
            ],
        ),
        case(
            "scalar-periodic",
            "Scalar rate 0.05 viewed as a 2*pi-periodic system",
            periodic(scalar(), 1, vec![0.3], t),
            vec![
                fact(Fact::Multipliers(vec![e(0.1 * std::f64::consts::PI)]), Oracle),
                fact(Fact::DeterminingCenter(0), Elementary),
                verdict(OddNumberPeriodic, Excluded, Literature),
            ],
        ),
        case(
            "diag-periodic",
            "Constant diag(0.1, 0.2) with scalar gain: two real multipliers above 1",
            periodic(FieldDocument::expressions(["0.1*x1", "0.2*x2"], &[]), 2, vec![0.5, 0.0, 0.0, 0.5], t),
            vec![
                fact(Fact::Multipliers(vec![e(0.1 * t), e(0.2 * t)]), Oracle),
                verdict(OddNumberPeriodic, NotExcluded, Elementary),
                verdict(AnyNumberRealPeriodic, Excluded, Literature),
            ],
        ),
        case(
            "constructed-periodic",
            "Time-periodic A(t) built from P(t) = exp(S sin t), B = [[0.1, 0.2], [0, -0.15]]",
            periodic(FieldDocument::builtin("constructed-periodic"), 2, vec![0.4, -0.3, 0.2, 0.1], t),
            vec![
                fact(Fact::Multipliers(vec![e(-0.15 * t), e(0.1 * t)]), Oracle),
                fact(Fact::DeterminingCenter(0), Oracle),
                verdict(OddNumberPeriodic, Excluded, Oracle),
            ],
        ),
        case(
            "constructed-periodic-degenerate",
            "Constructed A(t) with B = [[0, 0.2], [0, -0.15]]: multiplier 1 of kernel dimension 1",
            periodic(FieldDocument::builtin("constructed-periodic-degenerate"), 2, vec![0.4, -0.3, 0.2, 0.1], t),
            vec![
                fact(Fact::Multipliers(vec![e(-0.15 * t), [1.0, 0.0]]), Oracle),
                fact(Fact::DeterminingCenter(1), Oracle),
                verdict(OddNumberPeriodic, NotExcluded, Oracle),
            ],
        ),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_case_builds() {
        let cases = catalog();
        assert!(cases.len() >= 11);
        for c in &cases {
            c.problem();
        }
        let mut names: Vec<_> = cases.iter().map(|c| c.name.clone()).collect();
        names.dedup();
        assert_eq!(names.len(), cases.len());
    }

    #[test]
    fn constructed_coefficient_is_periodic_with_trace_of_b() {
        let c = builtin_coefficient::<f64>("constructed-periodic", TWO_PI).unwrap();
        for k in 0..10 {
            let t = 0.37 * k as f64;
            let a = c.at(t).unwrap();
            // P' P^{-1} is skew, so tr A(t) = tr B.
            assert!((a.trace() - (-0.05)).abs() < 1e-14);
            assert!((c.at(t + TWO_PI).unwrap() - a).norm() < 1e-12);
        }
    }

    #[test]
    fn rejects_non_skew_generator() {
        let s = DMatrix::from_row_slice(2, 2, &[0.0, 0.5, 0.5, 0.0]);
        assert!(constructed_periodic(s, DMatrix::zeros(2, 2), 1.0).is_err());
    }
}
