//! Problem definitions, the JSON problem document and the benchmark catalog.

mod catalog;
mod document;
mod tolerances;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex;
use serde::{Deserialize, Serialize};

pub use catalog::{
    builtin_coefficient, builtin_construction, catalog, constructed_periodic, BenchmarkCase, ExpectedFact, Fact, Provenance, BUILTINS,
};
pub use document::{FieldDocument, ProblemDocument, ProblemKind};
pub use tolerances::Tolerances;

use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::vfield::{CoefficientFn, VectorFieldSpec};

fn check_square<R: Real>(m: &DMatrix<R>, what: &str) -> Result<()> {
    if m.nrows() == 0 || m.nrows() != m.ncols() {
        return Err(Error::Input(format!("{what} must be square with N >= 1, got {}x{}", m.nrows(), m.ncols())));
    }
    if !m.iter().all(|x| x.is_finite()) {
        return Err(Error::Input(format!("{what} has non-finite entries")));
    }
    Ok(())
}

/// Pyragas term `K [x(t) − x(t−T)]`.
#[derive(Debug, Clone, PartialEq)]
pub struct DelayFeedback<R: Real = f64> {
    gain: DMatrix<R>,
    delay: R,
}

impl<R: Real> DelayFeedback<R> {
    pub fn new(gain: DMatrix<R>, delay: R) -> Result<Self> {
        check_square(&gain, "gain")?;
        if !(delay.is_finite() && delay > R::zero()) {
            return Err(Error::Input(format!("delay must be positive and finite, got {delay:?}")));
        }
        Ok(Self { gain, delay })
    }

    /// Accepts a complex matrix only if every imaginary part is exactly zero.
    pub fn from_complex(gain: &DMatrix<Complex<R>>, delay: R) -> Result<Self> {
        if let Some(z) = gain.iter().find(|z| z.im != R::zero()) {
            return Err(Error::Input(format!("gain must be real, found entry {z:?}")));
        }
        Self::new(gain.map(|z| z.re), delay)
    }

    /// Gain from `N²` row-major entries.
    pub fn from_row_major(dimension: usize, entries: &[f64], delay: f64) -> Result<Self> {
        if dimension == 0 || dimension.checked_mul(dimension) != Some(entries.len()) {
            return Err(Error::Input(format!(
                "gain needs dimension² row-major entries for dimension {dimension}, got {}",
                entries.len()
            )));
        }
        let gain = DMatrix::from_row_slice(dimension, dimension, entries).map(R::lit);
        Self::new(gain, R::lit(delay))
    }

    pub fn gain(&self) -> &DMatrix<R> {
        &self.gain
    }

    pub fn delay(&self) -> R {
        self.delay
    }

    pub fn dimension(&self) -> usize {
        self.gain.nrows()
    }

    /// Same delay, gain multiplied by `s`.
    pub fn scaled(&self, s: R) -> Self {
        Self { gain: &self.gain * s, delay: self.delay }
    }
}

/// Equilibrium `x*` of `ẋ = f(x, t)` under Pyragas control.
#[derive(Debug, Clone)]
pub struct EquilibriumProblem<R: Real = f64> {
    field: VectorFieldSpec<R>,
    point: DVector<R>,
    feedback: DelayFeedback<R>,
}

impl<R: Real> EquilibriumProblem<R> {
    /// Checks dimensions only; see [`validate_equilibrium`] for the residual.
    pub fn new(field: VectorFieldSpec<R>, point: DVector<R>, feedback: DelayFeedback<R>) -> Result<Self> {
        let n = field.dimension();
        if point.len() != n || feedback.dimension() != n {
            return Err(Error::Input(format!(
                "dimension mismatch: field {n}, point {}, gain {}",
                point.len(),
                feedback.dimension()
            )));
        }
        if !point.iter().all(|x| x.is_finite()) {
            return Err(Error::Input("equilibrium point has non-finite entries".into()));
        }
        Ok(Self { field, point, feedback })
    }

    pub fn field(&self) -> &VectorFieldSpec<R> {
        &self.field
    }

    pub fn point(&self) -> &DVector<R> {
        &self.point
    }

    pub fn feedback(&self) -> &DelayFeedback<R> {
        &self.feedback
    }

    pub fn dimension(&self) -> usize {
        self.point.len()
    }

    /// `f′(x*)` at `t = 0`.
    pub fn jacobian(&self) -> Result<DMatrix<R>> {
        self.field.jacobian(&self.point, R::zero())
    }

    pub fn with_feedback(&self, feedback: DelayFeedback<R>) -> Result<Self> {
        Self::new(self.field.clone(), self.point.clone(), feedback)
    }
}

/// `max_t ‖f(x*, t)‖` over nine sample times spanning one delay.
pub fn validate_equilibrium<R: Real>(problem: &EquilibriumProblem<R>) -> Result<R> {
    let t_end = problem.feedback.delay;
    let mut worst = R::zero();
    for k in 0..=8 {
        let t = t_end * R::from_usize_lossy(k) / R::lit(8.0);
        let r = problem.field.eval(&problem.point, t)?.norm();
        worst = worst.max(r);
    }
    Ok(worst)
}

/// Linear time-periodic system `ẏ = A(t) y` with delay equal to the period.
#[derive(Debug, Clone)]
pub struct PeriodicLinearProblem<R: Real = f64> {
    coefficient: CoefficientFn<R>,
    period: R,
    feedback: DelayFeedback<R>,
}

impl<R: Real> PeriodicLinearProblem<R> {
    pub fn new(coefficient: CoefficientFn<R>, period: R, feedback: DelayFeedback<R>) -> Result<Self> {
        if !(period.is_finite() && period > R::zero()) {
            return Err(Error::Input(format!("period must be positive and finite, got {period:?}")));
        }
        if feedback.delay != period {
            return Err(Error::Input(format!(
                "delay {:?} must equal the period {period:?}",
                feedback.delay
            )));
        }
        let n = coefficient.dimension();
        if n != feedback.dimension() {
            return Err(Error::Input(format!("dimension mismatch: A(t) is {n}x{n}, gain {}", feedback.dimension())));
        }
        let tol = R::tol(1e-8, 1e3);
        for k in 0..8 {
            let t = period * R::lit(k as f64 / 8.0 + 0.0371);
            let a0 = coefficient.at(t)?;
            if a0.nrows() != n || a0.ncols() != n {
                return Err(Error::Input(format!("A(t) changes shape at t = {t:?}")));
            }
            let a1 = coefficient.at(t + period)?;
            if (&a1 - &a0).norm() > tol * (R::one() + a0.norm()) {
                return Err(Error::Input(format!("A(t) is not periodic with period {period:?} (checked at t = {t:?})")));
            }
        }
        Ok(Self { coefficient, period, feedback })
    }

    pub fn coefficient(&self) -> &CoefficientFn<R> {
        &self.coefficient
    }

    pub fn period(&self) -> R {
        self.period
    }

    pub fn feedback(&self) -> &DelayFeedback<R> {
        &self.feedback
    }

    pub fn dimension(&self) -> usize {
        self.coefficient.dimension()
    }

    pub fn with_gain(&self, gain: DMatrix<R>) -> Result<Self> {
        Self::new(self.coefficient.clone(), self.period, DelayFeedback::new(gain, self.period)?)
    }
}

#[derive(Debug, Clone)]
pub enum Problem<R: Real = f64> {
    Equilibrium(EquilibriumProblem<R>),
    PeriodicLinear(PeriodicLinearProblem<R>),
}

impl<R: Real> Problem<R> {
    pub fn feedback(&self) -> &DelayFeedback<R> {
        match self {
            Problem::Equilibrium(p) => p.feedback(),
            Problem::PeriodicLinear(p) => p.feedback(),
        }
    }

    pub fn dimension(&self) -> usize {
        self.feedback().dimension()
    }
}

/// Search rectangle `re_min ≤ Re λ ≤ re_max`, `|Im λ| ≤ im_max`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Region {
    pub re_min: f64,
    pub re_max: f64,
    pub im_max: f64,
}

impl Region {
    pub fn new(re_min: f64, re_max: f64, im_max: f64) -> Result<Self> {
        let r = Self { re_min, re_max, im_max };
        r.validate()?;
        Ok(r)
    }

    pub fn validate(&self) -> Result<()> {
        let finite = self.re_min.is_finite() && self.re_max.is_finite() && self.im_max.is_finite();
        if !finite || self.re_min >= self.re_max || self.im_max <= 0.0 {
            return Err(Error::Input(format!("invalid region {self:?}")));
        }
        Ok(())
    }

    pub fn contains(&self, re: f64, im: f64) -> bool {
        re >= self.re_min && re <= self.re_max && im.abs() <= self.im_max
    }
}
