//! Fundamental matrices of `ẏ = (A(t) + S) y` by classical Runge–Kutta.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::model::PeriodicLinearProblem;
use crate::scalar::Real;
use crate::vfield::CoefficientFn;

/// Right-hand side matrix `A(t) + shift`.
pub(crate) fn system_matrix<R: Real>(coef: &CoefficientFn<R>, shift: Option<&DMatrix<R>>, t: R) -> Result<DMatrix<R>> {
    let a = coef.at(t)?;
    Ok(match shift {
        Some(s) => a + s,
        None => a,
    })
}

fn rk4_step<R: Real>(coef: &CoefficientFn<R>, shift: Option<&DMatrix<R>>, t: R, h: R, y: &DMatrix<R>) -> Result<DMatrix<R>> {
    let half = R::lit(0.5);
    let a0 = system_matrix(coef, shift, t)?;
    let a1 = system_matrix(coef, shift, t + half * h)?;
    let a2 = system_matrix(coef, shift, t + h)?;
    let k1 = &a0 * y;
    let k2 = &a1 * (y + &k1 * (half * h));
    let k3 = &a1 * (y + &k2 * (half * h));
    let k4 = &a2 * (y + &k3 * h);
    Ok(y + (k1 + (k2 + k3) * R::lit(2.0) + k4) * (h / R::lit(6.0)))
}

/// `Y(t_k)` with `Y(times[0]) = I`, stepping each interval with steps no longer than `h_max`
/// and at least `min_substeps` per interval.
pub(crate) fn fundamental_at<R: Real>(
    coef: &CoefficientFn<R>,
    shift: Option<&DMatrix<R>>,
    times: &[R],
    h_max: R,
    min_substeps: usize,
) -> Result<Vec<DMatrix<R>>> {
    let n = coef.dimension();
    let mut y = DMatrix::<R>::identity(n, n);
    let mut out = Vec::with_capacity(times.len());
    out.push(y.clone());
    for w in times.windows(2) {
        let len = w[1] - w[0];
        let sub = ((len / h_max).ceil().to_f64_lossy() as usize).max(min_substeps).max(1);
        let h = len / R::from_usize_lossy(sub);
        for k in 0..sub {
            let t = w[0] + h * R::from_usize_lossy(k);
            y = rk4_step(coef, shift, t, h, &y)?;
        }
        if !y.iter().all(|x| x.is_finite()) {
            return Err(Error::Numerical(format!("fundamental matrix overflowed before t = {:?}", w[1])));
        }
        out.push(y.clone());
    }
    Ok(out)
}

/// Uncontrolled fundamental matrix `Y₀(t)` on one period.
#[derive(Debug, Clone)]
pub struct MonodromyOde<R: Real = f64> {
    coefficient: CoefficientFn<R>,
    period: R,
    samples: Vec<DMatrix<R>>,
    slopes: Vec<DMatrix<R>>,
    /// Richardson estimate `‖Y_h(T) − Y_{2h}(T)‖ / 15`.
    pub error_estimate: R,
}

impl<R: Real> MonodromyOde<R> {
    pub fn period(&self) -> R {
        self.period
    }

    pub fn steps(&self) -> usize {
        self.samples.len() - 1
    }

    /// `Y₀(T)`.
    pub fn monodromy(&self) -> &DMatrix<R> {
        self.samples.last().expect("non-empty")
    }

    pub fn dimension(&self) -> usize {
        self.monodromy().nrows()
    }

    /// `Y₀(t)` for any real `t`, using `Y₀(t + mT) = Y₀(t) Y₀(T)^m`.
    pub fn y_at(&self, t: R) -> Result<DMatrix<R>> {
        let m = (t / self.period).floor();
        let tau = t - m * self.period;
        let base = self.within_period(tau);
        let mi = m.to_f64_lossy() as i64;
        let mut y = base;
        if mi > 0 {
            for _ in 0..mi {
                y = &y * self.monodromy();
            }
        } else if mi < 0 {
            let inv = self
                .monodromy()
                .clone()
                .try_inverse()
                .ok_or_else(|| Error::Numerical("monodromy matrix is singular".into()))?;
            for _ in 0..(-mi) {
                y = &y * &inv;
            }
        }
        Ok(y)
    }

    /// Cubic Hermite interpolation of the stored samples for `t ∈ [0, T]`.
    fn within_period(&self, t: R) -> DMatrix<R> {
        let steps = self.steps();
        let h = self.period / R::from_usize_lossy(steps);
        let x = (t / h).max(R::zero());
        let k = (x.floor().to_f64_lossy() as usize).min(steps - 1);
        let s = x - R::from_usize_lossy(k);
        let (two, three) = (R::lit(2.0), R::lit(3.0));
        let s2 = s * s;
        let s3 = s2 * s;
        let h00 = two * s3 - three * s2 + R::one();
        let h10 = s3 - two * s2 + s;
        let h01 = -two * s3 + three * s2;
        let h11 = s3 - s2;
        &self.samples[k] * h00 + &self.slopes[k] * (h10 * h) + &self.samples[k + 1] * h01 + &self.slopes[k + 1] * (h11 * h)
    }
}

/// Fixed-step RK4 for `Ẏ = A(t)Y`, `Y(0) = I` over one period (`steps` steps).
pub fn ode_monodromy<R: Real>(problem: &PeriodicLinearProblem<R>, steps: usize) -> Result<MonodromyOde<R>> {
    if steps < 2 || !steps.is_multiple_of(2) {
        return Err(Error::Input("the number of RK4 steps must be even and at least 2".into()));
    }
    let coef = problem.coefficient();
    let period = problem.period();
    let times: Vec<R> = (0..=steps).map(|k| period * R::from_usize_lossy(k) / R::from_usize_lossy(steps)).collect();
    let samples = fundamental_at(coef, None, &times, period, 1)?;
    let coarse = fundamental_at(coef, None, &[R::zero(), period], period / R::from_usize_lossy(steps / 2), steps / 2)?;
    let error_estimate = (samples.last().unwrap() - coarse.last().unwrap()).norm() / R::lit(15.0);
    let slopes = times
        .iter()
        .zip(&samples)
        .map(|(t, y)| Ok(coef.at(*t)? * y))
        .collect::<Result<Vec<_>>>()?;
    Ok(MonodromyOde { coefficient: coef.clone(), period, samples, slopes, error_estimate })
}

impl<R: Real> MonodromyOde<R> {
    pub fn coefficient(&self) -> &CoefficientFn<R> {
        &self.coefficient
    }
}
