//! Method-of-steps simulation of `ẋ = f(x, t) + K [x(t) − x(t−T)]`.
//!
//! The step is rounded down so that it divides the delay. The delayed state at
//! a step point is then a stored state; at RK4 half steps it comes from the
//! cubic Hermite dense output.

use nalgebra::DVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::DelayFeedback;
use crate::scalar::Real;
use crate::vfield::VectorFieldSpec;

/// Step size dividing `delay` and not above `dt`, with the number of steps per delay.
pub fn step_size<R: Real>(delay: R, dt: R) -> Result<(R, usize)> {
    if !(dt.is_finite() && dt > R::zero()) {
        return Err(Error::Input(format!("time step must be positive and finite, got {dt:?}")));
    }
    let ratio = (delay / dt).to_f64_lossy();
    // Absorb rounding in `delay / dt` before taking the ceiling.
    let per_delay = ((ratio * (1.0 - 1e-12)).ceil() as usize).max(1);
    Ok((delay / R::from_usize_lossy(per_delay), per_delay))
}

fn hermite<R: Real>(x0: &DVector<R>, x1: &DVector<R>, d0: &DVector<R>, d1: &DVector<R>, h: R, s: R) -> DVector<R> {
    let one = R::one();
    let two = R::lit(2.0);
    let three = R::lit(3.0);
    let s2 = s * s;
    let s3 = s2 * s;
    let h00 = two * s3 - three * s2 + one;
    let h10 = s3 - two * s2 + s;
    let h01 = three * s2 - two * s3;
    let h11 = s3 - s2;
    x0 * h00 + d0 * (h10 * h) + x1 * h01 + d1 * (h11 * h)
}

/// Initial function on `[−T, 0]`, interpolated by piecewise cubic Hermite
/// polynomials with finite-difference slopes.
#[derive(Debug, Clone, PartialEq)]
pub struct HistorySegment<R: Real = f64> {
    times: Vec<R>,
    values: Vec<DVector<R>>,
    slopes: Vec<DVector<R>>,
}

impl<R: Real> HistorySegment<R> {
    pub fn new(times: Vec<R>, values: Vec<DVector<R>>) -> Result<Self> {
        if times.len() < 2 || times.len() != values.len() {
            return Err(Error::Input(format!("history needs at least two nodes and one value per node, got {} and {}", times.len(), values.len())));
        }
        if times.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::Input("history grid must be strictly increasing".into()));
        }
        let scale = times[0].abs().max(R::one());
        if times[times.len() - 1].abs() > R::lit(1e3) * R::eps() * scale {
            return Err(Error::Input("history grid must end at 0".into()));
        }
        let n = values[0].len();
        if values.iter().any(|v| v.len() != n || !v.iter().all(|x| x.is_finite())) {
            return Err(Error::Input("history values must be finite vectors of one dimension".into()));
        }
        let m = times.len();
        let slopes = (0..m)
            .map(|i| {
                let (a, b) = (i.saturating_sub(1), (i + 1).min(m - 1));
                if i == 0 || i == m - 1 {
                    (&values[b] - &values[a]) / (times[b] - times[a])
                } else {
                    // Three-point derivative on a non-uniform grid.
                    let (h0, h1) = (times[i] - times[a], times[b] - times[i]);
                    let left = (&values[i] - &values[a]) / h0;
                    let right = (&values[b] - &values[i]) / h1;
                    left * (h1 / (h0 + h1)) + right * (h0 / (h0 + h1))
                }
            })
            .collect();
        Ok(Self { times, values, slopes })
    }

    /// `value` at every node of a uniform grid with `steps` intervals.
    pub fn constant(delay: R, steps: usize, value: DVector<R>) -> Result<Self> {
        let times = uniform_grid(delay, steps.max(1));
        let values = vec![value; times.len()];
        Self::new(times, values)
    }

    /// `point` plus independent uniform noise in `[−amplitude, amplitude]` at every node.
    pub fn perturbed(point: &DVector<R>, delay: R, steps: usize, amplitude: f64, seed: u64) -> Result<Self> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let times = uniform_grid(delay, steps.max(1));
        let values = times
            .iter()
            .map(|_| point.map(|x| x + R::lit(rng.gen_range(-amplitude..=amplitude))))
            .collect();
        Self::new(times, values)
    }

    /// Samples `phi` on a uniform grid.
    pub fn from_fn(delay: R, steps: usize, phi: impl Fn(R) -> DVector<R>) -> Result<Self> {
        let times = uniform_grid(delay, steps.max(1));
        let values = times.iter().map(|&t| phi(t)).collect();
        Self::new(times, values)
    }

    pub fn delay(&self) -> R {
        -self.times[0]
    }

    pub fn dimension(&self) -> usize {
        self.values[0].len()
    }

    pub fn times(&self) -> &[R] {
        &self.times
    }

    pub fn values(&self) -> &[DVector<R>] {
        &self.values
    }

    /// Interpolated value; `None` outside the grid.
    pub fn eval(&self, t: R) -> Option<DVector<R>> {
        let m = self.times.len();
        let slack = R::lit(1e3) * R::eps() * self.delay().max(R::one());
        if t < self.times[0] - slack || t > self.times[m - 1] + slack {
            return None;
        }
        let i = self.times.partition_point(|&s| s <= t).clamp(1, m - 1) - 1;
        let h = self.times[i + 1] - self.times[i];
        let s = ((t - self.times[i]) / h).max(R::zero()).min(R::one());
        Some(hermite(&self.values[i], &self.values[i + 1], &self.slopes[i], &self.slopes[i + 1], h, s))
    }
}

fn uniform_grid<R: Real>(delay: R, steps: usize) -> Vec<R> {
    let n = R::from_usize_lossy(steps);
    (0..=steps).map(|i| delay * (R::from_usize_lossy(i) / n - R::one())).collect()
}

/// States on a uniform grid over `[0, t_end]` with their derivatives for dense output.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory<R: Real = f64> {
    step: R,
    states: Vec<DVector<R>>,
    derivatives: Vec<DVector<R>>,
    /// Last valid time when the state left the representable range.
    pub blow_up: Option<R>,
}

impl<R: Real> Trajectory<R> {
    pub fn step(&self) -> R {
        self.step
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn time(&self, i: usize) -> R {
        self.step * R::from_usize_lossy(i)
    }

    pub fn times(&self) -> Vec<R> {
        (0..self.len()).map(|i| self.time(i)).collect()
    }

    pub fn states(&self) -> &[DVector<R>] {
        &self.states
    }

    pub fn end_time(&self) -> R {
        self.time(self.len().saturating_sub(1))
    }

    /// Dense output on `[0, end_time]`.
    pub fn eval(&self, t: R) -> Option<DVector<R>> {
        if self.len() < 2 || t < R::zero() || t > self.end_time() {
            return None;
        }
        let i = ((t / self.step).floor().to_f64_lossy() as usize).min(self.len() - 2);
        let s = ((t - self.time(i)) / self.step).max(R::zero()).min(R::one());
        Some(self.interval(i, s))
    }

    fn interval(&self, i: usize, s: R) -> DVector<R> {
        hermite(&self.states[i], &self.states[i + 1], &self.derivatives[i], &self.derivatives[i + 1], self.step, s)
    }
}

/// States with norm above this are treated as a blow-up.
fn blow_up_threshold<R: Real>() -> R {
    R::max_value().map_or(R::lit(1e150), |m| m.sqrt())
}

/// RK4 method of steps from `history` up to `t_end`.
///
/// The step is `dt` rounded down to divide the delay. Evaluation errors of the
/// field propagate; non-finite or huge states stop the integration and set
/// [`Trajectory::blow_up`].
pub fn integrate<R: Real>(
    field: &VectorFieldSpec<R>,
    feedback: &DelayFeedback<R>,
    history: &HistorySegment<R>,
    t_end: R,
    dt: R,
) -> Result<Trajectory<R>> {
    let n = field.dimension();
    if feedback.dimension() != n || history.dimension() != n {
        return Err(Error::Input(format!(
            "dimension mismatch: field {n}, gain {}, history {}",
            feedback.dimension(),
            history.dimension()
        )));
    }
    if !(t_end.is_finite() && t_end > R::zero()) {
        return Err(Error::Input(format!("end time must be positive and finite, got {t_end:?}")));
    }
    let delay = feedback.delay();
    let tol = R::lit(1e-9) * delay.max(R::one());
    if (history.delay() - delay).abs() > tol {
        return Err(Error::Input(format!("history covers [{:?}, 0] but the delay is {delay:?}", -history.delay())));
    }
    let (h, per_delay) = step_size(delay, dt)?;
    let steps = ((t_end / h).to_f64_lossy() * (1.0 - 1e-12)).ceil() as usize;
    let gain = feedback.gain();
    let half = R::lit(0.5);

    let x0 = history.eval(R::zero()).expect("history contains 0");
    let mut traj = Trajectory { step: h, states: vec![x0], derivatives: Vec::with_capacity(steps + 1), blow_up: None };

    // Delayed state at t = (k + s) h, i.e. at (k − per_delay + s) h.
    let delayed = |traj: &Trajectory<R>, k: usize, s: R| -> DVector<R> {
        if k >= per_delay {
            let j = k - per_delay;
            if s == R::zero() {
                traj.states[j].clone()
            } else {
                traj.interval(j, s)
            }
        } else {
            let t = (R::from_usize_lossy(k) + s - R::from_usize_lossy(per_delay)) * h;
            history.eval(t).unwrap_or_else(|| panic!("delayed lookup at {t:?} is outside the stored history"))
        }
    };
    let rhs = |x: &DVector<R>, t: R, xd: &DVector<R>| -> Result<DVector<R>> { Ok(field.eval(x, t)? + gain * (x - xd)) };

    let limit = blow_up_threshold::<R>();
    for k in 0..steps {
        let t = traj.time(k);
        let x = traj.states[k].clone();
        let d_start = delayed(&traj, k, R::zero());
        let k1 = rhs(&x, t, &d_start)?;
        traj.derivatives.push(k1.clone());
        let d_mid = delayed(&traj, k, half);
        let d_end = delayed(&traj, k + 1, R::zero());
        let k2 = rhs(&(&x + &k1 * (h * half)), t + h * half, &d_mid)?;
        let k3 = rhs(&(&x + &k2 * (h * half)), t + h * half, &d_mid)?;
        let k4 = rhs(&(&x + &k3 * h), t + h, &d_end)?;
        let next = &x + (k1 + (k2 + k3) * R::lit(2.0) + k4) * (h / R::lit(6.0));
        if !next.iter().all(|v| v.is_finite()) || next.norm() > limit {
            traj.blow_up = Some(t);
            break;
        }
        traj.states.push(next);
    }
    // Closing derivative for the dense output of the last interval.
    let last = traj.states.len() - 1;
    let d_last = delayed(&traj, last, R::zero());
    let f_last = rhs(&traj.states[last], traj.time(last), &d_last)?;
    traj.derivatives.truncate(last);
    traj.derivatives.push(f_last);
    Ok(traj)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Stability {
    Growing,
    Marginal,
    Decaying,
    /// The deviation reached the rounding floor of the state.
    StronglyStable,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GrowthRate {
    /// Exponential rate per unit time; `None` when the deviation vanished.
    pub rate: Option<f64>,
    pub stability: Stability,
    pub window: f64,
}

/// Number of chunks in the fitting window; the fit uses one maximum per chunk.
pub const GROWTH_CHUNKS: usize = 20;
/// Rates with smaller magnitude are classified as marginal.
pub const MARGINAL_RATE: f64 = 1e-6;

/// Least-squares slope of `log ‖x(t) − x*‖` over the trailing `window`.
///
/// The fit uses the largest deviation in each of [`GROWTH_CHUNKS`] chunks,
/// which removes oscillation at frequencies above the chunk rate.
pub fn growth_rate<R: Real>(traj: &Trajectory<R>, point: &DVector<R>, window: R) -> Result<GrowthRate> {
    let end = traj.end_time().to_f64_lossy();
    let w = window.to_f64_lossy();
    if !(w > 0.0) || end < 2.0 * w * (1.0 - 1e-9) {
        return Err(Error::Precondition(format!("trajectory of length {end} is shorter than twice the window {w}")));
    }
    let floor = 16.0 * R::eps().to_f64_lossy() * point.norm().to_f64_lossy();
    let deviation = |i: usize| (&traj.states[i] - point).norm().to_f64_lossy();
    let resolved = |d: f64| d > floor && d.is_normal();

    if !(0..traj.len()).any(|i| resolved(deviation(i))) {
        return Ok(GrowthRate { rate: Some(0.0), stability: Stability::Marginal, window: w });
    }

    let start = end - w;
    let chunk = w / GROWTH_CHUNKS as f64;
    let mut best: Vec<Option<(f64, f64)>> = vec![None; GROWTH_CHUNKS];
    for i in 0..traj.len() {
        let t = traj.time(i).to_f64_lossy();
        if t < start {
            continue;
        }
        let c = (((t - start) / chunk) as usize).min(GROWTH_CHUNKS - 1);
        let d = deviation(i);
        if best[c].is_none_or(|(_, m)| d > m) {
            best[c] = Some((t, d));
        }
    }
    let pts: Vec<(f64, f64)> = best.into_iter().flatten().collect();
    if pts.len() < 2 {
        return Err(Error::Precondition("window holds fewer than two samples".into()));
    }
    if pts.iter().any(|&(_, d)| !resolved(d)) {
        return Ok(GrowthRate { rate: None, stability: Stability::StronglyStable, window: w });
    }
    let m = pts.len() as f64;
    let tm = pts.iter().map(|p| p.0).sum::<f64>() / m;
    let lm = pts.iter().map(|p| p.1.ln()).sum::<f64>() / m;
    let sxy: f64 = pts.iter().map(|p| (p.0 - tm) * (p.1.ln() - lm)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - tm).powi(2)).sum();
    let rate = sxy / sxx;
    let stability = if rate > MARGINAL_RATE {
        Stability::Growing
    } else if rate < -MARGINAL_RATE {
        Stability::Decaying
    } else {
        Stability::Marginal
    };
    Ok(GrowthRate { rate: Some(rate), stability, window: w })
}
