//! Direct simulation of a controlled equilibrium and comparison with its spectrum.

use pyragas::eqspec::{default_region, find_roots, CharacteristicMatrix};
use pyragas::model::{validate_equilibrium, Region, Tolerances};
use pyragas::sim::{growth_rate, integrate, step_size, GrowthRate, HistorySegment, Stability};
use pyragas::{EquilibriumProblem, Result};
use serde::Serialize;

use crate::report::{Cell, Csv, Point};

/// Default time steps per delay.
pub const STEPS_PER_DELAY: usize = 256;
/// Longest fitting window, in delays.
pub const WINDOW_DELAYS: f64 = 20.0;

#[derive(Debug, Clone, Serialize)]
pub struct SimulationRequest {
    /// Integration length in delays.
    pub horizon: f64,
    pub dt: Option<f64>,
    /// Size of the random history perturbation; 0 starts exactly at the equilibrium.
    pub amplitude: f64,
    pub seed: u64,
}

#[derive(Debug, Serialize)]
pub struct SimulationSummary {
    pub horizon: f64,
    pub time_step: f64,
    pub steps_per_delay: usize,
    pub amplitude: f64,
    pub end_time: f64,
    pub equilibrium_residual: f64,
    pub blow_up: bool,
    pub blow_up_time: Option<f64>,
    /// `None` when the run stopped too early to fit a rate.
    pub growth: Option<GrowthRate>,
    /// Rightmost root in the search region.
    pub dominant_root: Option<Point>,
    pub region: Region,
    /// Whether the observed behaviour matches the sign of the dominant root;
    /// `None` when the trajectory never left the equilibrium.
    pub consistent: Option<bool>,
}

pub fn simulate(p: &EquilibriumProblem, req: &SimulationRequest, region: Option<Region>, tol: &Tolerances) -> Result<(SimulationSummary, Csv)> {
    if !(req.horizon.is_finite() && req.horizon > 0.0) {
        return Err(pyragas::Error::Input(format!("horizon must be positive, got {}", req.horizon)));
    }
    if !(req.amplitude.is_finite() && req.amplitude >= 0.0) {
        return Err(pyragas::Error::Input(format!("amplitude must be non-negative, got {}", req.amplitude)));
    }
    let delay = p.feedback().delay();
    let (h, steps) = step_size(delay, req.dt.unwrap_or(delay / STEPS_PER_DELAY as f64))?;
    let history = if req.amplitude == 0.0 {
        HistorySegment::constant(delay, steps, p.point().clone())?
    } else {
        HistorySegment::perturbed(p.point(), delay, steps, req.amplitude, req.seed)?
    };
    let traj = integrate(p.field(), p.feedback(), &history, req.horizon * delay, h)?;

    let window = (WINDOW_DELAYS * delay).min(0.5 * traj.end_time());
    let growth = if window > 0.0 { growth_rate(&traj, p.point(), window).ok() } else { None };

    let cm = CharacteristicMatrix::from_problem(p, 1.0)?;
    let region = region.unwrap_or_else(|| default_region(&cm, tol));
    let dominant = find_roots(&cm, &region, tol)?.dominant().map(|r| r.value);

    // No root in a region reaching into the left half plane means every root lies left of it.
    let spectral_sign = match dominant {
        Some(d) if d.re > tol.tol_axis => Some(Stability::Growing),
        Some(d) if d.re < -tol.tol_axis => Some(Stability::Decaying),
        Some(_) => Some(Stability::Marginal),
        None if region.re_min < -tol.tol_axis => Some(Stability::Decaying),
        None => None,
    };
    let observed = match (traj.blow_up, growth.map(|g| g.stability)) {
        (Some(_), _) => Some(Stability::Growing),
        (None, Some(Stability::StronglyStable)) => Some(Stability::Decaying),
        (None, s) => s,
    };
    let exact_start = req.amplitude == 0.0 && observed == Some(Stability::Marginal);
    let consistent = match (observed, spectral_sign) {
        (Some(o), Some(e)) if !exact_start => Some(o == e),
        _ => None,
    };

    let mut csv = Csv::new(std::iter::once("t".to_string()).chain((1..=p.dimension()).map(|i| format!("x{i}"))));
    for (i, x) in traj.states().iter().enumerate() {
        csv.row(std::iter::once(Cell::from(traj.time(i))).chain(x.iter().map(|v| Cell::from(*v))));
    }
    let summary = SimulationSummary {
        horizon: req.horizon,
        time_step: h,
        steps_per_delay: steps,
        amplitude: req.amplitude,
        end_time: traj.end_time(),
        equilibrium_residual: validate_equilibrium(p)?,
        blow_up: traj.blow_up.is_some(),
        blow_up_time: traj.blow_up,
        growth,
        dominant_root: dominant.map(Point::from),
        region,
        consistent,
    };
    Ok((summary, csv))
}
