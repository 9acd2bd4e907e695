//! Multipliers of the discretized `Y_α(T)` along `α ∈ [0, 1]`.

use num_complex::Complex;

use super::dde::{dde_monodromy_with, Construction};
use super::multipliers::{multipliers, MultiplierReport};
use crate::error::Result;
use crate::model::{PeriodicLinearProblem, Tolerances};
use crate::scalar::{c64, Real};
use crate::track::{track, Track, TrackOptions};

pub type MultiplierTrack<R> = Track<MultiplierReport<R>>;

/// Radial compression `μ ↦ ln(1 + |μ|) μ/|μ|`, so the tracker's motion cap is
/// meaningful for both small and very large multipliers.
fn compress(z: Complex<f64>) -> Complex<f64> {
    let r = z.norm();
    if r == 0.0 {
        z
    } else {
        z * (r.ln_1p() / r)
    }
}

fn expand(w: Complex<f64>) -> Complex<f64> {
    let r = w.norm();
    if r == 0.0 {
        w
    } else {
        w * (r.exp_m1() / r)
    }
}

/// Default modulus below which multipliers are not matched between samples.
pub const TRACK_FLOOR: f64 = 0.1;

/// Tracks multipliers with `|μ| > floor`; they may appear or vanish only below `2 floor`.
/// Matching happens in the compressed plane; the returned points are multipliers.
///
/// The reports at each `α` still list everything above `mu_floor`. The collocation
/// matrix uses the integral form only; the cross-check is left to [`super::dde_monodromy`].
pub fn homotopy_multipliers<R: Real>(
    problem: &PeriodicLinearProblem<R>,
    nodes: usize,
    floor: f64,
    tol: &Tolerances,
    opts: &TrackOptions,
) -> Result<MultiplierTrack<R>> {
    let floor = floor.max(tol.mu_floor);
    let band = compress(Complex::new(2.0 * floor, 0.0)).re;
    let mut out = track(
        0.0,
        1.0,
        opts,
        |alpha| {
            let u = dde_monodromy_with(problem, R::lit(alpha), nodes, Construction::IntegralForm)?;
            let report = multipliers(&u, tol)?;
            let pts = report.expanded().into_iter().map(c64).filter(|z| z.norm() > floor).map(compress).collect();
            Ok((report, pts))
        },
        move |w: Complex<f64>| w.norm() < band,
    )?;
    for step in &mut out.steps {
        for p in &mut step.points {
            *p = expand(*p);
        }
    }
    Ok(out)
}
