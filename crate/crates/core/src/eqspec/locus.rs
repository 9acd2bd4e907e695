//! Continuation of characteristic roots along the control homotopy and along gain paths.

use nalgebra::DMatrix;
use num_complex::Complex;

use super::charmat::CharacteristicMatrix;
use super::roots::{default_region, find_roots, SpectrumReport};
use crate::error::{Error, Result};
use crate::linalg::{to_complex, CMatrix};
use crate::model::{Region, Tolerances};
use crate::scalar::{c64, Real};
use crate::track::{track, Track, TrackOptions};

pub type RootTrack<R> = Track<SpectrumReport<R>>;

/// Points inside this band of the region edge may enter or leave between samples.
pub(crate) fn edge_band(region: &Region, motion_cap: f64) -> impl Fn(Complex<f64>) -> bool {
    let width = region.re_max - region.re_min;
    let w = if region.re_min < 0.0 { 0.5 * (-region.re_min).min(width) } else { 0.05 * width };
    let w_im = w.max(motion_cap);
    let r = *region;
    move |z: Complex<f64>| z.re < r.re_min + w || z.re > r.re_max - w || z.im.abs() > r.im_max - w_im
}

fn expanded<R: Real>(report: &SpectrumReport<R>) -> Vec<Complex<f64>> {
    report.expanded().into_iter().map(c64).collect()
}

/// Roots of `d(·, α)` for `α` from 0 to 1; the default region is the one of `α = 1`.
pub fn homotopy_trace<R: Real>(
    cm: &CharacteristicMatrix<R>,
    region: Option<Region>,
    tol: &Tolerances,
    opts: &TrackOptions,
) -> Result<RootTrack<R>> {
    let full = cm.with_alpha(R::one());
    let region = region.unwrap_or_else(|| default_region(&full, tol));
    let band = edge_band(&region, opts.motion_cap);
    track(
        0.0,
        1.0,
        opts,
        |alpha| {
            let report = find_roots(&cm.with_alpha(R::lit(alpha)), &region, tol)?;
            let pts = expanded(&report);
            Ok((report, pts))
        },
        band,
    )
}

/// Gain family `K(s) = s · direction · base` for `s` from `s0` to `s1`.
///
/// `direction = 1` is a real sweep, `i` an imaginary sweep, `e^{iφ}` a ray of argument `φ`.
#[derive(Debug, Clone)]
pub struct GainPath<R: Real = f64> {
    pub base: CMatrix<R>,
    pub direction: Complex<R>,
    pub s0: R,
    pub s1: R,
}

impl<R: Real> GainPath<R> {
    /// Scalar gain `k(s) = s·direction` applied as `k(s)·I`.
    pub fn scalar(dimension: usize, direction: Complex<R>, s0: R, s1: R) -> Self {
        Self { base: CMatrix::<R>::identity(dimension, dimension), direction, s0, s1 }
    }

    pub fn matrix(base: &DMatrix<R>, s0: R, s1: R) -> Self {
        Self { base: to_complex(base), direction: Complex::new(R::one(), R::zero()), s0, s1 }
    }

    pub fn gain_at(&self, s: R) -> CMatrix<R> {
        &self.base * (self.direction * s)
    }
}

/// Root loci of `det(λI − J − K(s)(1 − e^{−λT}))` along `path`.
pub fn eigenvalue_locus<R: Real>(
    jacobian: &DMatrix<R>,
    delay: R,
    path: &GainPath<R>,
    region: Option<Region>,
    tol: &Tolerances,
    opts: &TrackOptions,
) -> Result<RootTrack<R>> {
    if path.base.nrows() != jacobian.nrows() {
        return Err(Error::Input("gain path and Jacobian dimensions differ".into()));
    }
    let cm = CharacteristicMatrix::with_complex_gain(jacobian.clone(), path.gain_at(path.s0), delay, R::one())?;
    let region = match region {
        Some(r) => r,
        None => {
            let far = if path.s0.abs() >= path.s1.abs() { path.s0 } else { path.s1 };
            default_region(&cm.with_gain(path.gain_at(far))?, tol)
        }
    };
    let band = edge_band(&region, opts.motion_cap);
    track(
        path.s0.to_f64_lossy(),
        path.s1.to_f64_lossy(),
        opts,
        |s| {
            let report = find_roots(&cm.with_gain(path.gain_at(R::lit(s)))?, &region, tol)?;
            let pts = expanded(&report);
            Ok((report, pts))
        },
        band,
    )
}
