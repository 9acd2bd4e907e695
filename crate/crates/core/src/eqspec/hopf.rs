//! Hopf curves `k*(ω) = (iω − λ*)/(1 − e^{−iωT})` of the scalar reduced equation.

use nalgebra::ComplexField;
use num_complex::Complex;

use super::charmat::one_minus_exp;
use crate::error::{Error, Result};
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HopfSample<R: Real = f64> {
    pub omega: R,
    pub gain: Complex<R>,
    /// Unit normal pointing to the right of the curve oriented by increasing `ω`.
    pub right_normal: Complex<R>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct HopfBranch<R: Real = f64> {
    /// Branch index: `ω ∈ (2πm/T, 2π(m+1)/T)`.
    pub m: i64,
    pub samples: Vec<HopfSample<R>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct HopfCurveFamily<R: Real = f64> {
    pub lambda: R,
    pub delay: R,
    pub branches: Vec<HopfBranch<R>>,
}

/// Gain at which `iω` is a characteristic root of `ẇ = λ* w + k [w(t) − w(t−T)]`.
pub fn hopf_gain<R: Real>(lambda: R, delay: R, omega: R) -> Complex<R> {
    let num = Complex::new(-lambda, omega);
    num / one_minus_exp(Complex::new(R::zero(), omega * delay))
}

/// `dk*/dω = (iD − (iω − λ*)D′)/D²` with `D = 1 − e^{−iωT}`.
pub fn hopf_tangent<R: Real>(lambda: R, delay: R, omega: R) -> Complex<R> {
    let z = Complex::new(R::zero(), omega * delay);
    let d = one_minus_exp(z);
    let dp = (-z).exp() * Complex::new(R::zero(), delay);
    let i = Complex::new(R::zero(), R::one());
    (i * d - Complex::new(-lambda, omega) * dp) / (d * d)
}

/// Samples `samples` points per branch, keeping `guard·2π/T` away from both endpoints.
///
/// Along every branch `Re k*` is strictly monotone: decreasing in `ω` for
/// `ω > 0` and, by conjugate symmetry, increasing for `ω < 0`. The property is
/// checked on the samples and a violation is reported as an error.
pub fn hopf_curves<R: Real>(lambda: R, delay: R, branches: &[i64], samples: usize, guard: R) -> Result<HopfCurveFamily<R>> {
    if !(lambda > R::zero() && delay > R::zero() && lambda.is_finite() && delay.is_finite()) {
        return Err(Error::Input("Hopf curves need lambda > 0 and T > 0".into()));
    }
    if !(guard > R::zero() && guard < R::lit(0.5)) {
        return Err(Error::Input("guard must lie in (0, 0.5)".into()));
    }
    let w = R::two_pi() / delay;
    let mut out = Vec::with_capacity(branches.len());
    for &m in branches {
        let lo = w * (R::lit(m as f64) + guard);
        let hi = w * (R::lit(m as f64 + 1.0) - guard);
        let pts: Vec<HopfSample<R>> = (0..samples)
            .map(|i| {
                let s = if samples == 1 { R::lit(0.5) } else { R::from_usize_lossy(i) / R::from_usize_lossy(samples - 1) };
                let omega = lo + (hi - lo) * s;
                let t = hopf_tangent(lambda, delay, omega);
                let right = Complex::new(t.im, -t.re) / t.modulus();
                HopfSample { omega, gain: hopf_gain(lambda, delay, omega), right_normal: right }
            })
            .collect();
        let decreasing = m >= 0;
        for pair in pts.windows(2) {
            let (a, b) = (pair[0].gain.re, pair[1].gain.re);
            let ok = if decreasing { b < a } else { b > a };
            if !ok {
                return Err(Error::Numerical(format!(
                    "Re k* not strictly monotone on branch {m} between omega = {:?} and {:?}",
                    pair[0].omega, pair[1].omega
                )));
            }
        }
        out.push(HopfBranch { m, samples: pts });
    }
    Ok(HopfCurveFamily { lambda, delay, branches: out })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn half_frequency_value() {
        let k = hopf_gain(0.05, 2.0 * PI, 0.5);
        assert!((k - Complex::new(-0.025, 0.25)).norm() < 1e-16);
    }

    #[test]
    fn conjugate_symmetry() {
        for &w in &[0.3, 0.77, 1.5, 2.9] {
            let a = hopf_gain(0.05, 2.0 * PI, w);
            let b = hopf_gain(0.05, 2.0 * PI, -w);
            assert!((a.conj() - b).norm() <= 1e-15 * a.norm());
        }
    }

    #[test]
    fn gain_grows_towards_endpoints() {
        let near = hopf_gain(0.05, 2.0 * PI, 1.0 - 1e-6);
        assert!(near.norm() > 1e4);
    }

    #[test]
    fn three_branches_are_monotone() {
        let f = hopf_curves(0.05, 2.0 * PI, &[0, 1, 2, -1], 200, 0.01).unwrap();
        assert_eq!(f.branches.len(), 4);
        assert!(f.branches.iter().all(|b| b.samples.len() == 200));
        assert!(hopf_curves(0.05, 2.0 * PI, &[], 200, 0.01).unwrap().branches.is_empty());
    }
}
