//! Characteristic matrix `Δ(λ) = λI − J − αK(1 − e^{−λT})` and its determinant.

use nalgebra::{ComplexField, DMatrix};
use num_complex::Complex;

use crate::error::{Error, Result};
use crate::linalg::{spectral_norm, spectral_norm_real, to_complex, CMatrix};
use crate::model::{DelayFeedback, EquilibriumProblem};
use crate::scalar::Real;

#[derive(Debug, Clone)]
pub struct CharacteristicMatrix<R: Real = f64> {
    jacobian: DMatrix<R>,
    gain: CMatrix<R>,
    delay: R,
    alpha: R,
    real_gain: bool,
}

impl<R: Real> CharacteristicMatrix<R> {
    pub fn new(jacobian: DMatrix<R>, feedback: &DelayFeedback<R>, alpha: R) -> Result<Self> {
        Self::with_complex_gain(jacobian, to_complex(feedback.gain()), feedback.delay(), alpha)
    }

    /// Complex gains arise in the scalar reductions along eigenvectors.
    pub fn with_complex_gain(jacobian: DMatrix<R>, gain: CMatrix<R>, delay: R, alpha: R) -> Result<Self> {
        let n = jacobian.nrows();
        if n == 0 || jacobian.ncols() != n || gain.nrows() != n || gain.ncols() != n {
            return Err(Error::Input(format!(
                "Jacobian {}x{} and gain {}x{} must be square of equal size",
                jacobian.nrows(),
                jacobian.ncols(),
                gain.nrows(),
                gain.ncols()
            )));
        }
        if !(delay.is_finite() && delay > R::zero()) {
            return Err(Error::Input(format!("delay must be positive, got {delay:?}")));
        }
        if !alpha.is_finite() || !jacobian.iter().all(|x| x.is_finite()) || !gain.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
            return Err(Error::Input("characteristic matrix data must be finite".into()));
        }
        let real_gain = gain.iter().all(|z| z.im == R::zero());
        Ok(Self { jacobian, gain, delay, alpha, real_gain })
    }

    pub fn from_problem(problem: &EquilibriumProblem<R>, alpha: R) -> Result<Self> {
        Self::new(problem.jacobian()?, problem.feedback(), alpha)
    }

    pub fn with_alpha(&self, alpha: R) -> Self {
        Self { alpha, ..self.clone() }
    }

    pub fn with_gain(&self, gain: CMatrix<R>) -> Result<Self> {
        Self::with_complex_gain(self.jacobian.clone(), gain, self.delay, self.alpha)
    }

    pub fn jacobian(&self) -> &DMatrix<R> {
        &self.jacobian
    }

    pub fn gain(&self) -> &CMatrix<R> {
        &self.gain
    }

    pub fn delay(&self) -> R {
        self.delay
    }

    pub fn alpha(&self) -> R {
        self.alpha
    }

    pub fn dimension(&self) -> usize {
        self.jacobian.nrows()
    }

    /// True when `d(λ̄) = conj d(λ)`, so roots come in conjugate pairs.
    pub fn is_real(&self) -> bool {
        self.real_gain
    }

    pub fn jacobian_norm(&self) -> R {
        spectral_norm_real(&self.jacobian)
    }

    /// `|α| ‖K‖₂`.
    pub fn gain_norm(&self) -> R {
        self.alpha.abs() * spectral_norm(&self.gain)
    }

    pub fn delta(&self, lambda: Complex<R>) -> CMatrix<R> {
        let n = self.dimension();
        let factor = one_minus_exp(lambda * self.delay) * self.alpha;
        let mut m = -to_complex(&self.jacobian) - &self.gain * factor;
        for i in 0..n {
            m[(i, i)] += lambda;
        }
        m
    }

    /// `dΔ/dλ = I − αKT e^{−λT}`.
    pub fn delta_prime(&self, lambda: Complex<R>) -> CMatrix<R> {
        let n = self.dimension();
        let e = (-(lambda * self.delay)).exp() * (self.alpha * self.delay);
        let mut m = -&self.gain * e;
        for i in 0..n {
            m[(i, i)] += Complex::new(R::one(), R::zero());
        }
        m
    }

    pub fn det(&self, lambda: Complex<R>) -> Complex<R> {
        self.delta(lambda).lu().determinant()
    }

    /// `(d(λ), d′(λ)/d(λ))`, the latter as `tr(Δ⁻¹Δ′)`; `None` when `Δ(λ)` is exactly singular.
    pub fn det_and_log_derivative(&self, lambda: Complex<R>) -> Option<(Complex<R>, Complex<R>)> {
        let lu = self.delta(lambda).lu();
        let d = lu.determinant();
        if d == Complex::new(R::zero(), R::zero()) || !(d.re.is_finite() && d.im.is_finite()) {
            return None;
        }
        let x = lu.solve(&self.delta_prime(lambda))?;
        Some((d, x.trace()))
    }

    /// `|λ| + ‖J‖ + |α|‖K‖·|1 − e^{−λT}|`, the size of the summands of `Δ(λ)`.
    pub fn term_scale(&self, lambda: Complex<R>) -> R {
        lambda.modulus() + self.jacobian_norm() + self.gain_norm() * one_minus_exp(lambda * self.delay).modulus()
    }

    /// `|d(λ)|` divided by `Π_j (|λ| + ‖J e_j‖ + |α|·|1 − e^{−λT}|·‖K e_j‖)`.
    pub fn relative_residual(&self, lambda: Complex<R>) -> R {
        let ome = one_minus_exp(lambda * self.delay).modulus() * self.alpha.abs();
        let mut scale = R::one();
        for j in 0..self.dimension() {
            scale *= lambda.modulus() + self.jacobian.column(j).norm() + ome * self.gain.column(j).norm();
        }
        let d = self.det(lambda).modulus();
        if scale == R::zero() {
            d
        } else {
            d / scale
        }
    }
}

/// `d(λ, α) = det(λI − J − αK(1 − e^{−λT}))`.
pub fn char_det<R: Real>(lambda: Complex<R>, cm: &CharacteristicMatrix<R>) -> Complex<R> {
    cm.det(lambda)
}

/// `1 − e^{−z}` without cancellation near `z = 0`.
///
/// The imaginary part is reduced modulo 2π with a two-word constant; for
/// purely imaginary `z` within rounding of `2πni` the result is exactly zero.
pub fn one_minus_exp<R: Real>(z: Complex<R>) -> Complex<R> {
    let two_pi_hi = R::two_pi();
    let two_pi_lo = R::lit(std::f64::consts::TAU - two_pi_hi.to_f64_lossy() + 2.449_293_598_294_706_4e-16);
    let y = z.im;
    let k = (y / two_pi_hi).round();
    let r = (-k).mul_add(two_pi_lo, (-k).mul_add(two_pi_hi, y));
    if z.re == R::zero() && r.abs() <= R::lit(8.0) * R::eps() * y.abs().max(R::one()) {
        return Complex::new(R::zero(), R::zero());
    }
    // e^{w} − 1 with w = −z, using cos v − 1 = −2 sin²(v/2).
    let (u, v) = (-z.re, -r);
    let half = (v * R::lit(0.5)).sin();
    let em1 = u.exp_m1();
    let re = em1 * v.cos() - R::lit(2.0) * half * half;
    let im = u.exp() * v.sin();
    Complex::new(-re, -im)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn scalar(j: f64, k: f64, t: f64, alpha: f64) -> CharacteristicMatrix {
        let fb = DelayFeedback::new(DMatrix::from_element(1, 1, k), t).unwrap();
        CharacteristicMatrix::new(DMatrix::from_element(1, 1, j), &fb, alpha).unwrap()
    }

    #[test]
    fn gain_term_vanishes_at_resonance() {
        let t = 2.0 * PI;
        for n in -6i32..=6 {
            let lam = Complex::new(0.0, 2.0 * PI * n as f64 / t);
            for k in [0.0, 0.3, -7.5] {
                let d = char_det(lam, &scalar(0.05, k, t, 0.8));
                assert_eq!(d, lam - 0.05, "n = {n}, k = {k}");
            }
        }
        let t = 3.0;
        let lam = Complex::new(0.0, 2.0 * PI * 5.0 / t);
        assert_eq!(char_det(lam, &scalar(0.05, 0.3, t, 1.0)), lam - 0.05);
    }

    #[test]
    fn elementary_values() {
        assert_eq!(char_det(Complex::new(0.05, 0.0), &scalar(0.05, 0.0, 1.0, 1.0)).norm(), 0.0);
        let d = char_det(Complex::new(0.0, 0.0), &scalar(0.05, 0.3, 2.0 * PI, 1.0));
        assert_eq!(d, Complex::new(-0.05, 0.0));
    }

    #[test]
    fn one_minus_exp_matches_direct_formula() {
        for &(re, im) in &[(0.3, 0.2), (-1.0, 5.0), (1e-9, 1e-9), (2.0, -40.0), (0.0, 1.0)] {
            let z = Complex::new(re, im);
            let direct = Complex::new(1.0, 0.0) - (-z).exp();
            assert!((one_minus_exp(z) - direct).norm() <= 1e-15 * (1.0 + direct.norm()), "{z}");
        }
        let tiny = Complex::new(1e-12f64, 0.0);
        assert!((one_minus_exp(tiny).re - (1e-12 - 5e-25)).abs() < 1e-27);
    }

    #[test]
    fn log_derivative_matches_difference_quotient() {
        let fb = DelayFeedback::new(DMatrix::from_row_slice(2, 2, &[0.3, 0.1, -0.2, 0.4]), 2.5).unwrap();
        let j = DMatrix::from_row_slice(2, 2, &[0.05, -1.0, 1.0, 0.05]);
        let cm = CharacteristicMatrix::new(j, &fb, 0.7).unwrap();
        let z = Complex::new(0.2, 0.9);
        let (d, g) = cm.det_and_log_derivative(z).unwrap();
        let h = 1e-6;
        let fd = (cm.det(z + h) - cm.det(z - h)) / (2.0 * h);
        assert!((g * d - fd).norm() < 1e-8 * fd.norm());
    }
}
