//! Time-dependent coefficient matrices `A(t)` of linear fields.

use std::fmt;
use std::sync::Arc;

use nalgebra::DMatrix;

use super::VectorFieldSpec;
use crate::error::{Error, Result};
use crate::scalar::Real;

type MatrixFn<R> = dyn Fn(R) -> DMatrix<R> + Send + Sync;

/// Coefficient matrix of a linear field `ẋ = A(t) x`.
#[derive(Clone)]
pub enum CoefficientFn<R: Real = f64> {
    Constant(DMatrix<R>),
    /// Closed-form sampler.
    Function { dim: usize, f: Arc<MatrixFn<R>> },
    /// Trigonometric interpolant of uniformly spaced samples over one period.
    Trigonometric(TrigInterp<R>),
    /// Jacobian of a field at `x = 0`, as a function of time.
    Jacobian(Arc<VectorFieldSpec<R>>),
}

impl<R: Real> fmt::Debug for CoefficientFn<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoefficientFn::Constant(m) => f.debug_tuple("Constant").field(m).finish(),
            CoefficientFn::Function { dim, .. } => write!(f, "Function {{ dim: {dim} }}"),
            CoefficientFn::Trigonometric(t) => write!(f, "Trigonometric {{ samples: {} }}", t.samples),
            CoefficientFn::Jacobian(v) => write!(f, "Jacobian({:?})", v.dimension()),
        }
    }
}

impl<R: Real> CoefficientFn<R> {
    pub fn function(dim: usize, f: impl Fn(R) -> DMatrix<R> + Send + Sync + 'static) -> Self {
        CoefficientFn::Function { dim, f: Arc::new(f) }
    }

    pub fn dimension(&self) -> usize {
        match self {
            CoefficientFn::Constant(m) => m.nrows(),
            CoefficientFn::Function { dim, .. } => *dim,
            CoefficientFn::Trigonometric(t) => t.dim,
            CoefficientFn::Jacobian(v) => v.dimension(),
        }
    }

    pub fn is_constant(&self) -> bool {
        matches!(self, CoefficientFn::Constant(_))
    }

    /// Evaluates `A(t)`.
    pub fn at(&self, t: R) -> Result<DMatrix<R>> {
        let m = match self {
            CoefficientFn::Constant(m) => m.clone(),
            CoefficientFn::Function { f, .. } => f(t),
            CoefficientFn::Trigonometric(tr) => tr.at(t),
            CoefficientFn::Jacobian(v) => {
                let zero = nalgebra::DVector::zeros(v.dimension());
                v.jacobian(&zero, t)?
            }
        };
        if !m.iter().all(|x| x.is_finite()) {
            return Err(Error::Numerical(format!("coefficient matrix not finite at t = {t:?}")));
        }
        Ok(m)
    }
}

/// Entry-wise real Fourier interpolant of `S` uniform samples over `[0, T)`.
#[derive(Debug, Clone)]
pub struct TrigInterp<R> {
    dim: usize,
    period: R,
    samples: usize,
    /// `a[k]`, `b[k]` per entry (row-major), `k = 0..=S/2`.
    cos_coef: Vec<Vec<R>>,
    sin_coef: Vec<Vec<R>>,
}

impl<R: Real> TrigInterp<R> {
    /// `samples[j]` is `A(j T / S)`.
    pub fn new(period: R, samples: &[DMatrix<R>]) -> Result<Self> {
        let s = samples.len();
        if s < 2 {
            return Err(Error::Input("trigonometric interpolation needs at least two samples".into()));
        }
        let dim = samples[0].nrows();
        if samples.iter().any(|m| m.nrows() != dim || m.ncols() != dim) {
            return Err(Error::Input("matrix samples must all be square of the same size".into()));
        }
        if samples.iter().any(|m| !m.iter().all(|x| x.is_finite())) {
            return Err(Error::Input("matrix samples must be finite".into()));
        }
        let half = s / 2;
        let sf = R::from_usize_lossy(s);
        let mut cos_coef = Vec::with_capacity(dim * dim);
        let mut sin_coef = Vec::with_capacity(dim * dim);
        for r in 0..dim {
            for c in 0..dim {
                let mut a = vec![R::zero(); half + 1];
                let mut b = vec![R::zero(); half + 1];
                for k in 0..=half {
                    let mut sa = R::zero();
                    let mut sb = R::zero();
                    for (j, m) in samples.iter().enumerate() {
                        let ang = R::two_pi() * R::from_usize_lossy((j * k) % s) / sf;
                        sa += m[(r, c)] * ang.cos();
                        sb += m[(r, c)] * ang.sin();
                    }
                    let w = if k == 0 || (s.is_multiple_of(2) && k == half) { R::one() } else { R::lit(2.0) };
                    a[k] = w * sa / sf;
                    b[k] = w * sb / sf;
                }
                cos_coef.push(a);
                sin_coef.push(b);
            }
        }
        Ok(Self { dim, period, samples: s, cos_coef, sin_coef })
    }

    pub fn samples(&self) -> usize {
        self.samples
    }

    pub fn at(&self, t: R) -> DMatrix<R> {
        let omega = R::two_pi() / self.period;
        let half = self.samples / 2;
        let trig: Vec<(R, R)> = (0..=half)
            .map(|k| {
                let ang = omega * R::from_usize_lossy(k) * t;
                (ang.cos(), ang.sin())
            })
            .collect();
        DMatrix::from_fn(self.dim, self.dim, |r, c| {
            let idx = r * self.dim + c;
            let (a, b) = (&self.cos_coef[idx], &self.sin_coef[idx]);
            trig.iter()
                .enumerate()
                .fold(R::zero(), |acc, (k, &(co, si))| acc + a[k] * co + b[k] * si)
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trig_interpolant_reproduces_band_limited_function() {
        let period = 2.0 * std::f64::consts::PI;
        let a = |t: f64| {
            DMatrix::from_row_slice(2, 2, &[t.cos(), 0.5 * (2.0 * t).sin(), 1.0, 0.3 * (3.0 * t).cos() - 0.1])
        };
        let s = 16;
        let samples: Vec<_> = (0..s).map(|j| a(period * j as f64 / s as f64)).collect();
        let tr = TrigInterp::new(period, &samples).unwrap();
        for &t in &[0.1, 1.7, 4.4, 7.0] {
            assert!((tr.at(t) - a(t)).norm() < 1e-13);
        }
    }

    #[test]
    fn rejects_ragged_samples() {
        let s = vec![DMatrix::<f64>::zeros(2, 2), DMatrix::zeros(3, 3)];
        assert!(TrigInterp::new(1.0, &s).is_err());
    }
}
