//! Floquet normal form `Y₀(t) = P(t) e^{Bt}`.

use num_complex::Complex;

use super::logm::{logm, BranchInfo};
use super::ode::MonodromyOde;
use crate::error::{Error, Result};
use crate::linalg::{spectral_norm, to_complex, CMatrix};
use crate::model::Tolerances;
use crate::scalar::Real;

#[derive(Debug, Clone)]
pub struct FloquetDecomposition<R: Real = f64> {
    pub b: CMatrix<R>,
    /// Branch used for each eigenvalue of `Y₀(T)`.
    pub branches: Vec<BranchInfo<R>>,
    /// `‖e^{BT} − Y₀(T)‖₂ / ‖Y₀(T)‖₂`.
    pub log_residual: R,
    monodromy: MonodromyOde<R>,
}

impl<R: Real> FloquetDecomposition<R> {
    pub fn period(&self) -> R {
        self.monodromy.period()
    }

    pub fn monodromy(&self) -> &MonodromyOde<R> {
        &self.monodromy
    }

    /// `P(t) = Y₀(t) e^{−Bt}`.
    pub fn p_at(&self, t: R) -> Result<CMatrix<R>> {
        let y = to_complex(&self.monodromy.y_at(t)?);
        let e = (&self.b * Complex::new(-t, R::zero())).exp();
        Ok(y * e)
    }

    /// `P(t) e^{Bt}`.
    pub fn reconstruct(&self, t: R) -> Result<CMatrix<R>> {
        Ok(self.p_at(t)? * (&self.b * Complex::new(t, R::zero())).exp())
    }

    /// Floquet exponents `σ(B)` as recorded by the logarithm branches.
    pub fn exponents(&self) -> Vec<Complex<R>> {
        let t = self.period();
        self.branches.iter().map(|b| b.log / Complex::new(t, R::zero())).collect()
    }
}

/// `B = log(Y₀(T))/T` on the principal branch and the periodic factor sampler.
pub fn floquet_decompose<R: Real>(m: &MonodromyOde<R>, tol: &Tolerances) -> Result<FloquetDecomposition<R>> {
    let y = to_complex(m.monodromy());
    let (log, branches) = logm(&y)?;
    let t = m.period();
    let b = log / Complex::new(t, R::zero());
    let back = (&b * Complex::new(t, R::zero())).exp();
    let log_residual = spectral_norm(&(&back - &y)) / spectral_norm(&y);
    let limit = R::tol(tol.tol_log, 1e3);
    if !(log_residual <= limit) {
        return Err(Error::Numerical(format!("e^(BT) misses Y(T) by {log_residual:?} (relative)")));
    }
    Ok(FloquetDecomposition { b, branches, log_residual, monodromy: m.clone() })
}
