//! Commutation of the gain with the Floquet factors and simultaneous eigenvectors.

use nalgebra::{ComplexField, DMatrix, DVector};
use num_complex::Complex;
use serde::Serialize;

use super::decompose::FloquetDecomposition;
use crate::error::{Error, Result};
use crate::linalg::{commutator_norm, eigenvalues_complex, null_space, rank_threshold, spectral_norm, svd_sorted, to_complex, CMatrix};
use crate::model::Tolerances;
use crate::scalar::Real;

/// Number of sample times on `[0, T)` at which `[K, P(t)]` is evaluated.
pub const P_SAMPLES: usize = 32;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CommutingCheck {
    pub commutes_b: bool,
    pub commutes_p: bool,
    /// `‖KB − BK‖ / (‖K‖‖B‖)`.
    pub residual_b: f64,
    /// Largest `‖KP(t) − P(t)K‖ / (‖K‖‖P(t)‖)` over the samples.
    pub residual_p: f64,
    pub tolerance: f64,
}

fn relative_commutator<R: Real>(a: &CMatrix<R>, b: &CMatrix<R>) -> R {
    let scale = spectral_norm(a) * spectral_norm(b);
    if scale == R::zero() {
        R::zero()
    } else {
        commutator_norm(a, b) / scale
    }
}

/// Checks `KB = BK` and `KP(t) = P(t)K` on a uniform grid of one period.
pub fn commuting_check<R: Real>(fd: &FloquetDecomposition<R>, gain: &DMatrix<R>, tol: &Tolerances) -> Result<CommutingCheck> {
    let k = to_complex(gain);
    let residual_b = relative_commutator(&k, &fd.b);
    let period = fd.period();
    let mut residual_p = R::zero();
    for i in 0..P_SAMPLES {
        let t = period * R::from_usize_lossy(i) / R::from_usize_lossy(P_SAMPLES);
        residual_p = residual_p.max(relative_commutator(&k, &fd.p_at(t)?));
    }
    let limit = R::tol(tol.tol_comm_floquet, 1e3);
    Ok(CommutingCheck {
        commutes_b: residual_b <= limit,
        commutes_p: residual_p <= limit,
        residual_b: residual_b.to_f64_lossy(),
        residual_p: residual_p.to_f64_lossy(),
        tolerance: limit.to_f64_lossy(),
    })
}

/// `B y = λ* y` and `K y = k* y` with `‖y‖ = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct CommonEigenpair<R: Real = f64> {
    pub lambda: Complex<R>,
    pub k: Complex<R>,
    pub y: DVector<Complex<R>>,
    pub residual_b: R,
    pub residual_k: R,
}

impl<R: Real> CommonEigenpair<R> {
    pub fn k_is_real(&self, tol: &Tolerances) -> bool {
        self.k.im.abs() <= R::tol(tol.tol_spec, 1e3) * self.k.modulus().max(R::one())
    }
}

/// Simultaneous eigenvectors of commuting `B` and `K` inside `ker(λ* I − B)`,
/// one per distinct eigenvalue of `K` restricted to that kernel.
pub fn common_eigenpair<R: Real>(
    b: &CMatrix<R>,
    gain: &CMatrix<R>,
    lambda: Complex<R>,
    tol: &Tolerances,
) -> Result<Vec<CommonEigenpair<R>>> {
    let n = b.nrows();
    if gain.nrows() != n || gain.ncols() != n || b.ncols() != n {
        return Err(Error::Input("B and K must be square of the same size".into()));
    }
    let nb = spectral_norm(b);
    let nk = spectral_norm(gain);
    let comm = commutator_norm(b, gain);
    let comm_limit = R::tol(tol.tol_comm, 1e3) * (nb * nk).max(R::one());
    if comm > comm_limit {
        return Err(Error::Precondition(format!("B and K do not commute: ||KB - BK|| = {comm:?}")));
    }
    let shifted = CMatrix::<R>::identity(n, n) * lambda - b;
    let threshold = rank_threshold(n, nb.max(lambda.modulus()), R::lit(tol.rank_factor)).max(R::lit(tol.tol_spec) * nb.max(R::one()));
    let v = null_space(&shifted, threshold);
    if v.ncols() == 0 {
        return Err(Error::Precondition(format!("{lambda:?} is not an eigenvalue of B")));
    }
    // K leaves the kernel invariant, so V^H K V represents K there.
    let restricted = v.adjoint() * gain * &v;
    let mut ks: Vec<Complex<R>> = Vec::new();
    for z in eigenvalues_complex(&restricted)? {
        if !ks.iter().any(|w| (*w - z).modulus() <= R::tol(1e-8, 1e3) * nk.max(R::one())) {
            ks.push(z);
        }
    }
    let g = restricted.nrows();
    let mut out = Vec::with_capacity(ks.len());
    for k in ks {
        let m = CMatrix::<R>::identity(g, g) * k - &restricted;
        let (_, vs) = svd_sorted(&m, true);
        let vs = vs.expect("requested V");
        let c = vs.column(g - 1).into_owned();
        let mut y = &v * c;
        let norm = Complex::new(y.norm(), R::zero());
        y /= norm;
        let residual_b = (b * &y - &y * lambda).norm();
        let residual_k = (gain * &y - &y * k).norm();
        out.push(CommonEigenpair { lambda, k, y, residual_b, residual_k });
    }
    Ok(out)
}
