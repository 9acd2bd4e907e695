//! Resonating centers `ker(2πni/T − J)` and their invariance under control.

use nalgebra::DMatrix;
use num_complex::Complex;

use super::charmat::CharacteristicMatrix;
use crate::linalg::{null_space, rank_threshold, svd_sorted, to_complex, CMatrix};
use crate::model::Tolerances;
use crate::scalar::Real;

fn resonance<R: Real>(delay: R, n: i64) -> Complex<R> {
    Complex::new(R::zero(), R::two_pi() * R::lit(n as f64) / delay)
}

/// Kernel of `m` under the rank rule: `(dimension, orthonormal basis)`.
fn kernel<R: Real>(m: &CMatrix<R>, tol: &Tolerances) -> (usize, CMatrix<R>) {
    let sigma = svd_sorted(m, false).0;
    let smax = sigma.first().copied().unwrap_or_else(R::zero);
    let tau = rank_threshold(m.nrows(), smax, R::lit(tol.rank_factor));
    let basis = null_space(m, tau);
    (basis.ncols(), basis)
}

/// `ker(2πni/T·I − J)` with its dimension.
pub fn resonating_center<R: Real>(j: &DMatrix<R>, delay: R, n: i64, tol: &Tolerances) -> (usize, CMatrix<R>) {
    let lam = resonance(delay, n);
    let mut m = -to_complex(j);
    for i in 0..m.nrows() {
        m[(i, i)] += lam;
    }
    kernel(&m, tol)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub struct ResonanceCheck {
    pub dim_uncontrolled: usize,
    pub dim_controlled: usize,
    pub equal: bool,
}

/// Compares `dim ker(2πni/T − J)` with `dim ker Δ(2πni/T)` of the fully controlled system.
pub fn check_resonance_invariance<R: Real>(cm: &CharacteristicMatrix<R>, n: i64, tol: &Tolerances) -> ResonanceCheck {
    let (dim_uncontrolled, _) = resonating_center(cm.jacobian(), cm.delay(), n, tol);
    let controlled = cm.with_alpha(R::one());
    let (dim_controlled, _) = kernel(&controlled.delta(resonance(cm.delay(), n)), tol);
    ResonanceCheck { dim_uncontrolled, dim_controlled, equal: dim_uncontrolled == dim_controlled }
}
