//! Small dense linear-algebra helpers on top of nalgebra.

use nalgebra::DMatrix;
use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::Real;

pub type CMatrix<R> = DMatrix<Complex<R>>;

pub fn to_complex<R: Real>(m: &DMatrix<R>) -> CMatrix<R> {
    m.map(|x| Complex::new(x, R::zero()))
}

/// Singular values in descending order together with the matching right
/// singular vectors (columns of V).
pub fn svd_sorted<R: Real>(m: &CMatrix<R>, want_v: bool) -> (Vec<R>, Option<CMatrix<R>>) {
    let n = m.ncols();
    if m.nrows() == 0 || n == 0 {
        return (Vec::new(), want_v.then(|| CMatrix::<R>::identity(n, n)));
    }
    let svd = m.clone().svd(false, want_v);
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&a, &b| {
        svd.singular_values[b]
            .partial_cmp(&svd.singular_values[a])
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    let sigma = order.iter().map(|&i| svd.singular_values[i]).collect();
    let v = svd.v_t.map(|vt| {
        let mut v = CMatrix::<R>::zeros(n, order.len());
        for (col, &i) in order.iter().enumerate() {
            for r in 0..n {
                v[(r, col)] = vt[(i, r)].conj();
            }
        }
        v
    });
    (sigma, v)
}

/// Rank threshold `n * eps * sigma_max * rank_factor`.
pub fn rank_threshold<R: Real>(n: usize, sigma_max: R, rank_factor: R) -> R {
    R::from_usize_lossy(n.max(1)) * R::eps() * sigma_max * rank_factor
}

/// Number of singular values at or below `threshold`, counting the missing
/// ones of a non-square matrix as zero.
pub fn kernel_dimension<R: Real>(m: &CMatrix<R>, threshold: R) -> usize {
    let (sigma, _) = svd_sorted(m, false);
    let deficit = m.ncols().saturating_sub(sigma.len());
    deficit + sigma.iter().filter(|&&s| s <= threshold).count()
}

/// Orthonormal basis of the numerical kernel of a square matrix.
pub fn null_space<R: Real>(m: &CMatrix<R>, threshold: R) -> CMatrix<R> {
    let n = m.ncols();
    let (sigma, v) = svd_sorted(m, true);
    let v = v.expect("requested V");
    let keep: Vec<usize> = (0..n)
        .filter(|&i| i >= sigma.len() || sigma[i] <= threshold)
        .collect();
    let mut basis = CMatrix::<R>::zeros(n, keep.len());
    for (col, &i) in keep.iter().enumerate() {
        basis.set_column(col, &v.column(i));
    }
    basis
}

pub fn spectral_norm<R: Real>(m: &CMatrix<R>) -> R {
    svd_sorted(m, false).0.first().copied().unwrap_or_else(R::zero)
}

pub fn spectral_norm_real<R: Real>(m: &DMatrix<R>) -> R {
    if m.is_empty() {
        return R::zero();
    }
    m.clone()
        .svd(false, false)
        .singular_values
        .iter()
        .copied()
        .fold(R::zero(), |a, b| a.max(b))
}

pub fn eigenvalues_real<R: Real>(m: &DMatrix<R>) -> Vec<Complex<R>> {
    m.clone().complex_eigenvalues().iter().copied().collect()
}

pub fn eigenvalues_complex<R: Real>(m: &CMatrix<R>) -> Result<Vec<Complex<R>>> {
    if m.nrows() == 1 {
        return Ok(vec![m[(0, 0)]]);
    }
    let schur = nalgebra::linalg::Schur::try_new(m.clone(), R::eps(), 0)
        .ok_or_else(|| Error::Numerical("Schur iteration did not converge".into()))?;
    let (_, t) = schur.unpack();
    Ok((0..t.nrows()).map(|i| t[(i, i)]).collect())
}

/// Complex Schur form `m = Q T Q^H`.
pub fn schur_complex<R: Real>(m: &CMatrix<R>) -> Result<(CMatrix<R>, CMatrix<R>)> {
    if m.nrows() == 1 {
        return Ok((CMatrix::<R>::identity(1, 1), m.clone()));
    }
    let schur = nalgebra::linalg::Schur::try_new(m.clone(), R::eps(), 0)
        .ok_or_else(|| Error::Numerical("Schur iteration did not converge".into()))?;
    Ok(schur.unpack())
}

pub fn commutator_norm<R: Real>(a: &CMatrix<R>, b: &CMatrix<R>) -> R {
    spectral_norm(&(a * b - b * a))
}

pub fn commutator_norm_real<R: Real>(a: &DMatrix<R>, b: &DMatrix<R>) -> R {
    spectral_norm_real(&(a * b - b * a))
}

/// Solves `m x = rhs` with partial-pivoting LU.
pub fn lu_solve<R: Real>(m: &CMatrix<R>, rhs: &CMatrix<R>) -> Option<CMatrix<R>> {
    m.clone().lu().solve(rhs)
}

pub fn lu_solve_real<R: Real>(m: &DMatrix<R>, rhs: &DMatrix<R>) -> Option<DMatrix<R>> {
    m.clone().lu().solve(rhs)
}

pub fn is_finite_matrix<R: Real>(m: &DMatrix<R>) -> bool {
    m.iter().all(|x| x.is_finite())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn null_space_of_rotation_shift() {
        // i I - [[0,-1],[1,0]] has a one-dimensional kernel
        let j = DMatrix::from_row_slice(2, 2, &[0.0, -1.0, 1.0, 0.0]);
        let m = CMatrix::<f64>::identity(2, 2) * Complex::new(0.0, 1.0) - to_complex(&j);
        let (sigma, _) = svd_sorted(&m, false);
        let tau = rank_threshold(2, sigma[0], 1e4);
        let basis = null_space(&m, tau);
        assert_eq!(basis.ncols(), 1);
        assert!((&m * &basis).norm() < 1e-14);
        assert!((basis.column(0).norm() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn singular_values_descend() {
        let m = to_complex(&DMatrix::from_row_slice(3, 3, &[1.0f64, 0.0, 0.0, 0.0, 5.0, 0.0, 0.0, 0.0, 3.0]));
        let (s, _) = svd_sorted(&m, false);
        assert_eq!(s.len(), 3);
        assert!((s[0] - 5.0).abs() < 1e-14 && (s[2] - 1.0).abs() < 1e-14);
    }
}
