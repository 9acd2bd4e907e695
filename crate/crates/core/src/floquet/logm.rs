//! Principal matrix logarithm by complex Schur form and inverse scaling and squaring.

use nalgebra::ComplexField;
use num_complex::Complex;

use crate::error::{Error, Result};
use crate::linalg::{schur_complex, CMatrix};
use crate::scalar::Real;

/// Logarithm branch chosen for one eigenvalue of the argument.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BranchInfo<R: Real = f64> {
    pub eigenvalue: Complex<R>,
    pub log: Complex<R>,
    /// The eigenvalue lies on the closed negative real axis; the branch with `Im log = +π` is used.
    pub negative_real: bool,
}

fn triangular_sqrt<R: Real>(t: &CMatrix<R>) -> CMatrix<R> {
    let n = t.nrows();
    let mut u = CMatrix::<R>::zeros(n, n);
    for j in 0..n {
        u[(j, j)] = t[(j, j)].sqrt();
        for i in (0..j).rev() {
            let mut s = t[(i, j)];
            for k in i + 1..j {
                s -= u[(i, k)] * u[(k, j)];
            }
            u[(i, j)] = s / (u[(i, i)] + u[(j, j)]);
        }
    }
    u
}

fn one_norm<R: Real>(m: &CMatrix<R>) -> R {
    m.column_iter().map(|c| c.iter().fold(R::zero(), |a, z| a + z.modulus())).fold(R::zero(), |a, b| a.max(b))
}

/// `log(I + X)` for `‖X‖ < 1/4` via `2 atanh(Z)`, `Z = X (2I + X)^{-1}`.
fn log_near_identity<R: Real>(x: &CMatrix<R>) -> Result<CMatrix<R>> {
    let n = x.nrows();
    let id = CMatrix::<R>::identity(n, n);
    let denom = &id * Complex::new(R::lit(2.0), R::zero()) + x;
    // Z = X D^{-1}  ⇔  D^T Z^T = X^T
    let zt = denom
        .transpose()
        .lu()
        .solve(&x.transpose())
        .ok_or_else(|| Error::Numerical("singular matrix in logarithm series".into()))?;
    let z = zt.transpose();
    let z2 = &z * &z;
    let mut term = z.clone();
    let mut sum = z.clone();
    for k in 1..200 {
        term = &term * &z2;
        let add = &term * Complex::new(R::one() / R::from_usize_lossy(2 * k + 1), R::zero());
        sum += &add;
        if one_norm(&add) <= R::eps() * one_norm(&sum) {
            break;
        }
    }
    Ok(sum * Complex::new(R::lit(2.0), R::zero()))
}

/// Principal logarithm of `m`; eigenvalues on the negative real axis take `Im log = +π`.
pub fn logm<R: Real>(m: &CMatrix<R>) -> Result<(CMatrix<R>, Vec<BranchInfo<R>>)> {
    let n = m.nrows();
    let (q, mut t) = schur_complex(m)?;
    let scale = one_norm(m).max(R::eps() * R::eps());
    let mut branches = Vec::with_capacity(n);
    for i in 0..n {
        let z = t[(i, i)];
        if z.modulus() <= R::lit(1e3) * R::eps() * scale {
            return Err(Error::Numerical(format!("matrix logarithm of a singular matrix (eigenvalue {z:?})")));
        }
        let negative_real = z.re < R::zero() && z.im.abs() <= R::lit(8.0) * R::eps() * z.modulus();
        if negative_real {
            t[(i, i)] = Complex::new(z.re, R::zero());
        }
        branches.push(BranchInfo { eigenvalue: t[(i, i)], log: t[(i, i)].ln(), negative_real });
    }
    let id = CMatrix::<R>::identity(n, n);
    let mut k = 0u32;
    while one_norm(&(&t - &id)) > R::lit(0.25) {
        if k > 60 {
            return Err(Error::Numerical("matrix square roots did not approach the identity".into()));
        }
        t = triangular_sqrt(&t);
        k += 1;
    }
    let l = log_near_identity(&(&t - &id))? * Complex::new(R::lit(2f64.powi(k as i32)), R::zero());
    Ok((&q * l * q.adjoint(), branches))
}
