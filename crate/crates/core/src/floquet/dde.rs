//! Collocation matrices for the controlled monodromy operator `Y₁(T)`.
//!
//! A history `φ` on `[−T, 0]` is represented by its values at `M`
//! Chebyshev–Gauss–Lobatto nodes `θ_0 = −T < … < θ_{M−1} = 0`. The matrix
//! acts on the stacked vector `(φ(θ_0), …, φ(θ_{M−1}))` and returns the
//! solution segment `(y(T + θ_i))_i`. Because the delay equals the period,
//! the controlled equation over one period reads
//! `ẏ = (A(t) + αK) y − αK φ(t − T)`.

use nalgebra::{DMatrix, DVector};

use super::ode::{fundamental_at, system_matrix};
use crate::cheb::ChebGrid;
use crate::error::{Error, Result};
use crate::linalg::{lu_solve_real, spectral_norm_real};
use crate::model::{PeriodicLinearProblem, Tolerances};
use crate::scalar::Real;
use crate::vfield::CoefficientFn;

/// Steps per period used for every fundamental-matrix integration.
const STEPS_PER_PERIOD: f64 = 4096.0;
/// Minimum RK4 substeps between consecutive collocation nodes.
const MIN_SUBSTEPS: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Construction {
    IntegralForm,
    TimeStepped,
}

#[derive(Debug, Clone)]
pub struct MonodromyDde<R: Real = f64> {
    grid: ChebGrid<R>,
    matrix: DMatrix<R>,
    construction: Construction,
    dimension: usize,
    alpha: R,
    /// `‖U_integral − U_stepped‖₂` when both constructions were built.
    pub cross_check: Option<R>,
}

impl<R: Real> MonodromyDde<R> {
    /// Collocation nodes on `[−T, 0]`, ascending.
    pub fn nodes(&self) -> &[R] {
        self.grid.nodes()
    }

    pub fn grid(&self) -> &ChebGrid<R> {
        &self.grid
    }

    pub fn matrix(&self) -> &DMatrix<R> {
        &self.matrix
    }

    pub fn construction(&self) -> Construction {
        self.construction
    }

    /// State dimension `N`; the matrix is `MN × MN`.
    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn alpha(&self) -> R {
        self.alpha
    }

    /// Splits a stacked nodal vector into the `M` node values.
    pub fn unstack(&self, v: &DVector<R>) -> Vec<DVector<R>> {
        let n = self.dimension;
        (0..self.grid.len()).map(|i| v.rows(i * n, n).into_owned()).collect()
    }
}

fn validate_nodes(m: usize) -> Result<()> {
    if m < 2 {
        return Err(Error::Input("the collocation grid needs at least two nodes".into()));
    }
    Ok(())
}

fn integral_form<R: Real>(problem: &PeriodicLinearProblem<R>, ak: &DMatrix<R>, grid: &ChebGrid<R>) -> Result<DMatrix<R>> {
    let n = problem.dimension();
    let m = grid.len();
    let period = problem.period();
    // Nested grid: coarse node i coincides with fine node 2i.
    let fine = ChebGrid::lobatto(2 * m - 1, -period, R::zero());
    let q = fine.cumulative_matrix();
    let times: Vec<R> = fine.nodes().iter().map(|&s| period + s).collect();
    let h_max = period / R::lit(STEPS_PER_PERIOD);
    let ya = fundamental_at(problem.coefficient(), Some(ak), &times, h_max, 8)?;
    // W_k = Y_A(T + s_k)⁻¹ αK
    let w = ya
        .iter()
        .map(|y| lu_solve_real(y, ak).ok_or_else(|| Error::Numerical("Y_A is singular on the grid".into())))
        .collect::<Result<Vec<_>>>()?;
    let basis: Vec<Vec<R>> = fine.nodes().iter().map(|&s| grid.basis_at(s)).collect();

    let mut u = DMatrix::zeros(m * n, m * n);
    let mut acc = vec![DMatrix::<R>::zeros(n, n); m];
    for i in 0..m {
        let row = 2 * i;
        for a in acc.iter_mut() {
            a.fill(R::zero());
        }
        for k in 0..fine.len() {
            let qk = q[(row, k)];
            if qk == R::zero() {
                continue;
            }
            for (j, a) in acc.iter_mut().enumerate() {
                let c = qk * basis[k][j];
                if c != R::zero() {
                    *a += &w[k] * c;
                }
            }
        }
        let y = &ya[row];
        for (j, a) in acc.iter().enumerate() {
            let mut block = -(y * a);
            if j == m - 1 {
                block += y;
            }
            u.view_mut((i * n, j * n), (n, n)).copy_from(&block);
        }
    }
    Ok(u)
}

/// Integrates `ż = (A(t) + αK) z − αK H(t − T) c` on `[0, T]` from `z(times[0])`, where
/// `H(s) = [ℓ_0(s) I, …, ℓ_{M−1}(s) I]` and `c = I` when absent, recording `z` at each of `times`.
fn history_response<R: Real>(
    coef: &CoefficientFn<R>,
    ak: &DMatrix<R>,
    grid: &ChebGrid<R>,
    c: Option<&DMatrix<R>>,
    z0: DMatrix<R>,
    times: &[R],
    period: R,
) -> Result<Vec<DMatrix<R>>> {
    let n = ak.nrows();
    let m = grid.len();
    let forcing = |t: R| -> DMatrix<R> {
        let l = grid.basis_at(t - period);
        match c {
            None => {
                let mut f = DMatrix::<R>::zeros(n, m * n);
                for (j, &lj) in l.iter().enumerate() {
                    if lj != R::zero() {
                        f.view_mut((0, j * n), (n, n)).copy_from(&(ak * -lj));
                    }
                }
                f
            }
            Some(c) => {
                let mut h = DMatrix::<R>::zeros(n, c.ncols());
                for (j, &lj) in l.iter().enumerate() {
                    if lj != R::zero() {
                        h += c.rows(j * n, n) * lj;
                    }
                }
                -(ak * h)
            }
        }
    };
    let rhs = |t: R, z: &DMatrix<R>| -> Result<DMatrix<R>> { Ok(system_matrix(coef, Some(ak), t)? * z + forcing(t)) };

    let h_max = period / R::lit(STEPS_PER_PERIOD);
    let half = R::lit(0.5);
    let mut z = z0;
    let mut out = vec![z.clone()];
    for win in times.windows(2) {
        let len = win[1] - win[0];
        let sub = ((len / h_max).ceil().to_f64_lossy() as usize).max(MIN_SUBSTEPS);
        let h = len / R::from_usize_lossy(sub);
        for s in 0..sub {
            let t = win[0] + h * R::from_usize_lossy(s);
            let k1 = rhs(t, &z)?;
            let k2 = rhs(t + half * h, &(&z + &k1 * (half * h)))?;
            let k3 = rhs(t + half * h, &(&z + &k2 * (half * h)))?;
            let k4 = rhs(t + h, &(&z + &k3 * h))?;
            z += (k1 + (k2 + k3) * R::lit(2.0) + k4) * (h / R::lit(6.0));
        }
        if !z.iter().all(|x| x.is_finite()) {
            return Err(Error::Numerical(format!("history response overflowed before t = {:?}", win[1])));
        }
        out.push(z.clone());
    }
    Ok(out)
}

fn time_stepped<R: Real>(problem: &PeriodicLinearProblem<R>, ak: &DMatrix<R>, grid: &ChebGrid<R>) -> Result<DMatrix<R>> {
    let n = problem.dimension();
    let m = grid.len();
    let period = problem.period();
    let mut z0 = DMatrix::<R>::zeros(n, m * n);
    z0.view_mut((0, (m - 1) * n), (n, n)).fill_with_identity();
    let times: Vec<R> = grid.nodes().iter().map(|&th| period + th).collect();
    let rows = history_response(problem.coefficient(), ak, grid, None, z0, &times, period)?;
    let mut u = DMatrix::zeros(m * n, m * n);
    for (i, z) in rows.iter().enumerate() {
        u.rows_mut(i * n, n).copy_from(z);
    }
    Ok(u)
}

/// Builds one construction without cross-checking.
pub fn dde_monodromy_with<R: Real>(
    problem: &PeriodicLinearProblem<R>,
    alpha: R,
    nodes: usize,
    construction: Construction,
) -> Result<MonodromyDde<R>> {
    validate_nodes(nodes)?;
    let grid = ChebGrid::lobatto(nodes, -problem.period(), R::zero());
    let ak = problem.feedback().gain() * alpha;
    let matrix = match construction {
        Construction::IntegralForm => integral_form(problem, &ak, &grid)?,
        Construction::TimeStepped => time_stepped(problem, &ak, &grid)?,
    };
    Ok(MonodromyDde { grid, matrix, construction, dimension: problem.dimension(), alpha, cross_check: None })
}

/// Integral-form matrix, cross-checked against the time-stepped one relative to `max(1, ‖U‖)`.
pub fn dde_monodromy<R: Real>(
    problem: &PeriodicLinearProblem<R>,
    alpha: R,
    nodes: usize,
    tol: &Tolerances,
) -> Result<MonodromyDde<R>> {
    let mut primary = dde_monodromy_with(problem, alpha, nodes, Construction::IntegralForm)?;
    let check = dde_monodromy_with(problem, alpha, nodes, Construction::TimeStepped)?;
    let residual = spectral_norm_real(&(&primary.matrix - &check.matrix));
    primary.cross_check = Some(residual);
    let limit = R::tol(tol.tol_xcheck, 1e4) * spectral_norm_real(&primary.matrix).max(R::one());
    if !(residual <= limit) {
        return Err(Error::Numerical(format!(
            "monodromy constructions disagree by {residual:?} at M = {nodes}; refine the grid"
        )));
    }
    Ok(primary)
}

/// Solution `y(t)` on `[0, T]` of the controlled equation for the history given by
/// nodal values `phi` on the grid of `u`, evaluated at ascending `times` in `[0, T]`.
pub fn extend_history<R: Real>(
    problem: &PeriodicLinearProblem<R>,
    u: &MonodromyDde<R>,
    phi: &[DVector<R>],
    times: &[R],
) -> Result<Vec<DVector<R>>> {
    let n = problem.dimension();
    if phi.len() != u.grid.len() || phi.iter().any(|v| v.len() != n) {
        return Err(Error::Input("history values do not match the collocation grid".into()));
    }
    let period = problem.period();
    if times.iter().any(|&t| t < R::zero() || t > period) || times.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::Input("evaluation times must ascend within [0, T]".into()));
    }
    let mut c = DMatrix::zeros(u.grid.len() * n, 1);
    for (j, v) in phi.iter().enumerate() {
        c.view_mut((j * n, 0), (n, 1)).copy_from(v);
    }
    let mut all = vec![R::zero()];
    all.extend_from_slice(times);
    let ak = problem.feedback().gain() * u.alpha;
    let z0 = DMatrix::from_column_slice(n, 1, phi.last().expect("non-empty grid").as_slice());
    let out = history_response(problem.coefficient(), &ak, &u.grid, Some(&c), z0, &all, period)?;
    Ok(out.into_iter().skip(1).map(|z| z.column(0).into_owned()).collect())
}
