//! Floquet multipliers, their geometric multiplicities and the determining center.

use nalgebra::{ComplexField, DMatrix};
use num_complex::Complex;
use serde::Serialize;

use super::dde::{dde_monodromy, MonodromyDde};
use super::ode::{ode_monodromy, MonodromyOde};
use crate::error::{Error, Result};
use crate::linalg::{eigenvalues_real, kernel_dimension, spectral_norm_real, to_complex, CMatrix};
use crate::model::{PeriodicLinearProblem, Tolerances};
use crate::scalar::Real;

/// Anything with a finite monodromy matrix.
pub trait MonodromyMatrix<R: Real> {
    fn monodromy_matrix(&self) -> &DMatrix<R>;
}

impl<R: Real> MonodromyMatrix<R> for MonodromyOde<R> {
    fn monodromy_matrix(&self) -> &DMatrix<R> {
        self.monodromy()
    }
}

impl<R: Real> MonodromyMatrix<R> for MonodromyDde<R> {
    fn monodromy_matrix(&self) -> &DMatrix<R> {
        self.matrix()
    }
}

impl<R: Real> MonodromyMatrix<R> for DMatrix<R> {
    fn monodromy_matrix(&self) -> &DMatrix<R> {
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Multiplier<R: Real = f64> {
    pub value: Complex<R>,
    pub geometric: usize,
    pub algebraic: usize,
}

/// Multipliers with `|μ| > mu_floor`; counts include algebraic multiplicity.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiplierReport<R: Real = f64> {
    pub multipliers: Vec<Multiplier<R>>,
    pub outside: usize,
    pub on_circle: usize,
    pub inside: usize,
    /// Real multipliers in `(1 + unit_band, ∞)`.
    pub real_above_one: usize,
    /// Geometric multiplicity of `μ = 1` (0 when absent).
    pub at_one: usize,
    /// Operator 2-norm of the monodromy matrix.
    pub norm: R,
}

impl<R: Real> MultiplierReport<R> {
    /// Every multiplier repeated by algebraic multiplicity.
    pub fn expanded(&self) -> Vec<Complex<R>> {
        self.multipliers.iter().flat_map(|m| std::iter::repeat_n(m.value, m.algebraic)).collect()
    }

    pub fn is_real(&self, m: &Multiplier<R>, tol: &Tolerances) -> bool {
        m.value.im.abs() <= R::tol(tol.tol_spec, 1e2) * m.value.modulus().max(R::one())
    }
}

/// Geometric multiplicity of `mu` as an eigenvalue of `y`, clamped to `[1, algebraic]`.
fn geometric_multiplicity<R: Real>(y: &CMatrix<R>, mu: Complex<R>, algebraic: usize, tol: &Tolerances) -> usize {
    if algebraic <= 1 {
        return 1;
    }
    let n = y.nrows();
    let shifted = CMatrix::<R>::identity(n, n) * mu - y;
    let norm = crate::linalg::spectral_norm(y);
    let rank_tau = crate::linalg::rank_threshold(n, norm, R::lit(tol.rank_factor));
    let threshold = rank_tau.max(R::tol(tol.tol_one, 1e2) * norm.max(R::one()));
    kernel_dimension(&shifted, threshold).clamp(1, algebraic.max(1))
}

/// Dense eigensolve of the monodromy matrix with clustering and multiplicities.
pub fn multipliers<R: Real>(m: &impl MonodromyMatrix<R>, tol: &Tolerances) -> Result<MultiplierReport<R>> {
    let y = m.monodromy_matrix();
    if !y.iter().all(|x| x.is_finite()) {
        return Err(Error::Numerical("monodromy matrix has non-finite entries".into()));
    }
    let floor = R::lit(tol.mu_floor);
    let tol_one = R::tol(tol.tol_one, 1e2);
    let mut eigs: Vec<Complex<R>> = eigenvalues_real(y).into_iter().filter(|z| z.modulus() > floor).collect();
    if eigs.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
        return Err(Error::Numerical("eigensolver did not converge".into()));
    }
    eigs.sort_by(|a, b| b.modulus().partial_cmp(&a.modulus()).unwrap_or(std::cmp::Ordering::Equal));

    // The μ = 1 band is its own cluster; others are joined by single linkage.
    let one = Complex::new(R::one(), R::zero());
    let (near_one, rest): (Vec<_>, Vec<_>) = eigs.into_iter().partition(|z| (*z - one).modulus() <= tol_one);
    let link = R::lit(1e-6);
    let mut clusters: Vec<Vec<Complex<R>>> = Vec::new();
    for z in rest {
        let hit = clusters
            .iter()
            .position(|c| c.iter().any(|w| (*w - z).modulus() <= link * z.modulus().max(R::one())));
        match hit {
            Some(i) => clusters[i].push(z),
            None => clusters.push(vec![z]),
        }
    }

    let yc = to_complex(y);
    let mut out = Vec::new();
    let mut at_one = 0;
    if !near_one.is_empty() {
        at_one = geometric_multiplicity(&yc, one, near_one.len(), tol);
        out.push(Multiplier { value: one, geometric: at_one, algebraic: near_one.len() });
    }
    for c in clusters {
        let count = R::from_usize_lossy(c.len());
        let mut center = c.iter().fold(Complex::new(R::zero(), R::zero()), |a, z| a + z) / Complex::new(count, R::zero());
        // Conjugate-closed clusters of a real matrix are real.
        if center.im.abs() <= R::lit(tol.tol_spec) * center.modulus().max(R::one()) && c.len() % 2 == 0 {
            center.im = R::zero();
        }
        let geometric = geometric_multiplicity(&yc, center, c.len(), tol);
        out.push(Multiplier { value: center, geometric, algebraic: c.len() });
    }
    out.sort_by(|a, b| b.value.modulus().partial_cmp(&a.value.modulus()).unwrap_or(std::cmp::Ordering::Equal));

    let band = R::lit(tol.unit_band);
    let mut report = MultiplierReport {
        multipliers: Vec::new(),
        outside: 0,
        on_circle: 0,
        inside: 0,
        real_above_one: 0,
        at_one,
        norm: spectral_norm_real(y),
    };
    for m in &out {
        let r = m.value.modulus();
        if r > R::one() + band {
            report.outside += m.algebraic;
            if report.is_real(m, tol) && m.value.re > R::one() {
                report.real_above_one += m.algebraic;
            }
        } else if r >= R::one() - band {
            report.on_circle += m.algebraic;
        } else {
            report.inside += m.algebraic;
        }
    }
    report.multipliers = out;
    Ok(report)
}

/// Geometric multiplicity of the multiplier 1 without and with control.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct DeterminingCenter {
    pub g_ode: usize,
    /// At the requested grid.
    pub g_dde: usize,
    /// At the doubled grid.
    pub g_dde_refined: usize,
    pub equal: bool,
}

/// Compares `dim ker(I − Y₀(T))` with the discretized `dim ker(I − Y₁(T))` at `M` and `2M` nodes.
pub fn check_determining_invariance<R: Real>(
    problem: &PeriodicLinearProblem<R>,
    alpha: R,
    nodes: usize,
    tol: &Tolerances,
) -> Result<DeterminingCenter> {
    let ode = ode_monodromy(problem, 2048)?;
    let g_ode = multipliers(&ode, tol)?.at_one;
    let g_dde = multipliers(&dde_monodromy(problem, alpha, nodes, tol)?, tol)?.at_one;
    let g_dde_refined = multipliers(&dde_monodromy(problem, alpha, 2 * nodes, tol)?, tol)?.at_one;
    if g_dde != g_dde_refined {
        return Err(Error::Inconclusive(format!(
            "multiplicity of the multiplier 1 changes from {g_dde} to {g_dde_refined} when refining M = {nodes} to {}",
            2 * nodes
        )));
    }
    Ok(DeterminingCenter { g_ode, g_dde, g_dde_refined, equal: g_ode == g_dde })
}
