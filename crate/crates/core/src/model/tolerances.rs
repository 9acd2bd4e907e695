use serde::{Deserialize, Serialize};

/// Numerical tolerances shared by the analyses. Defaults are tuned for `f64`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    /// Equilibrium residual `‖f(x*, t)‖`.
    pub tol_eq: f64,
    /// Relative residual `|d(λ)| / Π‖columns of Δ(λ)‖` accepted for a characteristic root.
    pub tol_res: f64,
    /// Roots with `|Re λ|` below this are marginal, never unstable.
    pub tol_axis: f64,
    /// Singular values below `N·eps·σ_max·rank_factor` count as zero.
    pub rank_factor: f64,
    /// Relative commutator bound `‖JK − KJ‖ ≤ tol_comm·‖J‖·‖K‖` for exact data.
    pub tol_comm: f64,
    /// Relative commutator bound for numerically computed Floquet factors `B`, `P(t)`.
    pub tol_comm_floquet: f64,
    /// An eigenvalue `μ` is resonant when `|Im μ − 2πn/T| ≤ tol_resonance·max(1, ‖J‖)`.
    pub tol_resonance: f64,
    /// Realness of the gain spectrum, relative to `‖K‖`.
    pub tol_spec: f64,
    /// Band around the multiplier 1.
    pub tol_one: f64,
    /// Multipliers with modulus at or below this are not reported.
    pub mu_floor: f64,
    /// `| |μ| − 1 |` at or below this counts as on the unit circle.
    pub unit_band: f64,
    /// Maximal region inflation when a root sits on the search boundary.
    pub tol_region: f64,
    /// Left edge of the default search region is `-left_margin`.
    pub left_margin: f64,
    /// Agreement of the two DDE monodromy constructions (operator 2-norm).
    pub tol_xcheck: f64,
    /// `‖e^{BT} − Y(T)‖` relative to `‖Y(T)‖`.
    pub tol_log: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            tol_eq: 1e-10,
            tol_res: 1e-10,
            tol_axis: 1e-9,
            rank_factor: 1e4,
            tol_comm: 1e-10,
            tol_comm_floquet: 1e-7,
            tol_resonance: 1e-8,
            tol_spec: 1e-9,
            tol_one: 1e-6,
            mu_floor: 1e-3,
            unit_band: 1e-6,
            tol_region: 1e-3,
            left_margin: 0.02,
            tol_xcheck: 1e-6,
            tol_log: 1e-8,
        }
    }
}

impl Tolerances {
    /// Defaults widened so that no tolerance falls below what `f32` can resolve.
    pub fn single_precision() -> Self {
        let eps = f32::EPSILON as f64;
        let d = Self::default();
        Self {
            tol_eq: d.tol_eq.max(1e2 * eps),
            tol_res: d.tol_res.max(1e2 * eps),
            tol_axis: d.tol_axis.max(1e2 * eps),
            rank_factor: 1e2,
            tol_comm: d.tol_comm.max(1e2 * eps),
            tol_comm_floquet: d.tol_comm_floquet.max(1e3 * eps),
            tol_resonance: d.tol_resonance.max(1e2 * eps),
            tol_spec: d.tol_spec.max(1e2 * eps),
            tol_one: d.tol_one.max(1e3 * eps),
            unit_band: d.unit_band.max(1e3 * eps),
            tol_xcheck: 1e-3,
            tol_log: d.tol_log.max(1e3 * eps),
            ..d
        }
    }
}
