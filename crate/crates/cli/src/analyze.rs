//! Verdicts and spectra of a problem document.

use std::f64::consts::TAU;

use pyragas::eqspec::{
    any_number_complex_verdict, any_number_real_verdict, check_resonance_invariance, default_region, find_roots, odd_number_verdict,
    CharacteristicMatrix, ResonanceCheck, SpectrumReport,
};
use pyragas::floquet::{dde_monodromy, multipliers, ode_monodromy, periodic_verdicts, MultiplierReport};
use pyragas::model::{validate_equilibrium, Region, Tolerances};
use pyragas::{EquilibriumProblem, PeriodicLinearProblem, Result, Verdict};
use serde::Serialize;

use crate::report::{Cell, Csv, Point};

/// Steps of the RK4 monodromy of the uncontrolled system.
pub const ODE_STEPS: usize = 2048;

#[derive(Debug, Serialize)]
pub struct RootRow {
    pub re: f64,
    pub im: f64,
    pub geometric: usize,
    pub algebraic: usize,
}

#[derive(Debug, Serialize)]
pub struct Spectrum {
    pub region: Region,
    pub count: usize,
    pub unstable: usize,
    pub dominant: Option<Point>,
    pub roots: Vec<RootRow>,
}

impl Spectrum {
    pub fn new(report: &SpectrumReport, tol: &Tolerances) -> Self {
        Self {
            region: report.region,
            count: report.count,
            unstable: report.unstable_count(tol.tol_axis),
            dominant: report.dominant().map(|r| r.value.into()),
            roots: report.roots.iter().map(|r| RootRow { re: r.value.re, im: r.value.im, geometric: r.geometric, algebraic: r.algebraic }).collect(),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct Resonance {
    pub n: i64,
    #[serde(flatten)]
    pub check: ResonanceCheck,
}

#[derive(Debug, Serialize)]
pub struct EquilibriumAnalysis {
    pub kind: &'static str,
    pub equilibrium_residual: f64,
    pub uncontrolled: Spectrum,
    pub controlled: Spectrum,
    /// One entry per resonance index `n` of an unstable eigenvalue of the Jacobian.
    pub resonance: Vec<Resonance>,
    pub verdicts: Vec<Verdict>,
}

#[derive(Debug, Serialize)]
pub struct Multipliers {
    pub outside: usize,
    pub on_circle: usize,
    pub inside: usize,
    pub real_above_one: usize,
    pub at_one: usize,
    pub norm: f64,
    pub multipliers: Vec<RootRow>,
}

impl From<&MultiplierReport> for Multipliers {
    fn from(r: &MultiplierReport) -> Self {
        Self {
            outside: r.outside,
            on_circle: r.on_circle,
            inside: r.inside,
            real_above_one: r.real_above_one,
            at_one: r.at_one,
            norm: r.norm,
            multipliers: r
                .multipliers
                .iter()
                .map(|m| RootRow { re: m.value.re, im: m.value.im, geometric: m.geometric, algebraic: m.algebraic })
                .collect(),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct PeriodicAnalysis {
    pub kind: &'static str,
    pub nodes: usize,
    pub uncontrolled: Multipliers,
    pub controlled: Multipliers,
    pub verdicts: Vec<Verdict>,
}

const SPECTRUM_HEADER: [&str; 5] = ["alpha", "re", "im", "geometric", "algebraic"];

fn push_rows(csv: &mut Csv, alpha: f64, rows: &[RootRow]) {
    for r in rows {
        csv.row([alpha.into(), r.re.into(), r.im.into(), Cell::from(r.geometric), Cell::from(r.algebraic)]);
    }
}

pub fn equilibrium(p: &EquilibriumProblem, region: Option<Region>, tol: &Tolerances) -> Result<(EquilibriumAnalysis, Csv)> {
    let residual = validate_equilibrium(p)?;
    let verdicts = vec![odd_number_verdict(p, tol)?, any_number_real_verdict(p, tol)?, any_number_complex_verdict(p, tol)?];
    let controlled = CharacteristicMatrix::from_problem(p, 1.0)?;
    let region = region.unwrap_or_else(|| default_region(&controlled, tol));
    let before = Spectrum::new(&find_roots(&controlled.with_alpha(0.0), &region, tol)?, tol);
    let after = Spectrum::new(&find_roots(&controlled, &region, tol)?, tol);

    let delay = p.feedback().delay();
    let mut indices: Vec<i64> =
        before.roots.iter().filter(|r| r.re > tol.tol_axis).map(|r| (r.im.abs() * delay / TAU).round() as i64).collect();
    indices.sort_unstable();
    indices.dedup();
    let resonance = indices.into_iter().map(|n| Resonance { n, check: check_resonance_invariance(&controlled, n, tol) }).collect();

    let mut csv = Csv::new(SPECTRUM_HEADER);
    push_rows(&mut csv, 0.0, &before.roots);
    push_rows(&mut csv, 1.0, &after.roots);
    let analysis = EquilibriumAnalysis {
        kind: "equilibrium",
        equilibrium_residual: residual,
        uncontrolled: before,
        controlled: after,
        resonance,
        verdicts,
    };
    Ok((analysis, csv))
}

pub fn periodic(p: &PeriodicLinearProblem, nodes: usize, tol: &Tolerances) -> Result<(PeriodicAnalysis, Csv)> {
    let before = Multipliers::from(&multipliers(&ode_monodromy(p, ODE_STEPS)?, tol)?);
    let after = Multipliers::from(&multipliers(&dde_monodromy(p, 1.0, nodes, tol)?, tol)?);
    let verdicts = periodic_verdicts(p, nodes, tol)?;
    let mut csv = Csv::new(SPECTRUM_HEADER);
    push_rows(&mut csv, 0.0, &before.multipliers);
    push_rows(&mut csv, 1.0, &after.multipliers);
    Ok((PeriodicAnalysis { kind: "periodic-linear", nodes, uncontrolled: before, controlled: after, verdicts }, csv))
}
