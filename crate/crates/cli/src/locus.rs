//! Continued eigenvalue and multiplier traces.

use clap::ValueEnum;
use num_complex::Complex;
use pyragas::eqspec::{eigenvalue_locus, homotopy_trace, CharacteristicMatrix, GainPath};
use pyragas::floquet::{homotopy_multipliers, TRACK_FLOOR};
use pyragas::linalg::to_complex;
use pyragas::model::{Region, Tolerances};
use pyragas::track::{Trace, TrackOptions};
use pyragas::{EquilibriumProblem, PeriodicLinearProblem, Result};
use serde::Serialize;

use crate::report::{Cell, Csv};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PathKind {
    /// Gain `s·base` with real `s`.
    Real,
    /// Gain `i·s·base`.
    Imaginary,
    /// Gain `e^{iφ}·s·base` for the angle given by `--angle`.
    Ray,
    /// Control homotopy `α` from 0 to 1 at the document's gain.
    Homotopy,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum GainBase {
    /// Scalar gain `k·I`.
    Identity,
    /// The gain matrix of the document.
    Document,
}

#[derive(Debug, Clone, Serialize)]
pub struct PathSpec {
    pub kind: PathKind,
    pub base: GainBase,
    pub from: f64,
    pub to: f64,
    pub angle: Option<f64>,
}

impl PathSpec {
    fn direction(&self) -> Complex<f64> {
        match self.kind {
            PathKind::Real | PathKind::Homotopy => Complex::new(1.0, 0.0),
            PathKind::Imaginary => Complex::new(0.0, 1.0),
            PathKind::Ray => Complex::from_polar(1.0, self.angle.unwrap_or(0.0)),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct TraceSample {
    pub s: f64,
    pub re: f64,
    pub im: f64,
}

#[derive(Debug, Serialize)]
pub struct TraceRows {
    pub id: usize,
    pub samples: Vec<TraceSample>,
}

#[derive(Debug, Serialize)]
pub struct Locus {
    pub path: PathSpec,
    /// `eigenvalues` or `multipliers`.
    pub quantity: &'static str,
    pub traces: Vec<TraceRows>,
}

fn rows(path: &PathSpec, quantity: &'static str, traces: Vec<Trace>) -> (Locus, Csv) {
    let mut csv = Csv::new(["s", "re", "im", "trace"]);
    let mut flat: Vec<(f64, usize, Complex<f64>)> =
        traces.iter().flat_map(|t| t.samples.iter().map(move |(s, z)| (*s, t.id, *z))).collect();
    flat.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    for (s, id, z) in flat {
        csv.row([s.into(), z.re.into(), z.im.into(), Cell::from(id)]);
    }
    let traces = traces
        .into_iter()
        .map(|t| TraceRows { id: t.id, samples: t.samples.into_iter().map(|(s, z)| TraceSample { s, re: z.re, im: z.im }).collect() })
        .collect();
    (Locus { path: path.clone(), quantity, traces }, csv)
}

pub fn equilibrium(p: &EquilibriumProblem, path: &PathSpec, region: Option<Region>, tol: &Tolerances) -> Result<(Locus, Csv)> {
    let opts = TrackOptions::default();
    let track = if path.kind == PathKind::Homotopy {
        homotopy_trace(&CharacteristicMatrix::from_problem(p, 1.0)?, region, tol, &opts)?
    } else {
        let n = p.dimension();
        let gain = match path.base {
            GainBase::Identity => GainPath::scalar(n, path.direction(), path.from, path.to),
            GainBase::Document => GainPath { base: to_complex(p.feedback().gain()), direction: path.direction(), s0: path.from, s1: path.to },
        };
        eigenvalue_locus(&p.jacobian()?, p.feedback().delay(), &gain, region, tol, &opts)?
    };
    Ok(rows(path, "eigenvalues", track.traces()))
}

/// Only the control homotopy is available: the delayed gain must stay real.
pub fn periodic(p: &PeriodicLinearProblem, nodes: usize, tol: &Tolerances) -> Result<(Locus, Csv)> {
    let path = PathSpec { kind: PathKind::Homotopy, base: GainBase::Document, from: 0.0, to: 1.0, angle: None };
    let track = homotopy_multipliers(p, nodes, TRACK_FLOOR, tol, &TrackOptions::default())?;
    Ok(rows(&path, "multipliers", track.traces()))
}
