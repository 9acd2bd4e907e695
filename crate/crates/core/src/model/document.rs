//! Serializable problem description shared by the catalog and the command line.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::{builtin_coefficient, DelayFeedback, EquilibriumProblem, PeriodicLinearProblem, Problem, Region, Tolerances};
use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::vfield::{CoefficientFn, TrigInterp, VectorFieldSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProblemKind {
    Equilibrium,
    PeriodicLinear,
}

/// Exactly one of `expressions`, `builtin`, `matrix-samples` must be given.
///
/// `matrix-samples` holds row-major `A(t_k)` at `t_k = k T / S`, `k = 0..S`.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct FieldDocument {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expressions: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub params: BTreeMap<String, f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub builtin: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix_samples: Option<Vec<Vec<f64>>>,
}

impl FieldDocument {
    pub fn expressions<S: Into<String>>(components: impl IntoIterator<Item = S>, params: &[(&str, f64)]) -> Self {
        Self {
            expressions: Some(components.into_iter().map(Into::into).collect()),
            params: params.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
            ..Self::default()
        }
    }

    pub fn builtin(name: &str) -> Self {
        Self { builtin: Some(name.to_string()), ..Self::default() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemDocument {
    pub kind: ProblemKind,
    pub dimension: usize,
    pub field: FieldDocument,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub point: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub period: Option<f64>,
    /// Row-major `N×N` gain.
    pub gain: Vec<f64>,
    pub delay: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerances: Option<Tolerances>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub region: Option<Region>,
}

fn input(msg: impl Into<String>) -> Error {
    Error::Input(msg.into())
}

impl ProblemDocument {
    pub fn tolerances(&self) -> Tolerances {
        self.tolerances.clone().unwrap_or_default()
    }

    /// Semantic checks beyond the schema, then construction of the problem.
    pub fn build<R: Real>(&self) -> Result<Problem<R>> {
        let n = self.dimension;
        if n == 0 {
            return Err(input("dimension must be at least 1"));
        }
        if let Some(t) = &self.tolerances {
            t.validate()?;
        }
        if let Some(r) = &self.region {
            r.validate()?;
        }
        let feedback = DelayFeedback::<R>::from_row_major(n, &self.gain, self.delay)?;
        let f = &self.field;
        let given = [f.expressions.is_some(), f.builtin.is_some(), f.matrix_samples.is_some()];
        if given.iter().filter(|g| **g).count() != 1 {
            return Err(input("field needs exactly one of `expressions`, `builtin`, `matrix-samples`"));
        }
        if !f.params.is_empty() && f.expressions.is_none() {
            return Err(input("`params` only applies to `expressions`"));
        }
        let parse = |exprs: &Vec<String>| -> Result<VectorFieldSpec<R>> {
            if exprs.len() != n {
                return Err(input(format!("expected {n} expressions, got {}", exprs.len())));
            }
            VectorFieldSpec::parse(exprs, &f.params)
        };
        match self.kind {
            ProblemKind::Equilibrium => {
                if self.period.is_some() {
                    return Err(input("`period` only applies to periodic-linear problems"));
                }
                let exprs = f.expressions.as_ref().ok_or_else(|| input("equilibrium problems need `expressions`"))?;
                let point = self.point.as_ref().ok_or_else(|| input("equilibrium problems need `point`"))?;
                if point.len() != n {
                    return Err(input(format!("point has {} entries, expected {n}", point.len())));
                }
                let x = DVector::from_iterator(n, point.iter().map(|v| R::lit(*v)));
                Ok(Problem::Equilibrium(EquilibriumProblem::new(parse(exprs)?, x, feedback)?))
            }
            ProblemKind::PeriodicLinear => {
                if self.point.is_some() {
                    return Err(input("`point` only applies to equilibrium problems"));
                }
                let period = self.period.ok_or_else(|| input("periodic-linear problems need `period`"))?;
                let t = R::lit(period);
                let coefficient = if let Some(exprs) = &f.expressions {
                    CoefficientFn::Jacobian(std::sync::Arc::new(parse(exprs)?))
                } else if let Some(name) = &f.builtin {
                    let c = builtin_coefficient::<R>(name, t).ok_or_else(|| input(format!("unknown builtin `{name}`")))?;
                    if c.dimension() != n {
                        return Err(input(format!("builtin `{name}` has dimension {}, not {n}", c.dimension())));
                    }
                    c
                } else {
                    let rows = f.matrix_samples.as_ref().expect("checked above");
                    let mats = rows
                        .iter()
                        .map(|r| {
                            if r.len() != n * n {
                                Err(input(format!("each matrix sample needs {} entries", n * n)))
                            } else {
                                Ok(DMatrix::from_row_slice(n, n, r).map(R::lit))
                            }
                        })
                        .collect::<Result<Vec<_>>>()?;
                    CoefficientFn::Trigonometric(TrigInterp::new(t, &mats)?)
                };
                Ok(Problem::PeriodicLinear(PeriodicLinearProblem::new(coefficient, t, feedback)?))
            }
        }
    }
}

impl Tolerances {
    pub fn validate(&self) -> Result<()> {
        let all = [
            self.tol_eq,
            self.tol_res,
            self.tol_axis,
            self.rank_factor,
            self.tol_comm,
            self.tol_comm_floquet,
            self.tol_resonance,
            self.tol_spec,
            self.tol_one,
            self.mu_floor,
            self.unit_band,
            self.tol_region,
            self.left_margin,
            self.tol_xcheck,
            self.tol_log,
        ];
        if all.iter().all(|v| v.is_finite() && *v > 0.0) {
            Ok(())
        } else {
            Err(input("tolerances must be positive and finite"))
        }
    }
}

/// Default period used by catalog documents.
pub(crate) const TWO_PI: f64 = 2.0 * PI;
