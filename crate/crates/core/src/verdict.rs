//! Structured outcomes of the stabilization-limitation rules.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Outcome {
    /// Stabilization by the given control is impossible.
    Excluded,
    /// The rule does not apply; nothing is concluded.
    NotExcluded,
}

/// The limitation rule a verdict was produced by.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Rule {
    /// Equilibrium, odd number of right-half-plane eigenvalues, no zero eigenvalue.
    OddNumberEquilibrium,
    /// Equilibrium with a resonant unstable eigenvalue and a commuting gain of real spectrum.
    AnyNumberRealEquilibrium,
    /// Equilibrium with a resonant unstable eigenvalue and a commuting gain.
    AnyNumberComplexEquilibrium,
    /// Bookkeeping of the Floquet multiplier 1 (preserved by the control).
    DeterminingCenter,
    /// Periodic system, no multiplier 1, odd number of real multipliers above 1.
    OddNumberPeriodic,
    /// Periodic system, real multiplier above 1, gain commuting with the Floquet factors, real gain spectrum.
    AnyNumberRealPeriodic,
    /// Periodic system, real multiplier above 1, gain commuting with the Floquet factors.
    AnyNumberComplexPeriodic,
    /// Scalar reduced equation `ẇ = λ* w + k* [w(t) − w(t−T)]`.
    ScalarReduction,
}

/// One checked premise of a rule.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Premise {
    pub name: String,
    pub holds: bool,
    pub detail: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
}

impl Premise {
    pub fn new(name: &str, holds: bool, detail: impl Into<String>, tolerance: Option<f64>) -> Self {
        Self { name: name.to_string(), holds, detail: detail.into(), tolerance }
    }
}

/// Eigenvalue, characteristic root or multiplier that justifies an outcome.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub description: String,
    pub re: f64,
    pub im: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub outcome: Outcome,
    pub rule: Rule,
    pub premises: Vec<Premise>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
}

impl Verdict {
    /// `Excluded` exactly when every premise holds.
    pub fn from_premises(rule: Rule, premises: Vec<Premise>, witness: Option<Witness>) -> Self {
        let outcome = if !premises.is_empty() && premises.iter().all(|p| p.holds) {
            Outcome::Excluded
        } else {
            Outcome::NotExcluded
        };
        Self { outcome, rule, premises, witness }
    }

    /// Bookkeeping verdict that never excludes anything.
    pub fn informational(rule: Rule, premises: Vec<Premise>, witness: Option<Witness>) -> Self {
        Self { outcome: Outcome::NotExcluded, rule, premises, witness }
    }

    pub fn is_excluded(&self) -> bool {
        self.outcome == Outcome::Excluded
    }
}
