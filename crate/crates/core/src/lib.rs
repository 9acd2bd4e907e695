//! Stability analysis of Pyragas time-delayed feedback control.
//!
//! The controlled system is `ẋ = f(x, t) + K [x(t) − x(t−T)]`. The crate
//! computes characteristic roots of controlled equilibria, Floquet
//! multipliers of controlled periodic linear systems, traces spectra along
//! gain homotopies and decides when stabilization is impossible.
//!
//! Numerics are generic over [`Real`] (`f32` or `f64`); the aliases at the
//! crate root fix the scalar to `f64`.

pub mod cheb;
pub mod eqspec;
pub mod error;
pub mod floquet;
pub mod linalg;
pub mod model;
pub mod scalar;
pub mod sim;
pub mod track;
pub mod verdict;
pub mod vfield;

pub use error::{Error, Result};
pub use scalar::Real;
pub use verdict::{Outcome, Premise, Rule, Verdict, Witness};

pub type RealMatrix = nalgebra::DMatrix<f64>;
pub type ComplexMatrix = nalgebra::DMatrix<num_complex::Complex64>;
pub type RealVector = nalgebra::DVector<f64>;

pub type DelayFeedback = model::DelayFeedback<f64>;
pub type EquilibriumProblem = model::EquilibriumProblem<f64>;
pub type PeriodicLinearProblem = model::PeriodicLinearProblem<f64>;
pub type Problem = model::Problem<f64>;
pub type VectorFieldSpec = vfield::VectorFieldSpec<f64>;
pub type CoefficientFn = vfield::CoefficientFn<f64>;
