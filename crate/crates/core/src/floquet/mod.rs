//! Floquet analysis of periodic linear systems with and without the delayed
//! feedback: ODE monodromy, normal form `Y₀(t) = P(t)e^{Bt}`, collocation
//! matrices for the controlled monodromy operator, multiplier spectra,
//! homotopy traces and the periodic limitation verdicts.

mod commute;
mod dde;
mod decompose;
mod homotopy;
mod logm;
mod multipliers;
mod ode;
mod verdicts;

pub use commute::{common_eigenpair, commuting_check, CommonEigenpair, CommutingCheck, P_SAMPLES};
pub use dde::{dde_monodromy, dde_monodromy_with, extend_history, Construction, MonodromyDde};
pub use decompose::{floquet_decompose, FloquetDecomposition};
pub use homotopy::{homotopy_multipliers, MultiplierTrack, TRACK_FLOOR};
pub use logm::{logm, BranchInfo};
pub use multipliers::{check_determining_invariance, multipliers, DeterminingCenter, MonodromyMatrix, Multiplier, MultiplierReport};
pub use ode::{ode_monodromy, MonodromyOde};
pub use verdicts::{periodic_verdicts, scalar_reduction_verdict};
