//! Spectra of controlled equilibria: characteristic roots, resonating
//! centers, homotopy traces, Hopf curves and the equilibrium verdicts.

mod charmat;
mod hopf;
mod locus;
mod resonance;
mod roots;
mod verdicts;

pub use charmat::{char_det, one_minus_exp, CharacteristicMatrix};
pub use hopf::{hopf_curves, hopf_gain, hopf_tangent, HopfBranch, HopfCurveFamily, HopfSample};
pub use locus::{eigenvalue_locus, homotopy_trace, GainPath, RootTrack};
pub use resonance::{check_resonance_invariance, resonating_center, ResonanceCheck};
pub use roots::{default_region, find_roots, Root, SpectrumReport};
pub use verdicts::{any_number_complex_verdict, any_number_real_verdict, odd_number_verdict};
pub(crate) use verdicts::{fmt_complex, fmt_list};
pub use crate::model::Region;
