//! Local-formula evaluation of the 2-Selmer parity of `Jac C x Prym(D/C)`
//! for double covers of genus 2 and 3 hyperelliptic curves.

pub mod cover;
pub mod error;
pub mod local_solubility;
pub mod odd_places;
pub mod overrides;
pub mod pipeline;
pub mod real_place;
pub mod report;
pub mod two_adic;
pub mod two_torsion;

pub use cover::{CaseTag, DoubleCoverDatum, HyperellipticCurve, PrymDescriptor};
pub use error::{CoreError, Result};
pub use local_solubility::Place;
pub use overrides::Overrides;
pub use report::LocalTermReport;
