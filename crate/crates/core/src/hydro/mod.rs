//! Genus-zero hydrodynamics: the flows for `(v, rho)`, `F_0`, and loop-operator identities.

pub mod f0;
pub mod lambda;
pub mod lemmas;
pub mod solve;

pub use f0::{f0_build, f0_from_hydro, phi_rho_extract};
pub use lambda::LambdaSeries;
pub use lemmas::{lemma_checks, GenusZeroData, LemmaReport, LemmaRow};
pub use solve::{solve_vu, solve_vu_with, FlowOrder, HydroState};
