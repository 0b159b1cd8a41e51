//! Jet-variable ring, the loop equation in jets and the higher-genus free energies.

pub mod element;
pub mod evaluate;
pub mod functional;
pub mod genus2;
pub mod loop_eq;
pub mod poly;

pub use element::JetElement;
pub use functional::{dilaton_jet_check, genus_one, genus_one_corrupted, DilatonReport, JetFunctional};
pub use loop_eq::{compare_slots, sampled_nonzero, loop_residuals, required_jet_order, residual, slots, LoopCertificate, LoopSlots, LoopSystem, StructuralCertificate};
pub use poly::{JetPoly, JetVar};
pub use evaluate::{compare_with_ribbon, evaluate_on_solution, GenusComparison, SolutionJets};
pub use genus2::{solve_g2, Genus2Attempt, Genus2Solution};
