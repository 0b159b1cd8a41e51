pub mod data;
pub mod omega;
pub mod theta;
pub mod virasoro;

pub use data::{axioms_check, AxiomReport, FrobeniusData2D};
pub use omega::two_point_omega;
pub use theta::{theta_p1, theta_recursion_solve, ThetaSystem};
