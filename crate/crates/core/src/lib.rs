//! Exact verification engine for the loop-equation theory of the GUE partition function.
//!
//! Modules:
//! - [`exact`]: rationals, coefficient ring, graded truncated series, `PolyVU`.
//! - [`ribbon`]: Wick pairing enumeration, `a_g(j)`, the GUE free energy.
//! - [`frobenius`]: NLS and P1 Frobenius data, calibrations, two-point functions, Virasoro operators.
//! - [`hydro`]: genus-zero hydrodynamics, `F_0`, loop-operator identities.
//! - [`jet`]: the jet-space ring with `1/sqrt(D)`, loop equations, genus one and two.
//! - [`suites`]: named verification suites used by the CLI.

pub mod error;
pub mod exact;
pub mod frobenius;
pub mod hydro;
pub mod jet;
pub mod ribbon;
pub mod suites;

pub use error::{Error, Result};
