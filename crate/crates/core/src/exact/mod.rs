pub mod coeff;
pub mod polyvu;
pub mod rational;
pub mod series;

pub use coeff::{Atom, Coeff};
pub use polyvu::{Chart, PolyVU};
pub use rational::Rational;
pub use series::{ExactSeries, Mono};
