//! The group `S = NA`: product, inverse, Haar measure, and the Siegel and ball models.

mod models;
mod space;

pub use models::{BallPoint, SiegelPoint, CAYLEY_ROUND_TRIP_TOL};
pub use space::{AlgebraElement, GroupElement, Space};
