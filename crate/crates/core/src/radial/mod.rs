//! Radial analysis around the origin of the ball model: the volume density,
//! radial and full Laplacians, and the radial heat flow.

mod density;
mod harmonic;
mod heat;
mod profile;

pub use density::{r_from_rho, rho_from_r};
pub use harmonic::{
    Gaussian, HarmonicityReport, RadialFunction, HARMONIC_TOL, LAPLACE_BELTRAMI_STEP,
};
pub use heat::{gaussian_bump, HeatConfig, HeatSolution, MassRecord, OuterBoundary, HEAT_MASS_TOL};
pub use profile::{uniform_grid, RadialLaplacian, RadialProfile};
