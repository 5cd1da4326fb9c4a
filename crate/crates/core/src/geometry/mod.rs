//! Left-invariant Riemannian geometry of `S`: connection and curvature on the
//! Lie algebra, and the metric, geodesics and distance in the ball model.

mod ball;
mod curvature;
mod frame;
mod geodesic;
mod subalgebra;

pub use ball::{distance_from_origin, METRIC_FD_STEP, MIN_BOUNDARY_MARGIN};
pub use curvature::{
    koszul_connection, Connection, CurvatureData, CurvatureSymmetries, SymmetryVerdict,
    NONSYMMETRIC_REL_SEPARATION, SYMMETRIC_REL_TOL,
};
pub use frame::{frame_coordinates, Frame};
pub use geodesic::{GeodesicPath, GeodesicSample, DEFAULT_GEODESIC_STEP};
pub use subalgebra::{subalgebra_frame, TotallyGeodesicReport, SUBALGEBRA_BASIS};
