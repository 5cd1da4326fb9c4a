//! Clifford-module generators and the H-type algebra they define.

mod clifford;
mod htype;

pub use clifford::{
    build_module, has_chirality, min_dimension, verify_clifford, CliffordModule, CliffordReport,
    CliffordSpec, Multiplicity, CLIFFORD_TOL,
};
pub use htype::HTypeAlgebra;
