#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod algebra;
pub mod catalog;
pub mod cli;
pub mod error;
pub mod geometry;
pub mod group;
pub mod radial;
pub mod sampling;

pub use error::{Error, Result};
