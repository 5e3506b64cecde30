//! Iterated function systems, fractal interpolation over foldable figures,
//! affine Weyl groups and wavelet sets.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod error;
pub mod fractal;
pub mod geometry;
pub mod ifs;
pub mod linalg;
pub mod partition;
pub mod sets;
pub mod wavelet;
pub mod weyl;

pub use error::{Error, Result};
