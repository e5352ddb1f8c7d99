//! Sphere points, orthogonal grids, imaginary quadratic orders with level structure,
//! principal-genus class groups, ideal counting and modified Euler factors.
//!
//! Every computation is exact unless it produces an L-value or a statistic; each has an
//! independent brute-force oracle in the test suite. See `examples/` for one runnable
//! program per capability.

pub mod arith;
pub mod cli;
pub mod error;
pub mod ideal_counting;
pub mod lfunc;
pub mod ortho_grid;
pub mod quad_orders;
pub mod sphere;
pub mod stats;

pub use error::{Error, Result};
