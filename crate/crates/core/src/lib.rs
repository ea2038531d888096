//! Eigen-angle point processes of Haar-random classical group matrices, their
//! quadratic Wasserstein distance to the uniform measure on the circle, exact
//! moment formulas for it, and the limiting laws of the centered statistic.

pub mod dpp;
pub mod ensembles;
pub mod error;
pub mod haar;
pub mod harness;
pub mod limit_laws;
pub mod moments;
pub mod pi_oracle;
pub mod registry;
pub mod rng;
pub mod special;
pub mod stats;
pub mod wasserstein;

pub use error::{Error, Result};
