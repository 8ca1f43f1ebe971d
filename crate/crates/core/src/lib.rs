//! Exact kernels and pathwise statistics for weighted odd-power variations of
//! fractional Brownian motion and of fractional Brownian motion in Brownian time.
//!
//! This crate is `no_std` (it needs `alloc`). It contains everything that is a
//! deterministic function of its inputs:
//!
//! * [`gaussian`]: Hermite polynomials and expansion coefficients, Gaussian
//!   moments, fBm covariance and fGn correlation, the limiting constant
//!   [`gaussian::sigma_r`] and the inner-product sums used for diagnostics.
//! * [`grid`]: dyadic grids and sampled paths.
//! * [`weight`]: weight functions with exact derivatives.
//! * [`variation`]: midpoint, trapezoidal, endpoint, unweighted and big-block
//!   variation series, the Taylor split of their difference, and the quadrature
//!   objects appearing in the limits.
//! * [`walk`]: the embedded random walk, crossing counts and the statistics of
//!   fBm in Brownian time.
//! * [`ks`] and [`stats`]: Kolmogorov–Smirnov tests and summary statistics.
//!
//! Random sampling lives in the `oddvar` crate.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod error;
pub mod gaussian;
pub mod grid;
pub mod hurst;
pub mod ks;
pub mod stats;
pub mod variation;
pub mod walk;
pub mod weight;

pub use error::{Error, Result};
pub use grid::{FbmPath, GridSpec};
pub use hurst::HurstParam;
pub use weight::{BuiltinWeight, WeightFunction};
