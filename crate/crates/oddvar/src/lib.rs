//! Sampling engines, Monte Carlo verification harness, file formats and the
//! command-line front end built on [`oddvar_core`].

pub mod cli;
pub mod dump;
pub mod error;
pub mod fbm;
pub mod fbmbt;
pub mod harness;
pub mod limit;
pub mod seed;

pub use error::{EngineError, Result};
pub use seed::{Purpose, SeedSpec};
