//! Draws from the limiting mixture law `σ_r ∫_0^t f(X_s) dW_s`.

use oddvar_core::gaussian::SigmaR;
use oddvar_core::variation::{horizon_steps, stochastic_integral};
use oddvar_core::{FbmPath, WeightFunction};
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::Result;
use crate::seed::{Purpose, SeedSpec};

/// One draw, conditionally on `path`, with Brownian increments from the
/// `LimitNoise` lane of `seed`.
pub fn simulate_limit<W: WeightFunction + ?Sized>(
    path: &FbmPath,
    f: &W,
    sigma: &SigmaR,
    t: f64,
    seed: SeedSpec,
) -> Result<f64> {
    let n = path.grid().dyadic_level().unwrap_or(0);
    let k = horizon_steps(n, t)?;
    let mut rng = seed.rng(Purpose::LimitNoise);
    let normals: Vec<f64> = (0..k).map(|_| rng.sample(StandardNormal)).collect();
    Ok(stochastic_integral(path, f, sigma.value, t, &normals)?)
}
