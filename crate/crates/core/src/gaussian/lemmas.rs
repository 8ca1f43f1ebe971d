//! Inner products `⟨1_{[a,b]}, ½(1_{[0,s₁]} + 1_{[0,s₂]})⟩` in the fBm
//! reproducing space, summed over dyadic steps.

use libm::{floor, ldexp, pow};

use super::fbm_covariance;
use crate::error::{Error, Result};
use crate::hurst::HurstParam;

/// `E[(X_b − X_a) · ½(X_{s₁} + X_{s₂})]`.
pub fn increment_trapezoid_inner(h: HurstParam, a: f64, b: f64, s1: f64, s2: f64) -> f64 {
    0.5 * (fbm_covariance(h, b, s1) - fbm_covariance(h, a, s1) + fbm_covariance(h, b, s2)
        - fbm_covariance(h, a, s2))
}

fn dyadic_floor(x: f64, n: u32) -> i64 {
    floor(ldexp(x, n as i32)) as i64
}

fn check_interval(s: f64, t: f64) -> Result<()> {
    if !(s >= 0.0 && s < t && t.is_finite()) {
        return Err(Error::InvalidArgument("need 0 <= s < t"));
    }
    Ok(())
}

/// Direct sum `Σ_{j=⌊2ⁿs⌋}^{⌊2ⁿt⌋−1} |⟨∂_{j2^{−n}}, ε̃_{j2^{−n}}⟩|`, each inner
/// product evaluated from the covariance.
pub fn lemma27_sum(h: HurstParam, n: u32, s: f64, t: f64) -> Result<f64> {
    check_interval(s, t)?;
    let step = ldexp(1.0, -(n as i32));
    let (lo, hi) = (dyadic_floor(s, n), dyadic_floor(t, n));
    Ok((lo..hi)
        .map(|j| {
            let a = j as f64 * step;
            let b = a + step;
            increment_trapezoid_inner(h, a, b, a, b).abs()
        })
        .sum())
}

/// Closed form of [`lemma27_sum`]:
/// `½ 2^{−2nH} (⌊2ⁿt⌋^{2H} − ⌊2ⁿs⌋^{2H})`.
pub fn lemma27_closed_form(h: HurstParam, n: u32, s: f64, t: f64) -> Result<f64> {
    check_interval(s, t)?;
    let two_h = 2.0 * h.value();
    let (lo, hi) = (dyadic_floor(s, n) as f64, dyadic_floor(t, n) as f64);
    Ok(0.5 * pow(2.0, -(n as f64) * two_h) * (pow(hi, two_h) - pow(lo, two_h)))
}

/// `½ 2^{−2nH} (⌊2ⁿt⌋ − ⌊2ⁿs⌋)^{2H}`: equal to the sum when `⌊2ⁿs⌋ = 0`, an
/// upper bound for `H ≤ 1/2` otherwise.
pub fn lemma27_printed_form(h: HurstParam, n: u32, s: f64, t: f64) -> Result<f64> {
    check_interval(s, t)?;
    let two_h = 2.0 * h.value();
    let count = (dyadic_floor(t, n) - dyadic_floor(s, n)) as f64;
    Ok(0.5 * pow(2.0, -(n as f64) * two_h) * pow(count, two_h))
}

/// `Σ_{j=0}^{⌊2ⁿT⌋−1} |⟨∂_{j2^{−n}}, ε̃_{k(j)2^{−m}}⟩|` with
/// `k(j) = ⌊j 2^{m−n}⌋`, evaluated directly. Bounded by `C_T 2^{m(1−2H)}`.
pub fn lemma26_sum(h: HurstParam, n: u32, m: u32, horizon: f64) -> Result<f64> {
    h.require_subdiffusive()?;
    if n <= m {
        return Err(Error::InvalidArgument("lemma26_sum needs n > m"));
    }
    if m < 2 {
        return Err(Error::InvalidArgument("lemma26_sum needs m >= 2"));
    }
    if !(horizon > 0.0 && horizon.is_finite()) {
        return Err(Error::InvalidArgument("horizon must be positive"));
    }
    let fine = ldexp(1.0, -(n as i32));
    let coarse = ldexp(1.0, -(m as i32));
    let shift = n - m;
    let count = dyadic_floor(horizon, n);
    Ok((0..count)
        .map(|j| {
            let k = j >> shift;
            let a = j as f64 * fine;
            let s1 = k as f64 * coarse;
            increment_trapezoid_inner(h, a, a + fine, s1, s1 + coarse).abs()
        })
        .sum())
}
