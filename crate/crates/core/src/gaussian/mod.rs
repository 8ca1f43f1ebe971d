//! Scalar Gaussian kernels: Hermite polynomials, moments, fBm covariance and
//! the constants derived from them.

mod hermite;
mod lemmas;
mod sigma;

pub use hermite::{
    bivariate_odd_moment, gaussian_moment, hermite_coeffs, hermite_eval, HermiteCoeffs,
};
pub use lemmas::{
    increment_trapezoid_inner, lemma26_sum, lemma27_closed_form, lemma27_printed_form,
    lemma27_sum,
};
pub use sigma::{sigma_r, sigma_r_terms, sigma_squared_from_correlations, SigmaR};

use crate::hurst::HurstParam;
use libm::pow;

/// fBm covariance `C_H(s, t) = ½(|s|^{2H} + |t|^{2H} − |t − s|^{2H})`, valid for
/// two-sided times.
pub fn fbm_covariance(h: HurstParam, s: f64, t: f64) -> f64 {
    let two_h = 2.0 * h.value();
    0.5 * (pow(s.abs(), two_h) + pow(t.abs(), two_h) - pow((t - s).abs(), two_h))
}

/// Lag-`j` correlation of unit-spacing fractional Gaussian noise,
/// `ρ_H(j) = ½(|j+1|^{2H} − 2|j|^{2H} + |j−1|^{2H})`.
pub fn fgn_correlation(h: HurstParam, j: i64) -> f64 {
    let j = j.unsigned_abs();
    if j == 0 {
        return 1.0;
    }
    let two_h = 2.0 * h.value();
    let jf = j as f64;
    if j < 8 {
        return 0.5 * (pow(jf + 1.0, two_h) - 2.0 * pow(jf, two_h) + pow(jf - 1.0, two_h));
    }
    // ½ j^{2H} ((1+x)^{2H} − 2 + (1−x)^{2H}) = j^{2H} Σ_{k≥1} C(2H, 2k) x^{2k},
    // x = 1/j; avoids the cancellation of the three-term difference.
    let x2 = 1.0 / (jf * jf);
    let (mut binom, mut xp, mut sum) = (1.0, 1.0, 0.0);
    for k in 1..64 {
        let m = (2 * k - 2) as f64;
        binom *= (two_h - m) * (two_h - m - 1.0) / ((m + 1.0) * (m + 2.0));
        xp *= x2;
        let term = binom * xp;
        sum += term;
        if term.abs() <= 1e-18 * sum.abs() {
            break;
        }
    }
    pow(jf, two_h) * sum
}
