use alloc::vec::Vec;
use libm::{pow, sqrt};

use super::{fgn_correlation, gaussian_moment, hermite_coeffs};
use crate::error::{Error, Result};
use crate::hurst::HurstParam;

/// Cap on the number of correlation lags summed by [`sigma_r`].
const MAX_TERMS: u64 = 200_000_000;

/// The limiting standard deviation `σ_r(H)` of the normalized odd-power
/// variation, with a certified bound on the truncation error of `σ_r²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SigmaR {
    pub r: u32,
    pub h: HurstParam,
    pub value: f64,
    /// Upper bound on |truncated σ_r² − exact σ_r²|.
    pub tail_bound: f64,
    /// Number of lags summed explicitly.
    pub terms: u64,
}

impl SigmaR {
    pub fn squared(&self) -> f64 {
        self.value * self.value
    }

    /// A constant not computed from a series; used when a limit is taken
    /// with a user-provided variance.
    pub fn from_value(r: u32, h: HurstParam, value: f64) -> Self {
        Self {
            r,
            h,
            value,
            tail_bound: 0.0,
            terms: 0,
        }
    }
}

/// `σ_r² = μ_{4r−2} + 2 Σ_{j≥1} E[(X_1(X_{1+j} − X_j))^{2r−1}]` for H < 1/2.
///
/// The bivariate moment is a polynomial `Σ_w a_w ρ^w` in the lag correlation.
/// The `w = 1` part is summed in closed form (`Σ_{j≥1} ρ_H(j) = −1/2`); the
/// `w ≥ 3` part is truncated at lag `J` once
/// `2 Σ_w a_w (H(1−2H))^w (J−1)^{1−(2−2H)w} / ((2−2H)w − 1) ≤ tol`, which
/// dominates the tail because `|ρ_H(j)| ≤ H(1−2H)(j−1)^{2H−2}` for `j ≥ 2`.
pub fn sigma_r(r: u32, h: HurstParam, tol: f64) -> Result<SigmaR> {
    h.require_subdiffusive()?;
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(Error::InvalidArgument("tol must be positive and finite"));
    }
    let coeffs = hermite_coeffs(r)?;
    let weights = coeffs.chaos_weights()?;
    let linear = weights
        .iter()
        .find(|(w, _)| *w == 1)
        .map(|&(_, a)| a)
        .unwrap_or(0.0);
    let higher: Vec<(u32, f64)> = weights.into_iter().filter(|&(w, _)| w >= 3).collect();

    let hv = h.value();
    let decay = 2.0 - 2.0 * hv;
    let envelope = hv * (1.0 - 2.0 * hv);
    let tail = |lags: u64| -> f64 {
        if lags < 2 {
            return f64::INFINITY;
        }
        let base = (lags - 1) as f64;
        2.0 * higher
            .iter()
            .map(|&(w, a)| {
                let w = f64::from(w);
                a * pow(envelope, w) * pow(base, 1.0 - decay * w) / (decay * w - 1.0)
            })
            .sum::<f64>()
    };

    let mut sum = 0.0;
    let mut comp = 0.0;
    let mut lags = 0u64;
    let mut bound = if higher.is_empty() { 0.0 } else { f64::INFINITY };
    while bound > tol {
        if lags >= MAX_TERMS {
            return Err(Error::NonConvergence {
                tol,
                terms: lags,
                tail: bound,
            });
        }
        lags += 1;
        let rho = fgn_correlation(h, lags as i64);
        let term: f64 = higher.iter().map(|&(w, a)| a * pow(rho, f64::from(w))).sum();
        // Kahan summation: millions of terms of mixed magnitude.
        let y = term - comp;
        let t = sum + y;
        comp = (t - sum) - y;
        sum = t;
        if lags.is_power_of_two() || lags.is_multiple_of(4096) {
            bound = tail(lags);
        }
    }

    let mut squared = gaussian_moment(4 * r - 2) - linear + 2.0 * sum;
    if squared < 0.0 {
        if squared >= -tol.max(bound) - 1e-12 {
            squared = 0.0;
        } else {
            return Err(Error::NonConvergence {
                tol,
                terms: lags,
                tail: squared,
            });
        }
    }
    Ok(SigmaR {
        r,
        h,
        value: sqrt(squared),
        tail_bound: bound,
        terms: lags,
    })
}

/// `μ_{4r−2} + 2 Σ_j E[(UV)^{2r−1}](ρ_j)` over an explicit, finite list of lag
/// correlations. Direct route without closed-form acceleration.
pub fn sigma_squared_from_correlations(r: u32, correlations: &[f64]) -> Result<f64> {
    let coeffs = hermite_coeffs(r)?;
    let series: f64 = correlations
        .iter()
        .map(|&rho| coeffs.bivariate_moment(rho))
        .sum();
    Ok(gaussian_moment(4 * r - 2) + 2.0 * series)
}

/// The first `count` lags of the series: `(j, ρ_H(j), E[(X_1(X_{1+j}−X_j))^{2r−1}])`.
pub fn sigma_r_terms(r: u32, h: HurstParam, count: usize) -> Result<Vec<(u64, f64, f64)>> {
    let coeffs = hermite_coeffs(r)?;
    Ok((1..=count as u64)
        .map(|j| {
            let rho = fgn_correlation(h, j as i64);
            (j, rho, coeffs.bivariate_moment(rho))
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn h(v: f64) -> HurstParam {
        HurstParam::new(v).unwrap()
    }

    #[test]
    fn r1_is_degenerate() {
        for &hv in &[0.05, 0.2, 0.3, 0.45, 0.49] {
            let s = sigma_r(1, h(hv), 1e-10).unwrap();
            assert!(s.squared() <= 1e-10, "h={hv}: {}", s.value);
        }
    }

    #[test]
    fn r2_quarter_matches_direct_partial_sum() {
        let s = sigma_r(2, h(0.25), 1e-8).unwrap();
        assert!(s.tail_bound <= 1e-8);
        assert!((s.value - 2.387).abs() < 5e-4, "{}", s.value);
        // Brute-force route: plain truncated sum of 6ρ³ + 9ρ plus the
        // telescoped remainder of Σρ, −½(N+1)^{2H} + ½N^{2H}.
        let n = 200_000u64;
        let rhos: Vec<f64> = (1..=n).map(|j| fgn_correlation(h(0.25), j as i64)).collect();
        let partial = sigma_squared_from_correlations(2, &rhos).unwrap();
        let nf = n as f64;
        let linear_tail = 9.0 * (pow(nf + 1.0, 0.5) - pow(nf, 0.5));
        let direct = partial - linear_tail;
        assert!((direct - s.squared()).abs() < 1e-6, "{direct} {}", s.squared());
    }

    #[test]
    fn zero_correlation_path() {
        let v = sigma_squared_from_correlations(2, &[0.0; 16]).unwrap();
        assert_eq!(sqrt(v), sqrt(15.0));
    }

    #[test]
    fn rejects_out_of_range() {
        assert!(matches!(
            sigma_r(2, h(0.6), 1e-8),
            Err(Error::HurstOutOfRange { .. })
        ));
        assert!(sigma_r(2, h(0.5), 1e-8).is_err());
        assert!(sigma_r(2, h(0.3), 0.0).is_err());
        assert!(sigma_r(0, h(0.3), 1e-8).is_err());
    }

    #[test]
    fn tail_bound_respected_near_half() {
        let s = sigma_r(3, h(0.49), 1e-9).unwrap();
        assert!(s.tail_bound <= 1e-9);
        assert!(s.value > 0.0);
    }
}
