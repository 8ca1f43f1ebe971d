//! One- and two-sample Kolmogorov–Smirnov tests with asymptotic p-values.

use alloc::vec::Vec;
use core::f64::consts::{PI, SQRT_2};
use libm::{erfc, exp, sqrt};

use crate::error::{Error, Result};

/// Smallest sample accepted by the tests.
pub const MIN_SAMPLES: usize = 50;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KsOutcome {
    /// Supremum distance between the distribution functions.
    pub statistic: f64,
    pub p_value: f64,
    /// Effective sample size entering the p-value (`nm/(n+m)` for two samples).
    pub effective_size: f64,
}

/// Standard normal distribution function.
pub fn normal_cdf(x: f64) -> f64 {
    0.5 * erfc(-x / SQRT_2)
}

/// `P(K > λ)` for the Kolmogorov distribution `K`.
pub fn kolmogorov_survival(lambda: f64) -> f64 {
    if lambda <= 0.0 {
        return 1.0;
    }
    if lambda < 1.18 {
        // Jacobi-theta form, fast for small λ.
        let z = -PI * PI / (8.0 * lambda * lambda);
        let mut cdf = 0.0;
        for k in 1..=20 {
            let m = (2 * k - 1) as f64;
            cdf += exp(z * m * m);
        }
        (1.0 - sqrt(2.0 * PI) / lambda * cdf).clamp(0.0, 1.0)
    } else {
        let mut q = 0.0;
        let mut sign = 1.0;
        for k in 1..=100 {
            let kf = k as f64;
            let term = exp(-2.0 * kf * kf * lambda * lambda);
            q += sign * term;
            if term < 1e-18 {
                break;
            }
            sign = -sign;
        }
        (2.0 * q).clamp(0.0, 1.0)
    }
}

/// Asymptotic p-value for statistic `d` and effective size `ne`, with
/// Stephens' finite-sample correction.
pub fn ks_p_value(d: f64, ne: f64) -> f64 {
    let s = sqrt(ne);
    kolmogorov_survival((s + 0.12 + 0.11 / s) * d)
}

fn sorted(xs: &[f64]) -> Result<Vec<f64>> {
    if xs.iter().any(|x| x.is_nan()) {
        return Err(Error::NaNSample);
    }
    let mut v = xs.to_vec();
    v.sort_by(f64::total_cmp);
    Ok(v)
}

/// `sup_x |F_n(x) − F(x)|`, without a sample-size requirement.
pub fn ks_statistic<F: Fn(f64) -> f64>(samples: &[f64], cdf: F) -> Result<f64> {
    let xs = sorted(samples)?;
    let n = xs.len() as f64;
    let mut d = 0.0f64;
    for (i, &x) in xs.iter().enumerate() {
        let f = cdf(x);
        let above = (i + 1) as f64 / n - f;
        let below = f - i as f64 / n;
        d = d.max(above).max(below);
    }
    Ok(d)
}

pub fn ks_one_sample<F: Fn(f64) -> f64>(samples: &[f64], cdf: F) -> Result<KsOutcome> {
    if samples.len() < MIN_SAMPLES {
        return Err(Error::TooFewSamples {
            required: MIN_SAMPLES,
            got: samples.len(),
        });
    }
    let d = ks_statistic(samples, cdf)?;
    let ne = samples.len() as f64;
    Ok(KsOutcome {
        statistic: d,
        p_value: ks_p_value(d, ne),
        effective_size: ne,
    })
}

/// `sup_x |F_a(x) − F_b(x)|`, ties handled by advancing both samples.
pub fn ks_two_sample_statistic(a: &[f64], b: &[f64]) -> Result<f64> {
    let (xa, xb) = (sorted(a)?, sorted(b)?);
    let (na, nb) = (xa.len() as f64, xb.len() as f64);
    let (mut i, mut j) = (0usize, 0usize);
    let mut d = 0.0f64;
    while i < xa.len() && j < xb.len() {
        let x = xa[i].min(xb[j]);
        while i < xa.len() && xa[i] <= x {
            i += 1;
        }
        while j < xb.len() && xb[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    Ok(d)
}

pub fn ks_two_sample(a: &[f64], b: &[f64]) -> Result<KsOutcome> {
    for s in [a, b] {
        if s.len() < MIN_SAMPLES {
            return Err(Error::TooFewSamples {
                required: MIN_SAMPLES,
                got: s.len(),
            });
        }
    }
    let d = ks_two_sample_statistic(a, b)?;
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let ne = na * nb / (na + nb);
    Ok(KsOutcome {
        statistic: d,
        p_value: ks_p_value(d, ne),
        effective_size: ne,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn single_point_statistic() {
        for &x in &[-1.3, 0.0, 0.4, 2.2] {
            let f = normal_cdf(x);
            let d = ks_statistic(&[x], normal_cdf).unwrap();
            assert!((d - f.max(1.0 - f)).abs() < 1e-15);
        }
    }

    #[test]
    fn survival_is_continuous_across_branches() {
        let a = kolmogorov_survival(1.18 - 1e-9);
        let b = kolmogorov_survival(1.18 + 1e-9);
        assert!((a - b).abs() < 1e-8);
        // Known quantiles of the Kolmogorov distribution.
        assert!((kolmogorov_survival(1.358) - 0.05).abs() < 1e-3);
        assert!((kolmogorov_survival(1.628) - 0.01).abs() < 1e-3);
        assert_eq!(kolmogorov_survival(0.0), 1.0);
    }

    #[test]
    fn constant_sample_is_rejected() {
        let xs = vec![0.3; 200];
        let out = ks_one_sample(&xs, normal_cdf).unwrap();
        assert!(out.p_value < 1e-10);
    }

    #[test]
    fn identical_samples_have_zero_distance() {
        let xs: Vec<f64> = (0..100).map(|i| (i as f64).sin()).collect();
        let out = ks_two_sample(&xs, &xs).unwrap();
        assert_eq!(out.statistic, 0.0);
        assert_eq!(out.p_value, 1.0);
    }

    #[test]
    fn size_and_nan_checks() {
        assert!(matches!(
            ks_one_sample(&[0.0; 10], normal_cdf),
            Err(Error::TooFewSamples { .. })
        ));
        let mut xs = vec![0.0; 60];
        xs[3] = f64::NAN;
        assert_eq!(ks_two_sample(&xs, &[0.0; 60]), Err(Error::NaNSample));
    }

    #[test]
    fn empirical_cdf_as_reference() {
        let xs: Vec<f64> = (0..64).map(|i| (i as f64 * 0.37).cos()).collect();
        let mut sorted = xs.clone();
        sorted.sort_by(f64::total_cmp);
        let n = sorted.len() as f64;
        let ecdf = |x: f64| sorted.partition_point(|v| *v <= x) as f64 / n;
        let d = ks_statistic(&xs, ecdf).unwrap();
        assert!(d <= 1.0 / n + 1e-15);
    }
}
