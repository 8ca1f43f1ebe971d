//! Monte Carlo oracles for the exact kernels.

use oddvar_core::gaussian::{bivariate_odd_moment, fgn_correlation, sigma_r};
use oddvar_core::ks::{ks_one_sample, ks_two_sample, normal_cdf};
use oddvar_core::stats::summarize;
use oddvar_core::HurstParam;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

fn normals(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.sample(StandardNormal)).collect()
}

#[test]
fn bivariate_moment_matches_simulation() {
    let h = HurstParam::new(0.25).unwrap();
    let rho = fgn_correlation(h, 1);
    let exact = bivariate_odd_moment(2, rho).unwrap();
    assert!((exact + 2.78679).abs() < 1e-4);
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let c = (1.0 - rho * rho).sqrt();
    let draws: Vec<f64> = (0..10_000_000)
        .map(|_| {
            let u: f64 = rng.sample(StandardNormal);
            let z: f64 = rng.sample(StandardNormal);
            (u * (rho * u + c * z)).powi(3)
        })
        .collect();
    let s = summarize(&draws);
    assert!(
        (s.mean - exact).abs() < 3.0 * s.se_mean,
        "{} ± {} vs {exact}",
        s.mean,
        s.se_mean
    );
}

#[test]
fn second_order_constant_matches_known_values() {
    for (h, expected) in [(0.1, 5.0743), (0.25, 5.69687), (0.3, 5.8279), (0.4, 5.9731)] {
        let s = sigma_r(2, HurstParam::new(h).unwrap(), 1e-8).unwrap();
        assert!((s.squared() - expected).abs() < 2e-4, "h = {h}: {}", s.squared());
        assert!(s.tail_bound <= 1e-8);
    }
}

#[test]
fn one_sample_ks_is_calibrated() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let rejected = (0..200)
        .filter(|_| ks_one_sample(&normals(&mut rng, 500), normal_cdf).unwrap().p_value < 0.05)
        .count();
    let frac = rejected as f64 / 200.0;
    assert!(frac > 0.01 && frac < 0.12, "rejection rate {frac}");
}

#[test]
fn two_sample_ks_has_power_and_size() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let a = normals(&mut rng, 1000);
    let b: Vec<f64> = normals(&mut rng, 1000).into_iter().map(|x| x + 3.0).collect();
    assert!(ks_two_sample(&a, &b).unwrap().p_value < 1e-6);
    let accepted = (0..100)
        .filter(|_| {
            let a = normals(&mut rng, 400);
            let b = normals(&mut rng, 600);
            ks_two_sample(&a, &b).unwrap().p_value > 0.01
        })
        .count();
    assert!(accepted >= 95, "accepted {accepted}/100");
}
