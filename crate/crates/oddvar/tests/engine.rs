//! Statistical and reproducibility checks of the sampling engines and the
//! experiment driver.

use oddvar::fbm::{sample_fgn_circulant, CholeskyFbm, CirculantFbm, PathSampler};
use oddvar::fbmbt::sample_walk;
use oddvar::harness::{run_experiment, ExperimentConfig, StatisticId};
use oddvar::limit::simulate_limit;
use oddvar::SeedSpec;
use oddvar_core::gaussian::{fbm_covariance, fgn_correlation, sigma_r};
use oddvar_core::ks::{ks_one_sample, normal_cdf};
use oddvar_core::stats::{correlation, summarize};
use oddvar_core::variation::conditional_variance;
use oddvar_core::{BuiltinWeight, GridSpec, HurstParam};

fn h(v: f64) -> HurstParam {
    HurstParam::new(v).unwrap()
}

#[test]
fn fgn_variance_and_lag_one_correlation() {
    for hv in [0.2, 0.5, 0.8] {
        let count = 1 << 16;
        let x = sample_fgn_circulant(h(hv), count, 1.0, SeedSpec::new(5, 0)).unwrap();
        let s = summarize(&x);
        // a single long-memory path: allow a generous band on the variance
        assert!((s.second_moment - 1.0).abs() < 0.05, "H={hv}: {}", s.second_moment);
        let lag1 = correlation(&x[..count - 1], &x[1..]);
        let target = fgn_correlation(h(hv), 1);
        assert!((lag1 - target).abs() < 4.0 / (count as f64).sqrt() + 0.01, "H={hv}: {lag1} vs {target}");
    }
}

#[test]
fn brownian_increments_are_uncorrelated() {
    let count = 4096;
    let x = sample_fgn_circulant(h(0.5), count, 0.25, SeedSpec::new(9, 3)).unwrap();
    let lag1 = correlation(&x[..count - 1], &x[1..]);
    assert!(lag1.abs() < 3.0 / (count as f64).sqrt(), "{lag1}");
    let s = summarize(&x);
    assert!((s.variance - 0.25).abs() < 4.0 * s.se_variance);
}

/// `mean(X_a X_b)` over replicates as a z-score against `C_H(a, b)`.
fn cross_z<S: PathSampler>(sampler: &S, a: i64, b: i64, reps: u64) -> f64 {
    let grid = *sampler.grid();
    let prods: Vec<f64> = (0..reps)
        .map(|i| {
            let p = sampler.sample(SeedSpec::new(21, i));
            p.at(a).unwrap() * p.at(b).unwrap()
        })
        .collect();
    let s = summarize(&prods);
    let target = fbm_covariance(sampler.hurst(), grid.time(a), grid.time(b));
    (s.mean - target) / s.se_mean
}

#[test]
fn two_sided_paths_are_correlated_across_zero() {
    let grid = GridSpec::dyadic(3, -1.0, 1.0).unwrap();
    for hv in [0.25, 0.4] {
        let circ = CirculantFbm::new(h(hv), grid).unwrap();
        let chol = CholeskyFbm::new(h(hv), grid).unwrap();
        // E[X_{−1/2} X_{1/2}] = ½(2·0.5^{2H} − 1) > 0 for H < 1/2; independent halves would give 0
        assert!(fbm_covariance(h(hv), -0.5, 0.5) > 0.05);
        for z in [cross_z(&circ, -4, 4, 20_000), cross_z(&chol, -4, 4, 20_000)] {
            assert!(z.abs() < 3.0, "H={hv}: z={z}");
        }
        let z = cross_z(&chol, 8, 8, 20_000);
        assert!(z.abs() < 4.0, "variance at t=1: z={z}");
    }
}

fn config(stat: StatisticId, f: &str, reps: usize) -> ExperimentConfig {
    let mut c = ExperimentConfig::new("engine", stat, 0.25, 2, f, vec![6, 8]);
    c.replicates = reps;
    c.master_seed = 17;
    c
}

fn run_with_threads(threads: usize, c: &ExperimentConfig) -> String {
    let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
    pool.install(|| run_experiment(c).unwrap().to_json())
}

#[test]
fn reports_do_not_depend_on_thread_count() {
    let c = config(StatisticId::Midpoint, "exp-x2", 300);
    let one = run_with_threads(1, &c);
    assert_eq!(one, run_with_threads(3, &c));
    assert_eq!(one, run_with_threads(8, &c));
}

#[test]
fn same_seed_gives_identical_report_bytes() {
    let c = config(StatisticId::Trapezoidal, "sin", 200);
    assert_eq!(run_experiment(&c).unwrap().to_json(), run_experiment(&c).unwrap().to_json());
    let mut other = c.clone();
    other.master_seed += 1;
    assert_ne!(run_experiment(&c).unwrap().to_json(), run_experiment(&other).unwrap().to_json());
}

#[test]
fn zero_weight_gives_exact_zeros() {
    for stat in [StatisticId::Midpoint, StatisticId::Trapezoidal, StatisticId::EndpointLeft, StatisticId::Fbmbt] {
        let rep = run_experiment(&config(stat, "zero", 100)).unwrap();
        for l in &rep.levels {
            assert_eq!((l.mean, l.variance, l.rms), (0.0, 0.0, 0.0), "{stat:?}");
        }
        assert!(rep.tests.is_empty());
    }
}

#[test]
fn standard_error_shrinks_with_replicates() {
    let small = run_experiment(&config(StatisticId::Unweighted, "one", 1000)).unwrap();
    let large = run_experiment(&config(StatisticId::Unweighted, "one", 4000)).unwrap();
    let (a, b) = (small.levels[1].se_mean, large.levels[1].se_mean);
    let ratio = b / a;
    assert!((ratio - 0.5).abs() < 0.08, "{ratio}");
}

#[test]
fn walk_endpoint_has_unit_variance() {
    let n = 10;
    let ends: Vec<f64> = (0..4000)
        .map(|i| {
            let w = sample_walk(n, 1.0, SeedSpec::new(4, i)).unwrap();
            w.brownian_value(w.len())
        })
        .collect();
    let s = summarize(&ends);
    assert!((s.mean / s.se_mean).abs() < 4.0);
    assert!(((s.variance - 1.0) / s.se_variance).abs() < 4.0);
}

#[test]
fn limit_draws_with_unit_weight_are_normal() {
    let hv = h(0.25);
    let sigma = sigma_r(2, hv, 1e-10).unwrap();
    let grid = GridSpec::dyadic(8, 0.0, 1.0).unwrap();
    let sampler = CirculantFbm::new(hv, grid).unwrap();
    let one = BuiltinWeight::Constant(1.0);
    let draws: Vec<f64> = (0..3000)
        .map(|i| {
            let seed = SeedSpec::new(2, i);
            simulate_limit(&sampler.sample(seed), &one, &sigma, 1.0, seed).unwrap()
        })
        .collect();
    let ks = ks_one_sample(&draws, |x| normal_cdf(x / sigma.value)).unwrap();
    assert!(ks.p_value > 0.01, "{ks:?}");
}

#[test]
fn limit_draws_match_conditional_variance() {
    // fixed path, many noise draws: Var = σ² Σ f(X_j)² 2^{−n}
    let hv = h(0.25);
    let sigma = sigma_r(2, hv, 1e-10).unwrap();
    let grid = GridSpec::dyadic(7, 0.0, 1.0).unwrap();
    let path = CirculantFbm::new(hv, grid).unwrap().sample(SeedSpec::new(8, 0));
    let f = BuiltinWeight::Gaussian;
    let draws: Vec<f64> = (0..6000)
        .map(|i| simulate_limit(&path, &f, &sigma, 1.0, SeedSpec::new(8, i + 1)).unwrap())
        .collect();
    let target = conditional_variance(&path, &f, sigma.value, 1.0).unwrap();
    let s = summarize(&draws);
    assert!(((s.variance - target) / s.se_variance).abs() < 4.0, "{} vs {target}", s.variance);
    assert!((s.mean / s.se_mean).abs() < 4.0);
}
