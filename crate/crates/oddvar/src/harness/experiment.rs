use std::time::Instant;

use oddvar_core::gaussian::sigma_r;
use oddvar_core::ks::{ks_one_sample, normal_cdf};
use oddvar_core::stats::{linear_slope, summarize};
use oddvar_core::variation::{
    coarse_weight_variation, endpoint_variation, midpoint_variation, trapezoidal_variation,
    unweighted_variation, Side,
};
use oddvar_core::walk::vn_direct;
use oddvar_core::{BuiltinWeight, FbmPath, GridSpec, WeightFunction};
use rayon::prelude::*;

use super::config::{ExperimentConfig, StatisticId};
use super::report::{LevelEstimate, McReport, TestOutcome};
use crate::error::Result;
use crate::fbm::{CirculantFbm, PathSampler};
use crate::fbmbt::sample_fbmbt;
use crate::seed::SeedSpec;

/// Runs `f(0..count)` in parallel and returns the results in index order.
/// Any error aborts the whole batch.
pub fn replicate_map<T, F>(count: usize, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(usize) -> Result<T> + Sync + Send,
{
    (0..count).into_par_iter().map(f).collect()
}

/// Time grid `[0, ⌈t⌉]` at level `n`.
pub fn forward_grid(n: u32, t: f64) -> Result<GridSpec> {
    Ok(GridSpec::dyadic(n, 0.0, t.ceil().max(1.0))?)
}

/// Value at `t` of the path statistic `id`.
pub fn path_statistic<W: WeightFunction + ?Sized>(
    id: StatisticId,
    path: &FbmPath,
    f: &W,
    r: u32,
    m: Option<u32>,
    t: f64,
) -> Result<f64> {
    let series = match id {
        StatisticId::Unweighted => unweighted_variation(path, r)?,
        StatisticId::Midpoint => midpoint_variation(path, f, r)?,
        StatisticId::Trapezoidal => trapezoidal_variation(path, f, r)?,
        StatisticId::EndpointLeft => endpoint_variation(path, f, r, Side::Left)?,
        StatisticId::EndpointRight => endpoint_variation(path, f, r, Side::Right)?,
        StatisticId::CoarseWeight => {
            coarse_weight_variation(path, f, r, m.unwrap_or(path.grid().dyadic_level().unwrap_or(1)))?
        }
        StatisticId::Fbmbt => unreachable!("handled by the walk sampler"),
    };
    Ok(series.at(t)?)
}

/// Replicate values of the configured statistic at level `n`.
pub fn sample_statistic(config: &ExperimentConfig, n: u32) -> Result<Vec<f64>> {
    let h = config.hurst()?;
    let f = config.weight()?;
    let (r, t, m) = (config.r, config.t, config.m);
    if config.statistic == StatisticId::Fbmbt {
        let norm = 2f64.powf(-(n as f64) / 4.0);
        return replicate_map(config.replicates, |i| {
            let s = sample_fbmbt(h, n, t, SeedSpec::new(config.master_seed, i as u64))?;
            Ok(norm * vn_direct(&s, &f, r, t)?)
        });
    }
    let sampler = CirculantFbm::new(h, forward_grid(n, t)?)?;
    replicate_map(config.replicates, |i| {
        let path = sampler.sample(SeedSpec::new(config.master_seed, i as u64));
        path_statistic(config.statistic, &path, &f, r, m, t)
    })
}

/// Limit variance for constant weights `f ≡ c`, `h < 1/2`, `r ≥ 2`:
/// `c² σ_r² t` for path statistics and `c² σ_r² E|Y_t|` in Brownian time.
fn constant_weight_limit(config: &ExperimentConfig) -> Result<Option<f64>> {
    let c = match config.weight()? {
        BuiltinWeight::Constant(c) if c != 0.0 => c,
        _ => return Ok(None),
    };
    let h = config.hurst()?;
    let midpoint_like = matches!(
        config.statistic,
        StatisticId::Unweighted
            | StatisticId::Midpoint
            | StatisticId::Trapezoidal
            | StatisticId::CoarseWeight
            | StatisticId::Fbmbt
    );
    if !h.subdiffusive() || config.r < 2 || !midpoint_like {
        return Ok(None);
    }
    let s2 = sigma_r(config.r, h, config.sigma_tol)?.squared();
    let time = match config.statistic {
        StatisticId::Fbmbt => (2.0 * config.t / std::f64::consts::PI).sqrt(),
        _ => config.t,
    };
    Ok(Some(c * c * s2 * time))
}

/// Replicate loop over every configured level. Reports moments per level,
/// the slope of `log₂ RMS` against the level, and, when the limit is a
/// centred Gaussian with known variance, a variance z-test and a KS test at
/// the finest level.
pub fn run_experiment(config: &ExperimentConfig) -> Result<McReport> {
    config.validate()?;
    let start = Instant::now();
    let mut report = McReport::new(&config.name, config, vec![config.master_seed]);
    let mut last = Vec::new();
    for &n in &config.levels {
        let values = sample_statistic(config, n)?;
        report
            .levels
            .push(LevelEstimate::new(&config.name, n, &summarize(&values)));
        last = values;
    }
    if report.levels.len() >= 2 {
        let xs: Vec<f64> = report.levels.iter().map(|l| l.level as f64).collect();
        let ys: Vec<f64> = report.levels.iter().map(|l| l.rms.log2()).collect();
        if ys.iter().all(|y| y.is_finite()) {
            report.rate_slope = Some(linear_slope(&xs, &ys));
        }
    }
    if let Some(target) = constant_weight_limit(config)? {
        let est = report.levels.last().expect("at least one level");
        let z = (est.variance - target) / est.se_variance;
        let k = config.thresholds.variance_se;
        report.push_test(
            TestOutcome::at_most("variance vs limit", z.abs(), k, est.replicates).with_detail(
                format!("variance {:.6} ± {:.6}, limit {:.6}", est.variance, est.se_variance, target),
            ),
        );
        report.diagnostic("limit_variance", target);
        if target > 0.0 {
            let sd = target.sqrt();
            let ks = ks_one_sample(&last, |x| normal_cdf(x / sd))?;
            report.push_test(TestOutcome::p_above(
                "KS vs limit normal",
                ks.statistic,
                ks.p_value,
                config.thresholds.alpha,
                last.len(),
            ));
        }
    }
    report.wall_time = start.elapsed();
    Ok(report)
}
