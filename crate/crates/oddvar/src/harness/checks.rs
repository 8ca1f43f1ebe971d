//! Monte Carlo checks turning limit statements into pass/fail assertions.

use std::time::Instant;

use oddvar_core::gaussian::{gaussian_moment, sigma_r};
use oddvar_core::ks::{ks_one_sample, ks_two_sample, normal_cdf};
use oddvar_core::stats::{correlation, linear_slope, summarize};
use oddvar_core::variation::{
    endpoint_variation, limit_quadrature, midpoint_variation, trapezoidal_variation, Integrand,
    Side,
};
use oddvar_core::{BuiltinWeight, FbmPath};

use super::config::{ExperimentConfig, StatisticId};
use super::experiment::{forward_grid, replicate_map};
use super::report::{LevelEstimate, McReport, TestOutcome};
use crate::error::{EngineError, Result};
use crate::fbm::{CirculantFbm, PathSampler};
use crate::limit::simulate_limit;
use crate::seed::{Purpose, SeedSpec};

fn finest(config: &ExperimentConfig) -> u32 {
    *config.levels.last().expect("validated config has levels")
}

fn seed(config: &ExperimentConfig, i: usize) -> SeedSpec {
    SeedSpec::new(config.master_seed, i as u64)
}

/// Estimates `E|Φ_n(t) − Φ_n(s)|^p` for each pair and compares it with
/// `C(Δ^{p/2} + Δ^{pH})`, `Δ = (⌊2ⁿt⌋ − ⌊2ⁿs⌋)/2ⁿ`, with `C` fitted on the
/// widest pair. Passes when every ratio is at most `moment_band`; also
/// reports the log-log slope per halving of `Δ` against `−p/2`.
pub fn moment_scaling_test(config: &ExperimentConfig, p: u32, pairs: &[(f64, f64)]) -> Result<McReport> {
    config.validate()?;
    if p != 4 && p != 6 {
        return Err(EngineError::Config("moment order must be 4 or 6".into()));
    }
    let start = Instant::now();
    let h = config.hurst()?;
    let f = config.weight()?;
    let n = finest(config);
    let tmax = pairs.iter().map(|&(s, t)| s.max(t)).fold(1.0, f64::max);
    let sampler = CirculantFbm::new(h, forward_grid(n, tmax)?)?;
    let per_rep: Vec<Vec<f64>> = replicate_map(config.replicates, |i| {
        let series = midpoint_variation(&sampler.sample(seed(config, i)), &f, config.r)?;
        pairs
            .iter()
            .map(|&(s, t)| Ok((series.at(t)? - series.at(s)?).abs().powi(p as i32)))
            .collect()
    })?;
    let mut report = McReport::new("moment scaling", config, vec![config.master_seed]);
    let scale = 2f64.powi(n as i32);
    let deltas: Vec<f64> = pairs
        .iter()
        .map(|&(s, t)| ((t * scale + 1e-9).floor() - (s * scale + 1e-9).floor()).abs() / scale)
        .collect();
    let moments: Vec<f64> = (0..pairs.len())
        .map(|k| summarize(&per_rep.iter().map(|v| v[k]).collect::<Vec<_>>()).mean)
        .collect();
    let pf = p as f64;
    let rhs = |d: f64| d.powf(pf / 2.0) + d.powf(pf * h.value());
    let widest = (0..pairs.len())
        .filter(|&k| deltas[k] > 0.0)
        .max_by(|&a, &b| deltas[a].total_cmp(&deltas[b]));
    let Some(widest) = widest else {
        report.push_test(TestOutcome::at_most("moment band", 0.0, config.thresholds.moment_band, config.replicates));
        return Ok(report);
    };
    let c = moments[widest] / rhs(deltas[widest]);
    report.diagnostic("fitted_constant", c);
    let mut max_ratio = 0.0f64;
    let (mut xs, mut ys) = (Vec::new(), Vec::new());
    for k in 0..pairs.len() {
        report.diagnostic(&format!("moment[dt={}]", deltas[k]), moments[k]);
        if deltas[k] == 0.0 {
            continue;
        }
        let ratio = moments[k] / (c * rhs(deltas[k]));
        report.diagnostic(&format!("ratio[dt={}]", deltas[k]), ratio);
        max_ratio = max_ratio.max(ratio);
        xs.push(deltas[k].log2());
        ys.push(moments[k].log2());
    }
    report.push_test(TestOutcome::at_most(
        "moment band",
        max_ratio,
        config.thresholds.moment_band,
        config.replicates,
    ));
    if xs.len() >= 2 {
        // moment ∝ Δ^slope, so one halving of Δ multiplies it by 2^{−slope}
        let per_halving = -linear_slope(&xs, &ys);
        report.rate_slope = Some(per_halving);
        let target = -pf / 2.0;
        report.push_test(
            TestOutcome::at_most(
                "moment slope per halving",
                (per_halving - target).abs(),
                config.thresholds.slope_band,
                config.replicates,
            )
            .informational()
            .with_detail(format!("slope {per_halving:.4}, target {target}")),
        );
    }
    report.wall_time = start.elapsed();
    Ok(report)
}

/// Per-path L² errors of the endpoint statistics at `t` against
/// `∓ μ_{2r}/2 ∫_0^t f′(X_s) ds`, and of the trapezoid with the same
/// normalization against 0, at the first and last configured level.
pub fn l2_endpoint_test(config: &ExperimentConfig) -> Result<McReport> {
    config.validate()?;
    if config.r < 2 {
        return Err(EngineError::Config("endpoint limits need r >= 2".into()));
    }
    let start = Instant::now();
    let h = config.hurst()?;
    let f = config.weight()?;
    let t = config.t;
    let half_mu = gaussian_moment(2 * config.r) / 2.0;
    let mut report = McReport::new("endpoint L2", config, vec![config.master_seed]);
    let mut rms = Vec::new();
    for &n in &config.levels {
        let sampler = CirculantFbm::new(h, forward_grid(n, t)?)?;
        let errs: Vec<[f64; 3]> = replicate_map(config.replicates, |i| {
            let path = sampler.sample(seed(config, i));
            let left = endpoint_variation(&path, &f, config.r, Side::Left)?.at(t)?;
            let right = endpoint_variation(&path, &f, config.r, Side::Right)?.at(t)?;
            let integral = limit_quadrature(&path, &f, Integrand::FPrime, t)?;
            Ok([
                left + half_mu * integral,
                right - half_mu * integral,
                0.5 * (left + right),
            ])
        })?;
        let mut row = [0.0; 3];
        for (k, label) in ["left error", "right error", "trapezoid"].iter().enumerate() {
            let s = summarize(&errs.iter().map(|e| e[k]).collect::<Vec<_>>());
            row[k] = s.rms();
            report.levels.push(LevelEstimate::new(label, n, &s));
        }
        rms.push((n, row));
    }
    let (n0, first) = rms[0];
    let (n1, last) = *rms.last().expect("levels");
    let ceiling = config.thresholds.endpoint_rms;
    for (k, side) in ["left", "right"].iter().enumerate() {
        report.push_test(
            TestOutcome::new(
                &format!("{side} error decreases"),
                last[k],
                first[k],
                last[k] < first[k],
                config.replicates,
            )
            .with_detail(format!("rms {:.5} at n={n0}, {:.5} at n={n1}", first[k], last[k])),
        );
        report.push_test(TestOutcome::new(
            &format!("{side} error below ceiling"),
            last[k],
            ceiling,
            last[k] < ceiling,
            config.replicates,
        ));
    }
    let best = last[0].min(last[1]);
    report.push_test(TestOutcome::new(
        "trapezoid below both endpoints",
        last[2],
        best,
        last[2] < best,
        config.replicates,
    ));
    if config.levels.len() >= 2 {
        let xs: Vec<f64> = rms.iter().map(|(n, _)| *n as f64).collect();
        let ys: Vec<f64> = rms.iter().map(|(_, r)| r[0].log2()).collect();
        report.rate_slope = Some(linear_slope(&xs, &ys));
    }
    report.wall_time = start.elapsed();
    Ok(report)
}

/// Values of `Φ_n(1)` (or `Ψ_n(1)`) with the matching terminal values `X_1`.
fn statistic_and_endpoint(config: &ExperimentConfig, n: u32) -> Result<Vec<(f64, f64)>> {
    let h = config.hurst()?;
    let f = config.weight()?;
    let sampler = CirculantFbm::new(h, forward_grid(n, config.t)?)?;
    let trapezoid = config.statistic == StatisticId::Trapezoidal;
    replicate_map(config.replicates, |i| {
        let path = sampler.sample(seed(config, i));
        let series = if trapezoid {
            trapezoidal_variation(&path, &f, config.r)?
        } else {
            midpoint_variation(&path, &f, config.r)?
        };
        Ok((series.at(config.t)?, endpoint(&path, config.t)?))
    })
}

fn endpoint(path: &FbmPath, t: f64) -> Result<f64> {
    let k = path.grid().steps_until(t);
    Ok(path.at(k)?)
}

/// Compares `Φ_n(t)` (or `Ψ_n(t)` when the statistic is trapezoidal) with
/// independent draws of `σ_r ∫_0^t f(X_s) dW_s`, and checks that it is
/// centred and uncorrelated with `X_t`. For `r = 1` the limit is degenerate
/// and the variance must shrink between level `⌈n/2⌉` and `n` instead.
pub fn mixture_law_test(config: &ExperimentConfig) -> Result<McReport> {
    config.validate()?;
    let start = Instant::now();
    let h = config.hurst()?;
    h.require_subdiffusive()?;
    let f = config.weight()?;
    let n = finest(config);
    let th = config.thresholds;
    let mut report = McReport::new("mixture law", config, vec![config.master_seed]);
    if config.r == 1 {
        let coarse = n.div_ceil(2);
        let a = summarize(&statistic_and_endpoint(config, coarse)?.iter().map(|v| v.0).collect::<Vec<_>>());
        let b = summarize(&statistic_and_endpoint(config, n)?.iter().map(|v| v.0).collect::<Vec<_>>());
        report.levels.push(LevelEstimate::new("statistic", coarse, &a));
        report.levels.push(LevelEstimate::new("statistic", n, &b));
        report.push_test(TestOutcome::new(
            "variance shrinks",
            b.variance,
            a.variance,
            b.variance < a.variance,
            config.replicates,
        ));
        report.wall_time = start.elapsed();
        return Ok(report);
    }
    let sigma = sigma_r(config.r, h, config.sigma_tol)?;
    report.diagnostic("sigma_r", sigma.value);
    let pairs = statistic_and_endpoint(config, n)?;
    let stat: Vec<f64> = pairs.iter().map(|p| p.0).collect();
    let ends: Vec<f64> = pairs.iter().map(|p| p.1).collect();
    let s = summarize(&stat);
    report.levels.push(LevelEstimate::new("statistic", n, &s));
    let size = stat.len();
    match f {
        BuiltinWeight::Constant(c) if c != 0.0 => {
            let sd = (c * c * sigma.squared() * config.t).sqrt();
            let ks = ks_one_sample(&stat, |x| normal_cdf(x / sd))?;
            report.push_test(TestOutcome::p_above("KS vs limit normal", ks.statistic, ks.p_value, th.alpha, size));
        }
        _ => {
            let sampler = CirculantFbm::new(h, forward_grid(n, config.t)?)?;
            let limit: Vec<f64> = replicate_map(config.replicates, |i| {
                let sd = seed(config, i);
                let path = sampler.sample_lane(sd, Purpose::LimitPath);
                simulate_limit(&path, &f, &sigma, config.t, sd)
            })?;
            report
                .levels
                .push(LevelEstimate::new("limit draw", n, &summarize(&limit)));
            let ks = ks_two_sample(&stat, &limit)?;
            report.push_test(TestOutcome::p_above("KS vs limit draws", ks.statistic, ks.p_value, th.alpha, size));
        }
    }
    let rho = correlation(&stat, &ends);
    let bound = th.corr_se / (size as f64).sqrt() + th.corr_slack;
    report.push_test(TestOutcome::at_most("|corr(statistic, X_t)|", rho.abs(), bound, size));
    report.push_test(
        TestOutcome::at_most("|mean| / se", (s.mean / s.se_mean).abs(), th.mean_se, size).informational(),
    );
    report.wall_time = start.elapsed();
    Ok(report)
}
