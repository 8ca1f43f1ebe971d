use oddvar_core::{BuiltinWeight, HurstParam};
use serde::{Deserialize, Serialize};

use crate::error::{EngineError, Result};

/// Statistic evaluated per replicate by [`run_experiment`](super::run_experiment).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StatisticId {
    /// `2^{−n/2} Σ (2^{nH}Δ)^{2r−1}`.
    Unweighted,
    /// `Φ_n`.
    Midpoint,
    /// `Ψ_n`.
    Trapezoidal,
    /// Left-endpoint sum with `2^{nH−n}` normalization.
    EndpointLeft,
    /// Right-endpoint sum with `2^{nH−n}` normalization.
    EndpointRight,
    /// `Φ̃_{n,m}`.
    CoarseWeight,
    /// `2^{−n/4} V_n` of fBm in Brownian time.
    Fbmbt,
}

/// Every assertion threshold used by the checks.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Thresholds {
    /// KS tests pass when `p > alpha`.
    pub alpha: f64,
    /// Standard errors allowed between a Monte Carlo variance and its limit.
    pub variance_se: f64,
    /// Same, for the Brownian-time variance.
    pub fbmbt_variance_se: f64,
    /// Standard errors allowed per covariance entry of the path generator.
    pub covariance_se: f64,
    /// Standard errors allowed for the Donsker mean and variance.
    pub donsker_se: f64,
    /// Standard errors allowed for means expected to vanish.
    pub mean_se: f64,
    /// `|corr(Φ_n(1), X_1)| < corr_se/√N + corr_slack`.
    pub corr_se: f64,
    pub corr_slack: f64,
    /// Relative residual allowed for exact walk identities.
    pub identity_tol: f64,
    /// Relative error allowed for the inner-product closed form.
    pub lemma27_tol: f64,
    /// Max/min band of the normalized inner-product sums.
    pub lemma26_band: f64,
    /// Upper band of the normalized moment ratios.
    pub moment_band: f64,
    /// Allowed distance of the moment slope per halving from `−p/2`.
    pub slope_band: f64,
    /// RMS ceiling of the endpoint errors at the finest level.
    pub endpoint_rms: f64,
    /// Required shrink factor of `‖(Ψ_n − Φ_n)(1)‖₂` between the coarse and fine level.
    pub psi_phi_ratio: f64,
}

impl Default for Thresholds {
    fn default() -> Self {
        Self {
            alpha: 0.01,
            variance_se: 3.0,
            fbmbt_variance_se: 4.0,
            covariance_se: 4.0,
            donsker_se: 4.0,
            mean_se: 3.0,
            corr_se: 3.0,
            corr_slack: 0.02,
            identity_tol: 1e-9,
            lemma27_tol: 1e-12,
            lemma26_band: 4.0,
            moment_band: 10.0,
            slope_band: 0.4,
            endpoint_rms: 0.15,
            psi_phi_ratio: 0.5,
        }
    }
}

impl Thresholds {
    pub fn validate(&self) -> Result<()> {
        if !(self.alpha > 0.0 && self.alpha <= 0.1) {
            return Err(EngineError::Config(format!(
                "alpha must lie in (0, 0.1], got {}",
                self.alpha
            )));
        }
        let positive = [
            self.variance_se,
            self.fbmbt_variance_se,
            self.covariance_se,
            self.donsker_se,
            self.mean_se,
            self.corr_se,
            self.identity_tol,
            self.lemma27_tol,
            self.lemma26_band,
            self.moment_band,
            self.slope_band,
            self.endpoint_rms,
            self.psi_phi_ratio,
        ];
        if positive.iter().any(|v| !(*v > 0.0 && v.is_finite())) || self.corr_slack < 0.0 {
            return Err(EngineError::Config("thresholds must be positive".into()));
        }
        Ok(())
    }
}

pub const MIN_REPLICATES: usize = 100;

/// A fully resolved Monte Carlo experiment; embedded verbatim in its report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub name: String,
    pub statistic: StatisticId,
    pub h: f64,
    pub r: u32,
    /// Registry id of the weight function.
    pub f: String,
    pub levels: Vec<u32>,
    pub t: f64,
    /// Coarse level of [`StatisticId::CoarseWeight`].
    pub m: Option<u32>,
    pub replicates: usize,
    pub master_seed: u64,
    pub sigma_tol: f64,
    pub thresholds: Thresholds,
}

impl ExperimentConfig {
    pub fn new(name: &str, statistic: StatisticId, h: f64, r: u32, f: &str, levels: Vec<u32>) -> Self {
        Self {
            name: name.to_string(),
            statistic,
            h,
            r,
            f: f.to_string(),
            levels,
            t: 1.0,
            m: None,
            replicates: 1000,
            master_seed: 1,
            sigma_tol: 1e-10,
            thresholds: Thresholds::default(),
        }
    }

    pub fn hurst(&self) -> Result<HurstParam> {
        Ok(HurstParam::new(self.h)?)
    }

    pub fn weight(&self) -> Result<BuiltinWeight> {
        BuiltinWeight::from_id(&self.f).ok_or_else(|| {
            EngineError::Config(format!(
                "unknown weight '{}'; known: {}",
                self.f,
                BuiltinWeight::REGISTRY.join(", ")
            ))
        })
    }

    pub fn validate(&self) -> Result<()> {
        self.hurst()?;
        self.weight()?;
        self.thresholds.validate()?;
        if self.r == 0 {
            return Err(EngineError::Config("r must be at least 1".into()));
        }
        if self.replicates < MIN_REPLICATES {
            return Err(EngineError::Config(format!(
                "replicates must be at least {MIN_REPLICATES}, got {}",
                self.replicates
            )));
        }
        if self.levels.is_empty() || self.levels.iter().any(|&n| n == 0 || n > 24) {
            return Err(EngineError::Config("levels must be in 1..=24".into()));
        }
        if !(self.t > 0.0 && self.t.is_finite() && self.t <= 64.0) {
            return Err(EngineError::Config("t must lie in (0, 64]".into()));
        }
        if self.statistic == StatisticId::CoarseWeight {
            let m = self
                .m
                .ok_or_else(|| EngineError::Config("coarse-weight statistic needs m".into()))?;
            if self.levels.iter().any(|&n| m > n) || m == 0 {
                return Err(EngineError::Config("need 1 <= m <= n".into()));
            }
        }
        if !(self.sigma_tol > 0.0 && self.sigma_tol.is_finite()) {
            return Err(EngineError::Config("tol must be positive".into()));
        }
        Ok(())
    }
}
