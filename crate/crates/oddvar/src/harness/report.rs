use std::time::Duration;

use oddvar_core::stats::Summary;
use serde::{Deserialize, Serialize};

/// Version string embedded in every artifact.
pub const VERSION: &str = concat!("oddvar ", env!("CARGO_PKG_VERSION"));

/// Moments of one statistic over the replicates at one level.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LevelEstimate {
    pub label: String,
    pub level: u32,
    pub replicates: usize,
    pub mean: f64,
    pub variance: f64,
    pub se_mean: f64,
    pub se_variance: f64,
    pub skewness: f64,
    pub kurtosis: f64,
    pub rms: f64,
}

impl LevelEstimate {
    pub fn new(label: &str, level: u32, s: &Summary) -> Self {
        Self {
            label: label.to_string(),
            level,
            replicates: s.count,
            mean: s.mean,
            variance: s.variance,
            se_mean: s.se_mean,
            se_variance: s.se_variance,
            skewness: s.skewness,
            kurtosis: s.kurtosis,
            rms: s.rms(),
        }
    }
}

/// One pass/fail assertion. Informational outcomes do not gate the verdict.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestOutcome {
    pub name: String,
    pub statistic: f64,
    pub p_value: Option<f64>,
    pub sample_size: usize,
    pub threshold: f64,
    pub passed: bool,
    pub informational: bool,
    pub detail: String,
}

impl TestOutcome {
    pub fn new(name: &str, statistic: f64, threshold: f64, passed: bool, sample_size: usize) -> Self {
        Self {
            name: name.to_string(),
            statistic,
            p_value: None,
            sample_size,
            threshold,
            passed,
            informational: false,
            detail: String::new(),
        }
    }

    /// `statistic ≤ threshold`.
    pub fn at_most(name: &str, statistic: f64, threshold: f64, sample_size: usize) -> Self {
        Self::new(name, statistic, threshold, statistic <= threshold, sample_size)
    }

    /// KS-style outcome: passes when `p > alpha`.
    pub fn p_above(name: &str, statistic: f64, p: f64, alpha: f64, sample_size: usize) -> Self {
        Self {
            p_value: Some(p),
            ..Self::new(name, statistic, alpha, p > alpha, sample_size)
        }
    }

    pub fn informational(mut self) -> Self {
        self.informational = true;
        self
    }

    pub fn with_detail(mut self, detail: impl Into<String>) -> Self {
        self.detail = detail.into();
        self
    }
}

/// A named number reported alongside the tests.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Diagnostic {
    pub name: String,
    pub value: f64,
}

/// Self-describing record of one experiment or check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct McReport {
    pub version: String,
    pub name: String,
    pub config: serde_json::Value,
    pub seeds: Vec<u64>,
    pub levels: Vec<LevelEstimate>,
    pub rate_slope: Option<f64>,
    pub tests: Vec<TestOutcome>,
    pub diagnostics: Vec<Diagnostic>,
    pub passed: bool,
    /// Kept out of the serialized form so that reruns are byte-identical.
    #[serde(skip)]
    pub wall_time: Duration,
}

impl McReport {
    pub fn new<C: Serialize>(name: &str, config: &C, seeds: Vec<u64>) -> Self {
        Self {
            version: VERSION.to_string(),
            name: name.to_string(),
            config: serde_json::to_value(config).expect("configs serialize"),
            seeds,
            levels: Vec::new(),
            rate_slope: None,
            tests: Vec::new(),
            diagnostics: Vec::new(),
            passed: true,
            wall_time: Duration::ZERO,
        }
    }

    pub fn push_test(&mut self, t: TestOutcome) {
        self.tests.push(t);
        self.refresh();
    }

    pub fn diagnostic(&mut self, name: &str, value: f64) {
        self.diagnostics.push(Diagnostic {
            name: name.to_string(),
            value,
        });
    }

    pub fn get_diagnostic(&self, name: &str) -> Option<f64> {
        self.diagnostics.iter().find(|d| d.name == name).map(|d| d.value)
    }

    pub fn test(&self, name: &str) -> Option<&TestOutcome> {
        self.tests.iter().find(|t| t.name == name)
    }

    /// Appends the estimates, tests and diagnostics of `other`.
    pub fn absorb(&mut self, other: McReport) {
        self.levels.extend(other.levels);
        self.tests.extend(other.tests);
        self.diagnostics.extend(other.diagnostics);
        if self.rate_slope.is_none() {
            self.rate_slope = other.rate_slope;
        }
        self.wall_time += other.wall_time;
        self.refresh();
    }

    fn refresh(&mut self) {
        self.passed = self.tests.iter().all(|t| t.passed || t.informational);
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }
}
