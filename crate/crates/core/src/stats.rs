//! Summary statistics used by the Monte Carlo checks.

use alloc::vec::Vec;
use libm::sqrt;

/// Compensated (Kahan) running sum.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct KahanSum {
    sum: f64,
    comp: f64,
}

impl KahanSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, x: f64) {
        let y = x - self.comp;
        let t = self.sum + y;
        self.comp = (t - self.sum) - y;
        self.sum = t;
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.sum
    }
}

/// Sample moments with standard errors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Summary {
    pub count: usize,
    pub mean: f64,
    /// Unbiased sample variance.
    pub variance: f64,
    /// Standard error of the mean.
    pub se_mean: f64,
    /// Standard error of the variance estimate, `√((m₄ − m₂²)/n)`.
    pub se_variance: f64,
    pub skewness: f64,
    /// Kurtosis `m₄/m₂²` (3 for a Gaussian).
    pub kurtosis: f64,
    /// Mean of squares `E[x²]` (not centred).
    pub second_moment: f64,
}

impl Summary {
    pub fn rms(&self) -> f64 {
        sqrt(self.second_moment)
    }
}

pub fn summarize(xs: &[f64]) -> Summary {
    let n = xs.len();
    if n == 0 {
        return Summary {
            count: 0,
            mean: f64::NAN,
            variance: f64::NAN,
            se_mean: f64::NAN,
            se_variance: f64::NAN,
            skewness: f64::NAN,
            kurtosis: f64::NAN,
            second_moment: f64::NAN,
        };
    }
    let nf = n as f64;
    let mut acc = KahanSum::new();
    let mut sq = KahanSum::new();
    for &x in xs {
        acc.add(x);
        sq.add(x * x);
    }
    let mean = acc.value() / nf;
    let (mut m2, mut m3, mut m4) = (KahanSum::new(), KahanSum::new(), KahanSum::new());
    for &x in xs {
        let d = x - mean;
        let d2 = d * d;
        m2.add(d2);
        m3.add(d2 * d);
        m4.add(d2 * d2);
    }
    let (m2, m3, m4) = (m2.value() / nf, m3.value() / nf, m4.value() / nf);
    let variance = if n > 1 { m2 * nf / (nf - 1.0) } else { 0.0 };
    let (skewness, kurtosis) = if m2 > 0.0 {
        (m3 / (m2 * sqrt(m2)), m4 / (m2 * m2))
    } else {
        (0.0, 0.0)
    };
    Summary {
        count: n,
        mean,
        variance,
        se_mean: sqrt(variance / nf),
        se_variance: sqrt(((m4 - m2 * m2) / nf).max(0.0)),
        skewness,
        kurtosis,
        second_moment: sq.value() / nf,
    }
}

/// Pearson correlation; zero if either sample is constant.
pub fn correlation(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len(), "correlation needs paired samples");
    let sa = summarize(a);
    let sb = summarize(b);
    let mut cov = KahanSum::new();
    for (x, y) in a.iter().zip(b) {
        cov.add((x - sa.mean) * (y - sb.mean));
    }
    let nf = a.len() as f64;
    let denom = sqrt(sa.variance * sb.variance) * (nf - 1.0);
    if denom > 0.0 {
        cov.value() / denom
    } else {
        0.0
    }
}

/// Least-squares slope of `ys` against `xs`.
pub fn linear_slope(xs: &[f64], ys: &[f64]) -> f64 {
    assert_eq!(xs.len(), ys.len());
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx) = (0.0, 0.0);
    for (x, y) in xs.iter().zip(ys) {
        sxy += (x - mx) * (y - my);
        sxx += (x - mx) * (x - mx);
    }
    sxy / sxx
}

/// Root mean square.
pub fn rms(xs: &[f64]) -> f64 {
    summarize(xs).rms()
}

/// `x^p` by repeated squaring.
#[inline]
pub fn powi(x: f64, p: u32) -> f64 {
    let (mut base, mut e, mut acc) = (x, p, 1.0);
    while e > 0 {
        if e & 1 == 1 {
            acc *= base;
        }
        base *= base;
        e >>= 1;
    }
    acc
}

/// Element-wise `a − b`.
pub fn difference(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kahan_beats_naive() {
        let mut k = KahanSum::new();
        let mut naive = 0.0;
        k.add(1.0);
        naive += 1.0;
        for _ in 0..1_000_000 {
            k.add(1e-16);
            naive += 1e-16;
        }
        assert!((k.value() - (1.0 + 1e-10)).abs() < 1e-15);
        assert_eq!(naive, 1.0);
    }

    #[test]
    fn summary_of_small_sample() {
        let s = summarize(&[1.0, 2.0, 3.0, 4.0]);
        assert_eq!(s.mean, 2.5);
        assert!((s.variance - 5.0 / 3.0).abs() < 1e-15);
        assert!((s.second_moment - 7.5).abs() < 1e-15);
        assert!(s.skewness.abs() < 1e-15);
    }

    #[test]
    fn integer_powers() {
        assert_eq!(powi(-1.5, 3), -3.375);
        assert_eq!(powi(2.0, 10), 1024.0);
        assert_eq!(powi(0.0, 0), 1.0);
    }

    #[test]
    fn slope_and_correlation() {
        let xs = [0.0, 1.0, 2.0, 3.0];
        let ys = [1.0, 3.0, 5.0, 7.0];
        assert!((linear_slope(&xs, &ys) - 2.0).abs() < 1e-15);
        assert!((correlation(&xs, &ys) - 1.0).abs() < 1e-15);
        assert_eq!(correlation(&xs, &[1.0; 4]), 0.0);
    }
}
