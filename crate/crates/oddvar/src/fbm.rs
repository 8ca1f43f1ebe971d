//! Exact fBm sampling: circulant embedding of fractional Gaussian noise, and a
//! dense Cholesky factorization as a small-grid oracle.

use std::sync::Arc;

use oddvar_core::gaussian::{fbm_covariance, fgn_correlation};
use oddvar_core::{FbmPath, GridSpec, HurstParam};
use rand::Rng;
use rand_distr::StandardNormal;
use rustfft::num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{EngineError, Result};
use crate::seed::{Purpose, SeedSpec};

/// Eigenvalues below this abort the embedding; those in `[EIGEN_FLOOR, 0)` are set to 0.
pub const EIGEN_FLOOR: f64 = -1e-9;

/// Default cap on the number of points of the Cholesky oracle.
pub const CHOLESKY_CAP: usize = 2048;

/// Circulant embedding of unit-spacing fGn of a fixed length; reusable
/// across draws and threads.
#[derive(Clone)]
pub struct CirculantFgn {
    h: HurstParam,
    count: usize,
    // √(λ_k / M)
    amplitude: Vec<f64>,
    fft: Arc<dyn Fft<f64>>,
}

impl std::fmt::Debug for CirculantFgn {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("CirculantFgn")
            .field("h", &self.h)
            .field("count", &self.count)
            .field("size", &self.amplitude.len())
            .finish()
    }
}

impl CirculantFgn {
    pub fn new(h: HurstParam, count: usize) -> Result<Self> {
        if count == 0 {
            return Err(EngineError::Config("fGn count must be positive".into()));
        }
        let m = 2 * count.next_power_of_two();
        let mut row: Vec<Complex64> = (0..m)
            .map(|k| Complex64::new(fgn_correlation(h, k.min(m - k) as i64), 0.0))
            .collect();
        let fft = FftPlanner::new().plan_fft_forward(m);
        fft.process(&mut row);
        let mf = m as f64;
        let mut amplitude = Vec::with_capacity(m);
        for (index, z) in row.iter().enumerate() {
            let value = z.re;
            if value < EIGEN_FLOOR {
                return Err(EngineError::Spectral { index, value });
            }
            amplitude.push((value.max(0.0) / mf).sqrt());
        }
        Ok(Self {
            h,
            count,
            amplitude,
            fft,
        })
    }

    pub fn hurst(&self) -> HurstParam {
        self.h
    }

    pub fn count(&self) -> usize {
        self.count
    }

    /// Circulant size `M`.
    pub fn size(&self) -> usize {
        self.amplitude.len()
    }

    /// Smallest eigenvalue `λ_k` after clamping.
    pub fn min_eigenvalue(&self) -> f64 {
        let m = self.size() as f64;
        self.amplitude
            .iter()
            .map(|a| a * a * m)
            .fold(f64::INFINITY, f64::min)
    }

    /// `count` fGn values with covariance `spacing^{2H} ρ_H(|i−j|)`.
    pub fn sample<R: Rng + ?Sized>(&self, spacing: f64, rng: &mut R) -> Vec<f64> {
        let mut w: Vec<Complex64> = self
            .amplitude
            .iter()
            .map(|&s| {
                let a: f64 = rng.sample(StandardNormal);
                let b: f64 = rng.sample(StandardNormal);
                Complex64::new(s * a, s * b)
            })
            .collect();
        self.fft.process(&mut w);
        let scale = spacing.powf(self.h.value());
        w[..self.count].iter().map(|z| z.re * scale).collect()
    }
}

/// One-shot fGn draw; see [`CirculantFgn`] to amortize the embedding.
pub fn sample_fgn_circulant(
    h: HurstParam,
    count: usize,
    spacing: f64,
    seed: SeedSpec,
) -> Result<Vec<f64>> {
    let fgn = CirculantFgn::new(h, count)?;
    Ok(fgn.sample(spacing, &mut seed.rng(Purpose::Path)))
}

/// Anything that draws fBm paths on a fixed grid.
pub trait PathSampler: Sync {
    fn grid(&self) -> &GridSpec;

    fn hurst(&self) -> HurstParam;

    fn sample_from<R: Rng + ?Sized>(&self, rng: &mut R, seed: u64) -> FbmPath;

    fn sample(&self, seed: SeedSpec) -> FbmPath {
        self.sample_lane(seed, Purpose::Path)
    }

    fn sample_lane(&self, seed: SeedSpec, purpose: Purpose) -> FbmPath {
        self.sample_from(&mut seed.rng(purpose), seed.master_seed)
    }
}

/// Two-sided fBm from one stationary fGn stream across the whole grid,
/// cumulatively summed and re-anchored at `t = 0`.
#[derive(Debug, Clone)]
pub struct CirculantFbm {
    grid: GridSpec,
    fgn: CirculantFgn,
}

impl CirculantFbm {
    pub fn new(h: HurstParam, grid: GridSpec) -> Result<Self> {
        Ok(Self {
            grid,
            fgn: CirculantFgn::new(h, grid.len() - 1)?,
        })
    }

    pub fn embedding(&self) -> &CirculantFgn {
        &self.fgn
    }
}

impl PathSampler for CirculantFbm {
    fn grid(&self) -> &GridSpec {
        &self.grid
    }

    fn hurst(&self) -> HurstParam {
        self.fgn.h
    }

    fn sample_from<R: Rng + ?Sized>(&self, rng: &mut R, seed: u64) -> FbmPath {
        let increments = self.fgn.sample(self.grid.spacing(), rng);
        let mut values = Vec::with_capacity(increments.len() + 1);
        let mut acc = 0.0;
        values.push(acc);
        for d in increments {
            acc += d;
            values.push(acc);
        }
        let zero = (-self.grid.first()) as usize;
        let anchor = values[zero];
        for v in &mut values {
            *v -= anchor;
        }
        FbmPath::new(self.grid, self.fgn.h, values, seed).expect("anchored by construction")
    }
}

/// Draws one path with [`CirculantFbm`].
pub fn sample_fbm(h: HurstParam, grid: GridSpec, seed: SeedSpec) -> Result<FbmPath> {
    Ok(CirculantFbm::new(h, grid)?.sample(seed))
}

/// Dense Cholesky factor of `C_H` on the nonzero grid points; the value at
/// zero is pinned to 0. `O(N³)` setup, `O(N²)` per draw.
#[derive(Debug, Clone)]
pub struct CholeskyFbm {
    grid: GridSpec,
    h: HurstParam,
    // row-major lower triangle, row i has i+1 entries
    factor: Vec<f64>,
    times: Vec<f64>,
}

impl CholeskyFbm {
    pub fn new(h: HurstParam, grid: GridSpec) -> Result<Self> {
        Self::with_cap(h, grid, CHOLESKY_CAP)
    }

    pub fn with_cap(h: HurstParam, grid: GridSpec, cap: usize) -> Result<Self> {
        if grid.len() > cap {
            return Err(EngineError::TooLarge {
                points: grid.len(),
                cap,
            });
        }
        let times: Vec<f64> = (grid.first()..=grid.last())
            .filter(|&i| i != 0)
            .map(|i| grid.time(i))
            .collect();
        let n = times.len();
        let row_start = |i: usize| i * (i + 1) / 2;
        let mut l = vec![0.0; n * (n + 1) / 2];
        for i in 0..n {
            for j in 0..=i {
                let mut s = fbm_covariance(h, times[i], times[j]);
                let (ri, rj) = (row_start(i), row_start(j));
                for k in 0..j {
                    s -= l[ri + k] * l[rj + k];
                }
                if i == j {
                    if s <= 0.0 {
                        return Err(EngineError::Cholesky { minor: i + 1 });
                    }
                    l[ri + i] = s.sqrt();
                } else {
                    l[ri + j] = s / l[rj + j];
                }
            }
        }
        Ok(Self {
            grid,
            h,
            factor: l,
            times,
        })
    }
}

impl PathSampler for CholeskyFbm {
    fn grid(&self) -> &GridSpec {
        &self.grid
    }

    fn hurst(&self) -> HurstParam {
        self.h
    }

    fn sample_from<R: Rng + ?Sized>(&self, rng: &mut R, seed: u64) -> FbmPath {
        let n = self.times.len();
        let z: Vec<f64> = (0..n).map(|_| rng.sample(StandardNormal)).collect();
        let mut x = Vec::with_capacity(n);
        for i in 0..n {
            let row = &self.factor[i * (i + 1) / 2..][..=i];
            x.push(row.iter().zip(&z).map(|(a, b)| a * b).sum::<f64>());
        }
        let zero = (-self.grid.first()) as usize;
        x.insert(zero, 0.0);
        FbmPath::new(self.grid, self.h, x, seed).expect("anchored by construction")
    }
}

/// Draws one path with [`CholeskyFbm`].
pub fn sample_fbm_cholesky(h: HurstParam, grid: GridSpec, seed: SeedSpec) -> Result<FbmPath> {
    Ok(CholeskyFbm::new(h, grid)?.sample(seed))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn h(v: f64) -> HurstParam {
        HurstParam::new(v).unwrap()
    }

    #[test]
    fn embedding_is_nonnegative() {
        for &hv in &[0.1, 0.2, 0.25, 0.3, 0.4, 0.45, 0.5, 0.7] {
            for count in [1, 2, 7, 1000, 1 << 14] {
                let c = CirculantFgn::new(h(hv), count).unwrap();
                assert!(c.min_eigenvalue() >= 0.0);
                assert!(c.size() >= 2 * (count - 1));
            }
        }
    }

    #[test]
    fn deterministic_under_fixed_seed() {
        let grid = GridSpec::dyadic(6, -1.0, 1.0).unwrap();
        let a = sample_fbm(h(0.3), grid, SeedSpec::new(9, 4)).unwrap();
        let b = sample_fbm(h(0.3), grid, SeedSpec::new(9, 4)).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.at(0).unwrap(), 0.0);
        let c = sample_fbm_cholesky(h(0.3), grid, SeedSpec::new(9, 4)).unwrap();
        assert_eq!(c.at(0).unwrap(), 0.0);
        assert_eq!(c.values().len(), grid.len());
    }

    #[test]
    fn cholesky_cap_and_failure() {
        let grid = GridSpec::dyadic(12, 0.0, 1.0).unwrap();
        assert!(matches!(
            CholeskyFbm::new(h(0.3), grid),
            Err(EngineError::TooLarge { points: 4097, .. })
        ));
    }
}
