//! Grids of the form `{i · 2^{−k/2} : first ≤ i ≤ last}` and paths sampled on them.
//!
//! Time grids are dyadic (`k = 2n`, spacing `2^{−n}`). The spatial grid of the
//! Brownian-time construction has spacing `2^{−n/2}`, which is dyadic only for
//! even `n`; storing the exponent in half-steps keeps both exact.

use alloc::vec::Vec;
use libm::{floor, ldexp, pow, round};

use crate::error::{Error, Result};
use crate::hurst::HurstParam;

/// Largest supported number of grid points.
pub const MAX_POINTS: usize = 1 << 30;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GridSpec {
    half_level: u32,
    first: i64,
    last: i64,
}

impl GridSpec {
    /// Dyadic time grid of level `level` (spacing `2^{−level}`) on
    /// `[t_min, t_max]`; both ends must be multiples of the spacing and
    /// `t_min ≤ 0 < t_max`.
    pub fn dyadic(level: u32, t_min: f64, t_max: f64) -> Result<Self> {
        if level == 0 {
            return Err(Error::InvalidGrid("level must be at least 1"));
        }
        if level > 60 {
            return Err(Error::InvalidGrid("level too fine"));
        }
        if !(t_min <= 0.0 && t_max > 0.0 && t_min.is_finite() && t_max.is_finite()) {
            return Err(Error::InvalidGrid("need t_min <= 0 < t_max"));
        }
        let lo = ldexp(t_min, level as i32);
        let hi = ldexp(t_max, level as i32);
        if lo != floor(lo) || hi != floor(hi) {
            return Err(Error::InvalidGrid("endpoints must be multiples of 2^-level"));
        }
        Self::from_indices(2 * level, lo as i64, hi as i64)
    }

    /// Spatial grid `{j 2^{−n/2}}` for `first ≤ j ≤ last`, `first ≤ 0 < last`.
    pub fn half_dyadic(n: u32, first: i64, last: i64) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidGrid("level must be at least 1"));
        }
        Self::from_indices(n, first, last)
    }

    fn from_indices(half_level: u32, first: i64, last: i64) -> Result<Self> {
        if !(first <= 0 && last > 0) {
            return Err(Error::InvalidGrid("grid must contain 0 and a positive point"));
        }
        let count = (last as i128 - first as i128 + 1) as u128;
        if count > MAX_POINTS as u128 {
            return Err(Error::InvalidGrid("too many grid points"));
        }
        Ok(Self {
            half_level,
            first,
            last,
        })
    }

    /// Spacing exponent in half-steps: spacing is `2^{−half_level/2}`.
    pub fn half_level(&self) -> u32 {
        self.half_level
    }

    /// `log₂(1/spacing)`; the dyadic level for time grids.
    pub fn level(&self) -> f64 {
        f64::from(self.half_level) / 2.0
    }

    /// The integer dyadic level, if the spacing is `2^{−n}` for an integer `n`.
    pub fn dyadic_level(&self) -> Option<u32> {
        self.half_level.is_multiple_of(2).then_some(self.half_level / 2)
    }

    pub fn spacing(&self) -> f64 {
        let whole = ldexp(1.0, -((self.half_level / 2) as i32));
        if self.half_level % 2 == 1 {
            whole * core::f64::consts::FRAC_1_SQRT_2
        } else {
            whole
        }
    }

    /// `spacing^{−H}`, the scale turning increments into unit-variance ones.
    pub fn increment_scale(&self, h: HurstParam) -> f64 {
        pow(2.0, self.level() * h.value())
    }

    /// `spacing^{1/2}`.
    pub fn sqrt_spacing(&self) -> f64 {
        if self.half_level.is_multiple_of(4) {
            ldexp(1.0, -((self.half_level / 4) as i32))
        } else {
            pow(2.0, -self.level() / 2.0)
        }
    }

    pub fn first(&self) -> i64 {
        self.first
    }

    pub fn last(&self) -> i64 {
        self.last
    }

    pub fn len(&self) -> usize {
        (self.last - self.first + 1) as usize
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn t_min(&self) -> f64 {
        self.time(self.first)
    }

    pub fn t_max(&self) -> f64 {
        self.time(self.last)
    }

    /// Time of grid index `i`.
    pub fn time(&self, i: i64) -> f64 {
        if self.half_level.is_multiple_of(2) {
            ldexp(i as f64, -((self.half_level / 2) as i32))
        } else {
            i as f64 * self.spacing()
        }
    }

    /// Storage offset of grid index `i`.
    pub fn offset(&self, i: i64) -> Option<usize> {
        (self.first..=self.last)
            .contains(&i)
            .then(|| (i - self.first) as usize)
    }

    /// Number of whole steps in `[0, t]`: `⌊t / spacing⌋` for `t ≥ 0`,
    /// snapping values within `1e−9` of an integer (so `2^{−n/2}·j` maps back to `j`).
    pub fn steps_until(&self, t: f64) -> i64 {
        let x = t / self.spacing();
        let r = round(x);
        if (x - r).abs() <= 1e-9 * r.abs().max(1.0) {
            r as i64
        } else {
            floor(x) as i64
        }
    }
}

/// Values of a (two-sided) fBm on a grid, anchored at zero.
#[derive(Debug, Clone, PartialEq)]
pub struct FbmPath {
    grid: GridSpec,
    h: HurstParam,
    values: Vec<f64>,
    seed: u64,
}

impl FbmPath {
    pub fn new(grid: GridSpec, h: HurstParam, values: Vec<f64>, seed: u64) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::PathLength {
                expected: grid.len(),
                got: values.len(),
            });
        }
        let zero = values[(-grid.first) as usize];
        if zero != 0.0 {
            return Err(Error::NotAnchored(zero));
        }
        Ok(Self {
            grid,
            h,
            values,
            seed,
        })
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn hurst(&self) -> HurstParam {
        self.h
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// All values, ordered by grid index from `first` to `last`.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Values at indices `0..=last` (times `0, δ, 2δ, …`).
    pub fn forward(&self) -> &[f64] {
        &self.values[(-self.grid.first) as usize..]
    }

    /// Values at indices `0, −1, −2, …, first`, i.e. `X⁻_{jδ} = X_{−jδ}`.
    pub fn backward(&self) -> impl ExactSizeIterator<Item = f64> + DoubleEndedIterator + '_ {
        self.values[..=(-self.grid.first) as usize].iter().rev().copied()
    }

    /// Value at grid index `i`.
    pub fn at(&self, i: i64) -> Result<f64> {
        self.grid
            .offset(i)
            .map(|k| self.values[k])
            .ok_or(Error::SpatialRange {
                index: i,
                first: self.grid.first,
                last: self.grid.last,
            })
    }

    /// The same path with every value negated.
    pub fn negated(&self) -> Self {
        Self {
            values: self.values.iter().map(|v| -v).collect(),
            ..self.clone()
        }
    }

    /// Restriction to every `2^k`-th forward point: the level-`(n−k)` path on
    /// `[0, ⌊t_max⌋_{n−k}]`. Requires a dyadic grid with `n − k ≥ 1`.
    pub fn coarsen(&self, k: u32) -> Result<Self> {
        let n = self
            .grid
            .dyadic_level()
            .ok_or(Error::InvalidGrid("coarsening needs a dyadic grid"))?;
        if k >= n {
            return Err(Error::InvalidGrid("cannot coarsen below level 1"));
        }
        let stride = 1usize << k;
        let values: Vec<f64> = self.forward().iter().step_by(stride).copied().collect();
        let last = values.len() as i64 - 1;
        let grid = GridSpec::from_indices(2 * (n - k), 0, last)?;
        Self::new(grid, self.h, values, self.seed)
    }
}
