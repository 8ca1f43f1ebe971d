//! Fractional Brownian motion in Brownian time, `Z_t = X_{Y_t}`, observed along
//! the hitting times `T_{k,n}` of the spatial grid `2^{−n/2}ℤ` by `Y`.
//!
//! Only the embedded walk `S_k = 2^{n/2} Y_{T_{k,n}}` and `X` on the spatial
//! grid enter the statistics, so the hitting times themselves never appear.

use alloc::vec::Vec;
use libm::fabs;

use crate::error::{Error, Result};
use crate::gaussian::{bivariate_odd_moment, fgn_correlation};
use crate::grid::FbmPath;
use crate::hurst::HurstParam;
use crate::stats::{powi, KahanSum};
use crate::variation::horizon_steps;
use crate::weight::WeightFunction;

/// Simple symmetric random walk `S_k`, `S_0 = 0`, at level `n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EmbeddedWalk {
    level: u32,
    steps: Vec<i8>,
    positions: Vec<i64>,
    seed: u64,
}

impl EmbeddedWalk {
    /// Builds the walk from `±1` steps; `seed` is recorded, not used.
    pub fn from_steps(level: u32, steps: Vec<i8>, seed: u64) -> Result<Self> {
        let mut positions = Vec::with_capacity(steps.len() + 1);
        let mut s = 0i64;
        positions.push(s);
        for (index, &value) in steps.iter().enumerate() {
            if value != 1 && value != -1 {
                return Err(Error::InvalidStep { index, value });
            }
            s += i64::from(value);
            positions.push(s);
        }
        Ok(Self {
            level,
            steps,
            positions,
            seed,
        })
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn steps(&self) -> &[i8] {
        &self.steps
    }

    /// `S_0, S_1, …, S_len`.
    pub fn positions(&self) -> &[i64] {
        &self.positions
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// `(min_k S_k, max_k S_k)`.
    pub fn range(&self) -> (i64, i64) {
        let lo = *self.positions.iter().min().unwrap_or(&0);
        let hi = *self.positions.iter().max().unwrap_or(&0);
        (lo, hi)
    }

    /// `K = ⌊2ⁿt⌋`, checked against the walk length.
    pub fn horizon(&self, t: f64) -> Result<usize> {
        let k = horizon_steps(self.level, t)?;
        if k > self.steps.len() {
            return Err(Error::HorizonExceeded {
                t,
                max: libm::ldexp(self.steps.len() as f64, -(self.level as i32)),
            });
        }
        Ok(k)
    }

    /// `Y_{T_{k,n}} = 2^{−n/2} S_k`.
    pub fn brownian_value(&self, k: usize) -> f64 {
        self.positions[k] as f64 * libm::pow(2.0, -(self.level as f64) / 2.0)
    }
}

/// Up- and downcrossing counts of the spatial intervals `[j, j+1]` (in walk
/// units) during the first `K` steps.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CrossingCounts {
    level: u32,
    horizon: usize,
    first: i64,
    up: Vec<u64>,
    down: Vec<u64>,
}

impl CrossingCounts {
    pub fn level(&self) -> u32 {
        self.level
    }

    /// `K = ⌊2ⁿt⌋`.
    pub fn horizon(&self) -> usize {
        self.horizon
    }

    /// Intervals `j` that may have nonzero counts.
    pub fn indices(&self) -> core::ops::Range<i64> {
        self.first..self.first + self.up.len() as i64
    }

    fn slot(&self, j: i64) -> Option<usize> {
        self.indices()
            .contains(&j)
            .then(|| (j - self.first) as usize)
    }

    /// `U_{j,n}(t)`.
    pub fn up(&self, j: i64) -> u64 {
        self.slot(j).map_or(0, |i| self.up[i])
    }

    /// `D_{j,n}(t)`.
    pub fn down(&self, j: i64) -> u64 {
        self.slot(j).map_or(0, |i| self.down[i])
    }

    /// `U_{j,n}(t) − D_{j,n}(t)`.
    pub fn net(&self, j: i64) -> i64 {
        self.up(j) as i64 - self.down(j) as i64
    }

    /// `Σ_j (U_j + D_j)`.
    pub fn total(&self) -> u64 {
        self.up.iter().sum::<u64>() + self.down.iter().sum::<u64>()
    }

    /// Whether `U_j − D_j = 1_{0≤j<j*} − 1_{j*≤j<0}` for every `j`.
    pub fn matches_indicator(&self, jstar: i64) -> bool {
        let expected = |j: i64| -> i64 {
            if (0..jstar).contains(&j) {
                1
            } else if (jstar..0).contains(&j) {
                -1
            } else {
                0
            }
        };
        let lo = self.first.min(jstar.min(0)) - 1;
        let hi = (self.first + self.up.len() as i64).max(jstar.max(0)) + 1;
        (lo..=hi).all(|j| self.net(j) == expected(j))
    }
}

/// Counts crossings in a single pass over the first `⌊2ⁿt⌋` steps: a `+1`
/// step from `S_k = j` upcrosses `j`, a `−1` step to `S_{k+1} = j` downcrosses `j`.
pub fn crossing_counts(walk: &EmbeddedWalk, t: f64) -> Result<CrossingCounts> {
    let k = walk.horizon(t)?;
    let s = &walk.positions[..=k];
    let lo = *s.iter().min().unwrap_or(&0);
    let hi = *s.iter().max().unwrap_or(&0);
    let width = (hi - lo) as usize;
    let mut up = alloc::vec![0u64; width];
    let mut down = alloc::vec![0u64; width];
    for w in s.windows(2) {
        if w[1] > w[0] {
            up[(w[0] - lo) as usize] += 1;
        } else {
            down[(w[1] - lo) as usize] += 1;
        }
    }
    Ok(CrossingCounts {
        level: walk.level,
        horizon: k,
        first: lo,
        up,
        down,
    })
}

/// `j*(n, t) = S_{⌊2ⁿt⌋}`.
pub fn jstar(walk: &EmbeddedWalk, t: f64) -> Result<i64> {
    Ok(walk.positions[walk.horizon(t)?])
}

/// An embedded walk together with an independent two-sided fBm `X` on the
/// spatial grid `2^{−n/2}ℤ` covering the walk's range.
#[derive(Debug, Clone, PartialEq)]
pub struct FbmbtSample {
    walk: EmbeddedWalk,
    path: FbmPath,
}

impl FbmbtSample {
    pub fn new(walk: EmbeddedWalk, path: FbmPath) -> Result<Self> {
        if path.grid().half_level() != walk.level {
            return Err(Error::InvalidGrid("spatial grid must have spacing 2^(-n/2)"));
        }
        let (lo, hi) = walk.range();
        let g = path.grid();
        for index in [lo, hi] {
            if index < g.first() || index > g.last() {
                return Err(Error::SpatialRange {
                    index,
                    first: g.first(),
                    last: g.last(),
                });
            }
        }
        Ok(Self { walk, path })
    }

    pub fn walk(&self) -> &EmbeddedWalk {
        &self.walk
    }

    pub fn path(&self) -> &FbmPath {
        &self.path
    }

    /// `Z_{T_{k,n}} = X_{2^{−n/2} S_k}`.
    pub fn z(&self, k: usize) -> f64 {
        self.x(self.walk.positions[k])
    }

    /// `X` at spatial index `j`; the index is inside the grid by construction.
    fn x(&self, j: i64) -> f64 {
        self.path.values()[(j - self.path.grid().first()) as usize]
    }

    /// `2^{nH/2}`.
    fn scale(&self) -> f64 {
        self.path.grid().increment_scale(self.path.hurst())
    }
}

fn check_r(r: u32) -> Result<u32> {
    if r == 0 {
        return Err(Error::InvalidArgument("r must be at least 1"));
    }
    Ok(2 * r - 1)
}

#[inline]
fn trapezoid_term<W: WeightFunction + ?Sized>(f: &W, a: f64, b: f64, scale: f64, p: u32) -> f64 {
    0.5 * (f.value(a) + f.value(b)) * powi(scale * (b - a), p)
}

/// `V_n(f,t) = Σ_{k<⌊2ⁿt⌋} ½(f(Z_k) + f(Z_{k+1}))(2^{nH/2}(Z_{k+1} − Z_k))^{2r−1}`
/// evaluated along the walk.
pub fn vn_direct<W: WeightFunction + ?Sized>(
    sample: &FbmbtSample,
    f: &W,
    r: u32,
    t: f64,
) -> Result<f64> {
    let p = check_r(r)?;
    let k = sample.walk.horizon(t)?;
    let scale = sample.scale();
    let mut acc = KahanSum::new();
    for i in 0..k {
        acc.add(trapezoid_term(f, sample.z(i), sample.z(i + 1), scale, p));
    }
    Ok(acc.value())
}

/// `Σ_k |term_k|` of [`vn_direct`]: the rounding scale for comparing
/// evaluations of `V_n`.
pub fn vn_magnitude<W: WeightFunction + ?Sized>(
    sample: &FbmbtSample,
    f: &W,
    r: u32,
    t: f64,
) -> Result<f64> {
    let p = check_r(r)?;
    let k = sample.walk.horizon(t)?;
    let scale = sample.scale();
    let mut acc = KahanSum::new();
    for i in 0..k {
        acc.add(fabs(trapezoid_term(f, sample.z(i), sample.z(i + 1), scale, p)));
    }
    Ok(acc.value())
}

/// `V_n(f,t)` regrouped by spatial interval:
/// `Σ_j ½(f(X_j) + f(X_{j+1}))(2^{nH/2}(X_{j+1} − X_j))^{2r−1} (U_j − D_j)`.
pub fn vn_crossing<W: WeightFunction + ?Sized>(
    sample: &FbmbtSample,
    f: &W,
    r: u32,
    t: f64,
) -> Result<f64> {
    let p = check_r(r)?;
    let counts = crossing_counts(&sample.walk, t)?;
    let scale = sample.scale();
    let mut acc = KahanSum::new();
    for j in counts.indices() {
        let net = counts.net(j);
        if net != 0 {
            acc.add(net as f64 * trapezoid_term(f, sample.x(j), sample.x(j + 1), scale, p));
        }
    }
    Ok(acc.value())
}

/// Spatial index `⌊2^{n/2}|u|⌋` carrying the sign of `u`.
fn signed_spatial_index(path: &FbmPath, u: f64) -> i64 {
    let k = path.grid().steps_until(fabs(u));
    if u < 0.0 {
        -k
    } else {
        k
    }
}

fn branch_sum<W, G>(path: &FbmPath, j: i64, r: u32, weight: G, f: &W) -> Result<f64>
where
    W: WeightFunction + ?Sized,
    G: Fn(&W, f64, f64) -> f64,
{
    let p = check_r(r)?;
    let g = path.grid();
    if j < g.first() || j > g.last() {
        return Err(Error::SpatialRange {
            index: j,
            first: g.first(),
            last: g.last(),
        });
    }
    let scale = g.increment_scale(path.hurst());
    let values = path.values();
    let zero = (-g.first()) as usize;
    // X^±_i for i = 0..=|j|
    let side = |i: usize| if j >= 0 { values[zero + i] } else { values[zero - i] };
    let mut acc = KahanSum::new();
    for i in 0..j.unsigned_abs() as usize {
        let (a, b) = (side(i), side(i + 1));
        acc.add(weight(f, a, b) * powi(scale * (b - a), p));
    }
    Ok(acc.value())
}

/// `W_n(f, ·)` at spatial index `j`: the trapezoidal sum over the first `|j|`
/// intervals of `X⁺` (`j ≥ 0`) or `X⁻_s = X_{−s}` (`j < 0`).
pub fn wn_index<W: WeightFunction + ?Sized>(path: &FbmPath, f: &W, r: u32, j: i64) -> Result<f64> {
    branch_sum(path, j, r, |f, a, b| 0.5 * (f.value(a) + f.value(b)), f)
}

/// `W_n(f, u)` for real `u`, using `⌊2^{n/2}|u|⌋` steps on the side of `sign(u)`.
pub fn wn<W: WeightFunction + ?Sized>(path: &FbmPath, f: &W, r: u32, u: f64) -> Result<f64> {
    wn_index(path, f, r, signed_spatial_index(path, u))
}

/// `M_n(f, ·)` at spatial index `j`: as [`wn_index`] with midpoint weights `f(β̃_j)`.
pub fn mn_index<W: WeightFunction + ?Sized>(path: &FbmPath, f: &W, r: u32, j: i64) -> Result<f64> {
    branch_sum(path, j, r, |f, a, b| f.value(0.5 * (a + b)), f)
}

/// `M_n(f, u)` for real `u`.
pub fn mn<W: WeightFunction + ?Sized>(path: &FbmPath, f: &W, r: u32, u: f64) -> Result<f64> {
    mn_index(path, f, r, signed_spatial_index(path, u))
}

/// Exact `Var(2^{−n/4} V_n(1, t))` for the unit weight at level `n` with
/// `K = ⌊2ⁿt⌋` walk steps: `2^{−n/2} E[Σ_{i,l<|S_K|} b(ρ_H(i−l))]`, where
/// `b(ρ) = E[(UV)^{2r−1}]` and `S_K` is the walk endpoint.
pub fn unit_weight_variance(h: HurstParam, r: u32, n: u32, steps: usize) -> Result<f64> {
    check_r(r)?;
    // cumulative sums over lags of b(ρ(k)) and k·b(ρ(k))
    let mut b = Vec::with_capacity(steps + 1);
    for k in 0..=steps {
        b.push(bivariate_odd_moment(r, fgn_correlation(h, k as i64))?);
    }
    // S(m) = m b(0) + 2 Σ_{k=1}^{m−1} (m−k) b(k), built incrementally:
    // S(m+1) − S(m) = b(0) + 2 Σ_{k=1}^{m} b(k)
    let mut s_of = Vec::with_capacity(steps + 1);
    s_of.push(0.0);
    let (mut s, mut tail) = (0.0, 0.0);
    for m in 0..steps {
        if m >= 1 {
            tail += b[m];
        }
        s += b[0] + 2.0 * tail;
        s_of.push(s);
    }
    // P(S_K = K − 2i) = C(K, i) 2^{−K}, in log space
    let kf = steps as f64;
    let mut log_binom = 0.0;
    let mut acc = KahanSum::new();
    for i in 0..=steps {
        if i > 0 {
            log_binom += libm::log((kf - i as f64 + 1.0) / i as f64);
        }
        let p = libm::exp(log_binom - kf * core::f64::consts::LN_2);
        let j = (steps as i64 - 2 * i as i64).unsigned_abs() as usize;
        acc.add(p * s_of[j]);
    }
    Ok(acc.value() * libm::pow(2.0, -(n as f64) / 2.0))
}

/// `|a − b| / max(|a|, |b|, scale)`; zero when both sides vanish.
pub fn relative_residual(a: f64, b: f64, scale: f64) -> f64 {
    let d = fabs(a - b);
    if d == 0.0 {
        return 0.0;
    }
    d / fabs(a).max(fabs(b)).max(scale)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::GridSpec;
    use crate::weight::BuiltinWeight;
    use alloc::vec;

    fn walk(steps: &[i8]) -> EmbeddedWalk {
        EmbeddedWalk::from_steps(2, steps.to_vec(), 0).unwrap()
    }

    #[test]
    fn hand_enumerated_counts() {
        let w = walk(&[1, 1, -1, 1]);
        assert_eq!(w.positions(), &[0, 1, 2, 1, 2]);
        let c = crossing_counts(&w, 1.0).unwrap();
        assert_eq!((c.up(0), c.down(0), c.up(1), c.down(1)), (1, 0, 2, 1));
        assert_eq!(c.total(), 4);
        assert_eq!(jstar(&w, 1.0).unwrap(), 2);
        assert!(c.matches_indicator(2));
        assert!(!c.matches_indicator(1));
    }

    #[test]
    fn downward_walk() {
        let w = walk(&[-1, -1, -1]);
        let c = crossing_counts(&w, 0.75).unwrap();
        assert_eq!(jstar(&w, 0.75).unwrap(), -3);
        for j in -3..0 {
            assert_eq!(c.net(j), -1);
        }
        assert!(c.matches_indicator(-3));
    }

    #[test]
    fn empty_horizon() {
        let w = walk(&[1, -1]);
        let c = crossing_counts(&w, 0.1).unwrap();
        assert_eq!(c.total(), 0);
        assert_eq!(jstar(&w, 0.1).unwrap(), 0);
        assert!(crossing_counts(&w, 1.0).is_err());
    }

    #[test]
    fn rejects_bad_steps() {
        assert_eq!(
            EmbeddedWalk::from_steps(2, vec![1, 0], 0),
            Err(Error::InvalidStep { index: 1, value: 0 })
        );
    }

    fn sample() -> FbmbtSample {
        let w = walk(&[1, 1, -1, -1, -1, -1, 1, -1]);
        let g = GridSpec::half_dyadic(2, -3, 2).unwrap();
        let vals = vec![0.7, -0.4, 0.3, 0.0, 0.9, -0.2];
        let p = FbmPath::new(g, HurstParam::new(0.25).unwrap(), vals, 0).unwrap();
        FbmbtSample::new(w, p).unwrap()
    }

    #[test]
    fn crossing_regrouping_and_composition() {
        let s = sample();
        let f = BuiltinWeight::SquareGaussian;
        for r in 1..=3 {
            for k in 0..=8 {
                let t = k as f64 / 4.0;
                let direct = vn_direct(&s, &f, r, t).unwrap();
                let crossing = vn_crossing(&s, &f, r, t).unwrap();
                let j = jstar(s.walk(), t).unwrap();
                let composed = wn_index(s.path(), &f, r, j).unwrap();
                let via_time = wn(s.path(), &f, r, s.walk().brownian_value(k)).unwrap();
                assert!((direct - crossing).abs() < 1e-12);
                assert!((direct - composed).abs() < 1e-12);
                assert!((composed - via_time).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn unit_weight_telescopes() {
        let s = sample();
        let one = BuiltinWeight::Constant(1.0);
        let scale = libm::pow(2.0, 0.25);
        assert!((wn_index(s.path(), &one, 1, 2).unwrap() - scale * -0.2).abs() < 1e-15);
        assert!((wn_index(s.path(), &one, 1, -3).unwrap() - scale * 0.7).abs() < 1e-15);
        assert_eq!(wn(s.path(), &one, 1, 0.0).unwrap(), 0.0);
        assert!(wn_index(s.path(), &one, 1, 3).is_err());
    }

    #[test]
    fn affine_midpoint_matches_trapezoid() {
        let s = sample();
        let f = BuiltinWeight::Affine {
            slope: -1.5,
            intercept: 0.25,
        };
        for j in -3..=2 {
            let a = mn_index(s.path(), &f, 2, j).unwrap();
            let b = wn_index(s.path(), &f, 2, j).unwrap();
            assert!((a - b).abs() < 1e-14);
        }
    }

    #[test]
    fn unit_weight_variance_small_case() {
        // two steps: |S_2| is 2 w.p. 1/2 and 0 otherwise
        let h = HurstParam::new(0.25).unwrap();
        let rho = crate::gaussian::fgn_correlation(h, 1);
        let b1 = crate::gaussian::bivariate_odd_moment(2, rho).unwrap();
        let expected = 0.5 * (2.0 * 15.0 + 2.0 * b1) * libm::pow(2.0, -0.5);
        let v = unit_weight_variance(h, 2, 1, 2).unwrap();
        assert!((v - expected).abs() < 1e-12);
    }

    #[test]
    fn sample_needs_coverage() {
        let w = walk(&[1, 1, 1]);
        let g = GridSpec::half_dyadic(2, -1, 2).unwrap();
        let p = FbmPath::new(g, HurstParam::new(0.25).unwrap(), vec![0.1, 0.0, 0.2, 0.3], 0)
            .unwrap();
        assert!(matches!(
            FbmbtSample::new(w, p),
            Err(Error::SpatialRange { index: 3, .. })
        ));
    }
}
