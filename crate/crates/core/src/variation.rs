//! Weighted odd-power variations of a sampled path as partial-sum processes
//! on its dyadic time grid.
//!
//! With `Δ_j = X_{(j+1)2^{−n}} − X_{j2^{−n}}` and `β_j = ½(X_{j2^{−n}} + X_{(j+1)2^{−n}})`
//! every series has the form `c_n Σ_{j<⌊2ⁿt⌋} w_j (2^{nH} Δ_j)^{2r−1}` for a
//! weight `w_j` and a normalization `c_n`:
//!
//! | series        | `w_j`                      | `c_n`        |
//! |---------------|----------------------------|--------------|
//! | midpoint      | `f(β_j)`                   | `2^{−n/2}`   |
//! | trapezoidal   | `½(f(X_j) + f(X_{j+1}))`   | `2^{−n/2}`   |
//! | endpoint      | `f(X_j)` or `f(X_{j+1})`   | `2^{nH−n}`   |
//! | unweighted    | `1`                        | `2^{−n/2}`   |
//! | coarse weight | `f(β_{k(j),m})`            | `2^{−n/2}`   |

use alloc::vec::Vec;
use libm::{floor, ldexp, pow, round, sqrt};

use crate::error::{Error, Result};
use crate::grid::FbmPath;
use crate::stats::{powi, KahanSum};
use crate::weight::WeightFunction;

/// Running sums `values[k]` of a statistic at the instants `k 2^{−n}`.
#[derive(Debug, Clone, PartialEq)]
pub struct VariationSeries {
    level: u32,
    values: Vec<f64>,
}

impl VariationSeries {
    /// Builds the running sum of `terms`, with `values[0] = 0`.
    pub fn from_terms<I: IntoIterator<Item = f64>>(level: u32, terms: I) -> Self {
        let mut acc = KahanSum::new();
        let mut values = Vec::new();
        values.push(0.0);
        for x in terms {
            acc.add(x);
            values.push(acc.value());
        }
        Self { level, values }
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Number of grid instants (steps + 1).
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Time of instant `k`.
    pub fn time(&self, k: usize) -> f64 {
        ldexp(k as f64, -(self.level as i32))
    }

    pub fn times(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.values.len()).map(|k| self.time(k))
    }

    /// Right-continuous value at time `t ≥ 0`, i.e. `values[⌊2ⁿt⌋]`.
    pub fn at(&self, t: f64) -> Result<f64> {
        let k = horizon_steps(self.level, t)?;
        let max = self.time(self.values.len() - 1);
        self.values
            .get(k)
            .copied()
            .ok_or(Error::HorizonExceeded { t, max })
    }

    /// Value at the final instant.
    pub fn last(&self) -> f64 {
        *self.values.last().unwrap_or(&0.0)
    }

    /// Per-step summands recovered by differencing.
    pub fn increments(&self) -> Vec<f64> {
        self.values.windows(2).map(|w| w[1] - w[0]).collect()
    }

    /// Every value multiplied by `c`.
    pub fn scaled(&self, c: f64) -> Self {
        Self {
            level: self.level,
            values: self.values.iter().map(|v| v * c).collect(),
        }
    }

    /// Pointwise difference `self − other`; both must share a grid.
    pub fn minus(&self, other: &Self) -> Result<Self> {
        if self.level != other.level || self.len() != other.len() {
            return Err(Error::InvalidArgument("series on different grids"));
        }
        Ok(Self {
            level: self.level,
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a - b)
                .collect(),
        })
    }
}

/// `⌊2ⁿt⌋` for `t ≥ 0`, snapping values within `1e−9` of an integer.
pub fn horizon_steps(level: u32, t: f64) -> Result<usize> {
    if !(t >= 0.0 && t.is_finite()) {
        return Err(Error::InvalidArgument("time must be finite and non-negative"));
    }
    let x = ldexp(t, level as i32);
    let r = round(x);
    let k = if (x - r).abs() <= 1e-9 * r.max(1.0) {
        r
    } else {
        floor(x)
    };
    Ok(k as usize)
}

/// Per-step quantities of a path.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepQuantities {
    /// `Δ_j = X_{j+1} − X_j`.
    pub increment: f64,
    /// `β_j = ½(X_j + X_{j+1})`.
    pub midpoint: f64,
    /// `½(f(X_j) + f(X_{j+1}))`.
    pub trapezoid_weight: f64,
}

pub fn step_quantities<W: WeightFunction + ?Sized>(path: &FbmPath, f: &W) -> Vec<StepQuantities> {
    path.forward()
        .windows(2)
        .map(|w| StepQuantities {
            increment: w[1] - w[0],
            midpoint: 0.5 * (w[0] + w[1]),
            trapezoid_weight: 0.5 * (f.value(w[0]) + f.value(w[1])),
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// Which integrand [`limit_quadrature`] integrates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Integrand {
    F,
    FPrime,
}

struct Ctx<'a> {
    n: u32,
    scale: f64,
    x: &'a [f64],
    power: u32,
}

fn context(path: &FbmPath, r: u32) -> Result<Ctx<'_>> {
    let n = path
        .grid()
        .dyadic_level()
        .ok_or(Error::InvalidGrid("variations need a dyadic time grid"))?;
    if r == 0 {
        return Err(Error::InvalidArgument("r must be at least 1"));
    }
    Ok(Ctx {
        n,
        scale: path.grid().increment_scale(path.hurst()),
        x: path.forward(),
        power: 2 * r - 1,
    })
}

impl Ctx<'_> {
    #[inline]
    fn odd_power(&self, j: usize) -> f64 {
        powi(self.scale * (self.x[j + 1] - self.x[j]), self.power)
    }

    fn steps(&self) -> usize {
        self.x.len() - 1
    }

    fn series<F: FnMut(usize) -> f64>(&self, norm: f64, mut weight: F) -> VariationSeries {
        VariationSeries::from_terms(
            self.n,
            (0..self.steps()).map(|j| norm * weight(j) * self.odd_power(j)),
        )
    }

    fn half_norm(&self) -> f64 {
        1.0 / sqrt(ldexp(1.0, self.n as i32))
    }
}

/// `Φ_n(t) = 2^{−n/2} Σ_{j<⌊2ⁿt⌋} f(β_j)(2^{nH}Δ_j)^{2r−1}` over the forward path.
pub fn midpoint_variation<W: WeightFunction + ?Sized>(
    path: &FbmPath,
    f: &W,
    r: u32,
) -> Result<VariationSeries> {
    let c = context(path, r)?;
    let x = c.x;
    Ok(c.series(c.half_norm(), |j| f.value(0.5 * (x[j] + x[j + 1]))))
}

/// `Ψ_n(t)`, the same sum with weight `½(f(X_j) + f(X_{j+1}))`.
pub fn trapezoidal_variation<W: WeightFunction + ?Sized>(
    path: &FbmPath,
    f: &W,
    r: u32,
) -> Result<VariationSeries> {
    let c = context(path, r)?;
    let x = c.x;
    Ok(c.series(c.half_norm(), |j| 0.5 * (f.value(x[j]) + f.value(x[j + 1]))))
}

/// `2^{nH−n} Σ f(X_node)(2^{nH}Δ_j)^{2r−1}` with the node on the given side.
pub fn endpoint_variation<W: WeightFunction + ?Sized>(
    path: &FbmPath,
    f: &W,
    r: u32,
    side: Side,
) -> Result<VariationSeries> {
    let c = context(path, r)?;
    let x = c.x;
    let norm = endpoint_norm(c.n, path.hurst().value());
    Ok(match side {
        Side::Left => c.series(norm, |j| f.value(x[j])),
        Side::Right => c.series(norm, |j| f.value(x[j + 1])),
    })
}

/// `2^{nH−n}`.
pub fn endpoint_norm(n: u32, h: f64) -> f64 {
    pow(2.0, n as f64 * (h - 1.0))
}

/// `2^{−n/2} Σ (2^{nH}Δ_j)^{2r−1}`.
pub fn unweighted_variation(path: &FbmPath, r: u32) -> Result<VariationSeries> {
    let c = context(path, r)?;
    Ok(c.series(c.half_norm(), |_| 1.0))
}

/// `Φ̃_{n,m}`: the midpoint sum with the weight frozen on the level-`m`
/// block containing each step, `f(β_{k(j),m})`, `k(j) = ⌊j 2^{m−n}⌋`.
pub fn coarse_weight_variation<W: WeightFunction + ?Sized>(
    path: &FbmPath,
    f: &W,
    r: u32,
    m: u32,
) -> Result<VariationSeries> {
    let c = context(path, r)?;
    if m > c.n {
        return Err(Error::InvalidArgument("coarse level m exceeds the path level"));
    }
    let x = c.x;
    let shift = c.n - m;
    let last = c.steps();
    // β_{k,m} needs X at (k+1)2^{−m}; past the end of the path the block is
    // truncated at the last sample.
    let beta = |k: usize| {
        let a = k << shift;
        let b = ((k + 1) << shift).min(last);
        0.5 * (x[a] + x[b])
    };
    Ok(c.series(c.half_norm(), |j| f.value(beta(j >> shift))))
}

/// Splits `Ψ_n − Φ_n` into the even-derivative Taylor part
/// `A_n = 2^{−n/2} Σ_j Σ_{k=1}^{⌊N/2⌋} f^{(2k)}(β_j) Δ_j^{2k} / ((2k)! 4^k) · (2^{nH}Δ_j)^{2r−1}`
/// and the remainder `B_n = Ψ_n − Φ_n − A_n`.
pub fn taylor_remainder_split<W: WeightFunction + ?Sized>(
    path: &FbmPath,
    f: &W,
    r: u32,
    order: u32,
) -> Result<(VariationSeries, VariationSeries)> {
    let c = context(path, r)?;
    if order == 0 {
        return Err(Error::InvalidArgument("Taylor order must be at least 1"));
    }
    let kmax = (order / 2) as usize;
    if f.order() < 2 * kmax {
        return Err(Error::InsufficientOrder {
            required: 2 * kmax,
            available: f.order(),
        });
    }
    // 1/((2k)! 4^k)
    let mut coeff = Vec::with_capacity(kmax);
    let mut fact = 1.0;
    for k in 1..=kmax {
        fact *= ((2 * k - 1) * (2 * k)) as f64;
        coeff.push(1.0 / (fact * ldexp(1.0, 2 * k as i32)));
    }
    let x = c.x;
    let norm = c.half_norm();
    let mut a_terms = Vec::with_capacity(c.steps());
    let mut b_terms = Vec::with_capacity(c.steps());
    for j in 0..c.steps() {
        let d = x[j + 1] - x[j];
        let beta = 0.5 * (x[j] + x[j + 1]);
        let d2 = d * d;
        let mut correction = 0.0;
        let mut dpow = 1.0;
        for (k, ck) in coeff.iter().enumerate() {
            dpow *= d2;
            correction += ck * f.eval(2 * (k + 1), beta) * dpow;
        }
        let gap = 0.5 * (f.value(x[j]) + f.value(x[j + 1])) - f.value(beta);
        let p = norm * c.odd_power(j);
        a_terms.push(correction * p);
        b_terms.push((gap - correction) * p);
    }
    Ok((
        VariationSeries::from_terms(c.n, a_terms),
        VariationSeries::from_terms(c.n, b_terms),
    ))
}

/// Trapezoid rule for `∫_0^t g(X_s) ds`, `g = f` or `f′`, at the path's resolution.
pub fn limit_quadrature<W: WeightFunction + ?Sized>(
    path: &FbmPath,
    f: &W,
    which: Integrand,
    t: f64,
) -> Result<f64> {
    let n = path
        .grid()
        .dyadic_level()
        .ok_or(Error::InvalidGrid("quadrature needs a dyadic time grid"))?;
    let k = covered_steps(path, n, t)?;
    let order = match which {
        Integrand::F => 0,
        Integrand::FPrime => 1,
    };
    if f.order() < order {
        return Err(Error::InsufficientOrder {
            required: order,
            available: f.order(),
        });
    }
    let x = path.forward();
    let mut acc = KahanSum::new();
    for j in 0..k {
        acc.add(0.5 * (f.eval(order, x[j]) + f.eval(order, x[j + 1])));
    }
    Ok(ldexp(acc.value(), -(n as i32)))
}

fn covered_steps(path: &FbmPath, n: u32, t: f64) -> Result<usize> {
    let k = horizon_steps(n, t)?;
    if k + 1 > path.forward().len() {
        return Err(Error::HorizonExceeded {
            t,
            max: path.grid().t_max(),
        });
    }
    Ok(k)
}

/// One draw of `σ ∫_0^t f(X_s) dW_s` given the path: the left-point sum
/// `σ Σ_{j<⌊2ⁿt⌋} f(X_j) 2^{−n/2} ξ_j` for the supplied standard normals `ξ`.
pub fn stochastic_integral<W: WeightFunction + ?Sized>(
    path: &FbmPath,
    f: &W,
    sigma: f64,
    t: f64,
    normals: &[f64],
) -> Result<f64> {
    let n = path
        .grid()
        .dyadic_level()
        .ok_or(Error::InvalidGrid("stochastic integral needs a dyadic time grid"))?;
    let k = covered_steps(path, n, t)?;
    if normals.len() < k {
        return Err(Error::TooFewSamples {
            required: k,
            got: normals.len(),
        });
    }
    let x = path.forward();
    let mut acc = KahanSum::new();
    for j in 0..k {
        acc.add(f.value(x[j]) * normals[j]);
    }
    Ok(sigma * acc.value() / sqrt(ldexp(1.0, n as i32)))
}

/// Conditional variance `σ² Σ_{j<⌊2ⁿt⌋} f(X_j)² 2^{−n}` of [`stochastic_integral`].
pub fn conditional_variance<W: WeightFunction + ?Sized>(
    path: &FbmPath,
    f: &W,
    sigma: f64,
    t: f64,
) -> Result<f64> {
    let n = path
        .grid()
        .dyadic_level()
        .ok_or(Error::InvalidGrid("needs a dyadic time grid"))?;
    let k = covered_steps(path, n, t)?;
    let x = path.forward();
    let mut acc = KahanSum::new();
    for v in &x[..k] {
        let fv = f.value(*v);
        acc.add(fv * fv);
    }
    Ok(sigma * sigma * ldexp(acc.value(), -(n as i32)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::GridSpec;
    use crate::hurst::HurstParam;
    use crate::weight::BuiltinWeight;
    use alloc::vec;

    fn tiny() -> FbmPath {
        let g = GridSpec::dyadic(1, 0.0, 1.0).unwrap();
        FbmPath::new(g, HurstParam::new(0.25).unwrap(), vec![0.0, 1.0, 2.0], 0).unwrap()
    }

    #[test]
    fn midpoint_by_hand() {
        let x = BuiltinWeight::from_id("x").unwrap();
        let s = midpoint_variation(&tiny(), &x, 1).unwrap();
        let expected = libm::pow(2.0, -0.5) * (0.5 + 1.5) * libm::pow(2.0, 0.25);
        assert!((s.last() - expected).abs() < 1e-12);
        assert!((s.last() - 1.681793).abs() < 1e-6);
        assert_eq!(s.values()[0], 0.0);
    }

    #[test]
    fn trapezoid_by_hand() {
        let s = trapezoidal_variation(&tiny(), &BuiltinWeight::Square, 1).unwrap();
        assert!((s.last() - 3.0 * libm::pow(2.0, -0.25)).abs() < 1e-12);
    }

    #[test]
    fn step_quantities_midpoint() {
        let q = step_quantities(&tiny(), &BuiltinWeight::Square);
        assert_eq!(q.len(), 2);
        assert_eq!(q[1].midpoint - 1.0, 0.5 * q[1].increment);
        assert_eq!(q[1].trapezoid_weight, 2.5);
    }

    #[test]
    fn series_lookup_is_right_continuous() {
        let s = unweighted_variation(&tiny(), 1).unwrap();
        assert_eq!(s.at(0.49).unwrap(), 0.0);
        assert_eq!(s.at(0.5).unwrap(), s.values()[1]);
        assert!(s.at(1.5).is_err());
        assert!(s.at(-0.1).is_err());
    }

    #[test]
    fn quadrature_of_constants() {
        let g = GridSpec::dyadic(3, 0.0, 1.0).unwrap();
        let vals: Vec<f64> = (0..9).map(|i| libm::sin(i as f64)).collect();
        let mut vals = vals;
        vals[0] = 0.0;
        let p = FbmPath::new(g, HurstParam::new(0.3).unwrap(), vals, 0).unwrap();
        let c = BuiltinWeight::Constant(2.5);
        assert_eq!(limit_quadrature(&p, &c, Integrand::F, 0.75).unwrap(), 2.5 * 0.75);
        let x = BuiltinWeight::from_id("x").unwrap();
        assert_eq!(limit_quadrature(&p, &x, Integrand::FPrime, 1.0).unwrap(), 1.0);
    }

    #[test]
    fn taylor_order_check() {
        struct Order1;
        impl WeightFunction for Order1 {
            fn order(&self) -> usize {
                1
            }
            fn eval(&self, _: usize, _: f64) -> f64 {
                0.0
            }
        }
        assert!(matches!(
            taylor_remainder_split(&tiny(), &Order1, 2, 2),
            Err(Error::InsufficientOrder { required: 2, available: 1 })
        ));
    }

    #[test]
    fn coarse_rejects_finer_level() {
        let one = BuiltinWeight::Constant(1.0);
        assert!(coarse_weight_variation(&tiny(), &one, 1, 2).is_err());
    }
}
