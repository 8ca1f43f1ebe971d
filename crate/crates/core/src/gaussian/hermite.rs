use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Probabilists' Hermite polynomial `H_p(x)` by the three-term recurrence
/// `H_{p+1} = x H_p − p H_{p−1}`, `H_0 = 1`, `H_1 = x`.
pub fn hermite_eval(p: u32, x: f64) -> f64 {
    match p {
        0 => 1.0,
        1 => x,
        _ => {
            let (mut prev, mut cur) = (1.0, x);
            for k in 1..p {
                let next = x * cur - f64::from(k) * prev;
                prev = cur;
                cur = next;
            }
            cur
        }
    }
}

/// `E[N^p]` for a standard normal `N`: `(p−1)!!` for even `p`, zero otherwise.
pub fn gaussian_moment(p: u32) -> f64 {
    if p % 2 == 1 {
        return 0.0;
    }
    let mut acc = 1.0;
    let mut k = p.saturating_sub(1);
    while k > 1 {
        acc *= f64::from(k);
        k -= 2;
    }
    acc
}

fn factorial(k: u32) -> Result<u128> {
    (2..=u128::from(k)).try_fold(1u128, |acc, i| acc.checked_mul(i).ok_or(Error::Overflow("factorial")))
}

/// Coefficients of the Hermite expansion
/// `x^{2r−1} = Σ_{u=1}^{r} c_{u,r} H_{2(r−u)+1}(x)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HermiteCoeffs {
    r: u32,
    // c[u-1] = c_{u,r}
    exact: Vec<u128>,
}

/// Computes `c_{u,r} = (2r−1)! / (2^{u−1} (u−1)! (2(r−u)+1)!)` exactly.
///
/// Fails with [`Error::Overflow`] once `(2r−1)!` leaves the `u128` range
/// (r > 17).
pub fn hermite_coeffs(r: u32) -> Result<HermiteCoeffs> {
    if r == 0 {
        return Err(Error::InvalidArgument("r must be at least 1"));
    }
    let top = factorial(2 * r - 1)?;
    let mut exact = Vec::with_capacity(r as usize);
    for u in 1..=r {
        let pow2 = 1u128
            .checked_shl(u - 1)
            .ok_or(Error::Overflow("hermite coefficient"))?;
        let den = pow2
            .checked_mul(factorial(u - 1)?)
            .and_then(|d| factorial(2 * (r - u) + 1).ok().and_then(|f| d.checked_mul(f)))
            .ok_or(Error::Overflow("hermite coefficient"))?;
        debug_assert_eq!(top % den, 0);
        exact.push(top / den);
    }
    Ok(HermiteCoeffs { r, exact })
}

impl HermiteCoeffs {
    pub fn r(&self) -> u32 {
        self.r
    }

    /// `c_{u,r}` for `u` in `1..=r`.
    pub fn exact(&self, u: u32) -> u128 {
        self.exact[(u - 1) as usize]
    }

    pub fn get(&self, u: u32) -> f64 {
        self.exact(u) as f64
    }

    /// All coefficients as floats, `c[0] = c_{1,r}`.
    pub fn to_vec(&self) -> Vec<f64> {
        self.exact.iter().map(|&c| c as f64).collect()
    }

    /// Hermite degree `w = 2(r−u)+1` paired with `c_{u,r}`.
    pub fn degree(&self, u: u32) -> u32 {
        2 * (self.r - u) + 1
    }

    /// `Σ_u c_{u,r} H_{2(r−u)+1}(x)`; equals `x^{2r−1}`.
    pub fn reconstruct(&self, x: f64) -> f64 {
        (1..=self.r)
            .map(|u| self.get(u) * hermite_eval(self.degree(u), x))
            .sum()
    }

    /// Pairs `(w, c_{u,r}² · w!)`, the chaos weights of `E[(UV)^{2r−1}]`.
    pub fn chaos_weights(&self) -> Result<Vec<(u32, f64)>> {
        (1..=self.r)
            .map(|u| {
                let w = self.degree(u);
                let c = self.get(u);
                Ok((w, c * c * factorial(w)? as f64))
            })
            .collect()
    }

    /// `E[U^{2r−1} V^{2r−1}]` for standard Gaussians with correlation `rho`.
    pub fn bivariate_moment(&self, rho: f64) -> f64 {
        // chaos_weights only fails past r = 17, where exact coefficients do not exist.
        self.chaos_weights()
            .expect("weights exist whenever coefficients do")
            .iter()
            .map(|&(w, a)| a * libm::pow(rho, f64::from(w)))
            .sum()
    }
}

/// `E[(UV)^{2r−1}] = Σ_u c_{u,r}² w! ρ^w` with `w = 2(r−u)+1`, by Hermite
/// orthogonality. `rho` is expected in `[−1, 1]`.
pub fn bivariate_odd_moment(r: u32, rho: f64) -> Result<f64> {
    Ok(hermite_coeffs(r)?.bivariate_moment(rho))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hermite_examples() {
        assert_eq!(hermite_eval(0, 7.3), 1.0);
        assert_eq!(hermite_eval(2, 0.0), -1.0);
        assert_eq!(hermite_eval(3, 2.0), 2.0);
        // H_4 = x^4 - 6x^2 + 3
        assert_eq!(hermite_eval(4, 1.0), -2.0);
    }

    #[test]
    fn coefficient_examples() {
        assert_eq!(hermite_coeffs(1).unwrap().to_vec(), [1.0]);
        assert_eq!(hermite_coeffs(2).unwrap().to_vec(), [1.0, 3.0]);
        assert_eq!(hermite_coeffs(3).unwrap().to_vec(), [1.0, 10.0, 15.0]);
        assert!(hermite_coeffs(0).is_err());
        assert!(hermite_coeffs(17).is_ok());
        assert_eq!(hermite_coeffs(18), Err(Error::Overflow("factorial")));
    }

    #[test]
    fn moments() {
        assert_eq!(gaussian_moment(0), 1.0);
        assert_eq!(gaussian_moment(2), 1.0);
        assert_eq!(gaussian_moment(3), 0.0);
        assert_eq!(gaussian_moment(6), 15.0);
        assert_eq!(gaussian_moment(10), 945.0);
    }

    #[test]
    fn bivariate_examples() {
        for r in 1..=4 {
            assert_eq!(bivariate_odd_moment(r, 0.0).unwrap(), 0.0);
        }
        assert_eq!(bivariate_odd_moment(2, 1.0).unwrap(), 15.0);
        let rho = -0.292_893_2;
        let v = bivariate_odd_moment(2, rho).unwrap();
        assert!((v - (6.0 * rho * rho * rho + 9.0 * rho)).abs() < 1e-12);
        assert!((v + 2.786_79).abs() < 1e-5);
    }
}
