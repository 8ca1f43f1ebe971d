//! Weight functions `f` with exact derivatives.

use libm::{cos, exp, sin};

/// A smooth weight with user-supplied derivatives up to [`order`](Self::order).
pub trait WeightFunction: Sync {
    /// Highest derivative order `eval` supports.
    fn order(&self) -> usize;

    /// The `k`-th derivative at `x`, for `k ≤ order()`.
    fn eval(&self, k: usize, x: f64) -> f64;

    fn value(&self, x: f64) -> f64 {
        self.eval(0, x)
    }
}

impl<W: WeightFunction + ?Sized> WeightFunction for &W {
    fn order(&self) -> usize {
        (**self).order()
    }

    fn eval(&self, k: usize, x: f64) -> f64 {
        (**self).eval(k, x)
    }
}

/// Built-in weights addressable by a registry id.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BuiltinWeight {
    /// `f ≡ c`.
    Constant(f64),
    /// `f(x) = a x + b`.
    Affine { slope: f64, intercept: f64 },
    /// `f(x) = x²`.
    Square,
    /// `f(x) = sin x`.
    Sin,
    /// `f(x) = e^{−x²}`.
    Gaussian,
    /// `f(x) = x² e^{−x²}`.
    SquareGaussian,
}

impl BuiltinWeight {
    pub const REGISTRY: [&'static str; 7] = ["zero", "one", "x", "x2", "sin", "exp-x2", "x2-exp-x2"];

    pub fn from_id(id: &str) -> Option<Self> {
        Some(match id {
            "zero" => Self::Constant(0.0),
            "one" => Self::Constant(1.0),
            "x" => Self::Affine {
                slope: 1.0,
                intercept: 0.0,
            },
            "x2" => Self::Square,
            "sin" => Self::Sin,
            "exp-x2" => Self::Gaussian,
            "x2-exp-x2" => Self::SquareGaussian,
            _ => return None,
        })
    }

    /// Registry id, if this weight is one of the registered ones.
    pub fn id(&self) -> Option<&'static str> {
        Self::REGISTRY
            .iter()
            .copied()
            .find(|id| Self::from_id(id).as_ref() == Some(self))
    }

    pub fn is_affine(&self) -> bool {
        matches!(self, Self::Constant(_) | Self::Affine { .. })
    }
}

/// `d^k/dx^k e^{−x²} = (−1)^k H_k(x) e^{−x²}` with physicists' Hermite `H_k`.
fn gaussian_derivative(k: usize, x: f64) -> f64 {
    let (mut prev, mut cur) = (1.0, 2.0 * x);
    let hk = match k {
        0 => 1.0,
        _ => {
            for j in 1..k {
                let next = 2.0 * x * cur - 2.0 * j as f64 * prev;
                prev = cur;
                cur = next;
            }
            cur
        }
    };
    let sign = if k.is_multiple_of(2) { 1.0 } else { -1.0 };
    sign * hk * exp(-x * x)
}

impl WeightFunction for BuiltinWeight {
    fn order(&self) -> usize {
        usize::MAX
    }

    fn eval(&self, k: usize, x: f64) -> f64 {
        match *self {
            Self::Constant(c) => {
                if k == 0 {
                    c
                } else {
                    0.0
                }
            }
            Self::Affine { slope, intercept } => match k {
                0 => slope * x + intercept,
                1 => slope,
                _ => 0.0,
            },
            Self::Square => match k {
                0 => x * x,
                1 => 2.0 * x,
                2 => 2.0,
                _ => 0.0,
            },
            Self::Sin => match k % 4 {
                0 => sin(x),
                1 => cos(x),
                2 => -sin(x),
                _ => -cos(x),
            },
            Self::Gaussian => gaussian_derivative(k, x),
            Self::SquareGaussian => {
                // Leibniz rule on x² · e^{−x²}
                let kf = k as f64;
                let mut v = x * x * gaussian_derivative(k, x);
                if k >= 1 {
                    v += 2.0 * kf * x * gaussian_derivative(k - 1, x);
                }
                if k >= 2 {
                    v += kf * (kf - 1.0) * gaussian_derivative(k - 2, x);
                }
                v
            }
        }
    }
}

/// `x ↦ f(−x)`; its `k`-th derivative is `(−1)^k f^{(k)}(−x)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Reflected<W>(pub W);

impl<W: WeightFunction> WeightFunction for Reflected<W> {
    fn order(&self) -> usize {
        self.0.order()
    }

    fn eval(&self, k: usize, x: f64) -> f64 {
        let v = self.0.eval(k, -x);
        if k.is_multiple_of(2) {
            v
        } else {
            -v
        }
    }
}

/// Worst disagreement found by [`check_derivatives`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivativeMismatch {
    pub order: usize,
    pub x: f64,
    pub supplied: f64,
    pub finite_difference: f64,
}

/// Compares each supplied derivative `f^{(k)}`, `1 ≤ k ≤ max_order`, with a
/// central difference of `f^{(k−1)}` at the given points. Accepts when
/// `|err| ≤ tol · (1 + |f^{(k)}(x)|)`.
pub fn check_derivatives<W: WeightFunction + ?Sized>(
    f: &W,
    max_order: usize,
    points: &[f64],
    tol: f64,
) -> Result<(), DerivativeMismatch> {
    const STEP: f64 = 1e-5;
    let max_order = max_order.min(f.order());
    for k in 1..=max_order {
        for &x in points {
            let fd = (f.eval(k - 1, x + STEP) - f.eval(k - 1, x - STEP)) / (2.0 * STEP);
            let supplied = f.eval(k, x);
            if (fd - supplied).abs() > tol * (1.0 + supplied.abs()) {
                return Err(DerivativeMismatch {
                    order: k,
                    x,
                    supplied,
                    finite_difference: fd,
                });
            }
        }
    }
    Ok(())
}
