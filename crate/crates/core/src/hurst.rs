use crate::error::{Error, Result};

/// Hurst index of a fractional Brownian motion, strictly inside (0, 1).
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct HurstParam(f64);

impl HurstParam {
    pub fn new(h: f64) -> Result<Self> {
        if h > 0.0 && h < 1.0 {
            Ok(Self(h))
        } else {
            Err(Error::InvalidHurst(h))
        }
    }

    #[inline]
    pub fn value(self) -> f64 {
        self.0
    }

    /// True iff H < 1/2, the regime covered by the limit theorems.
    #[inline]
    pub fn subdiffusive(self) -> bool {
        self.0 < 0.5
    }

    /// Returns an error unless H < 1/2.
    pub fn require_subdiffusive(self) -> Result<Self> {
        if self.subdiffusive() {
            Ok(self)
        } else {
            Err(Error::HurstOutOfRange {
                h: self.0,
                range: "(0, 1/2)",
            })
        }
    }
}

impl TryFrom<f64> for HurstParam {
    type Error = Error;

    fn try_from(h: f64) -> Result<Self> {
        Self::new(h)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_closed_endpoints_and_nan() {
        assert!(HurstParam::new(0.0).is_err());
        assert!(HurstParam::new(1.0).is_err());
        assert!(HurstParam::new(f64::NAN).is_err());
        assert!(HurstParam::new(0.3).unwrap().subdiffusive());
        assert!(!HurstParam::new(0.5).unwrap().subdiffusive());
        assert!(HurstParam::new(0.6).unwrap().require_subdiffusive().is_err());
    }
}
