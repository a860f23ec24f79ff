//! Pointwise p-means of support functions and L_p combinations.

use crate::error::{Error, Result};

/// Weights and exponent of the mean `((1 - lambda) a^p + lambda b^p)^(1/p)`,
/// geometric for `p = 0`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PMeanParams {
    pub p: f64,
    pub lambda: f64,
}

/// Value and first and second partial derivatives of a 1-homogeneous mean.
#[derive(Clone, Copy, Debug)]
pub struct MeanDerivatives {
    pub value: f64,
    pub da: f64,
    pub db: f64,
    pub daa: f64,
    pub dab: f64,
    pub dbb: f64,
}

impl PMeanParams {
    pub fn new(p: f64, lambda: f64) -> Result<Self> {
        if !p.is_finite() || p > 1.0 {
            return Err(Error::InvalidParameter(format!("p = {p} must be finite and at most 1")));
        }
        if !(lambda > 0.0 && lambda < 1.0) {
            return Err(Error::InvalidParameter(format!("lambda = {lambda} must lie in (0, 1)")));
        }
        Ok(PMeanParams { p, lambda })
    }

    pub fn mean(&self, a: f64, b: f64) -> f64 {
        power_mean(a, b, self.p, self.lambda)
    }

    pub fn derivatives(&self, a: f64, b: f64) -> MeanDerivatives {
        let (p, l) = (self.p, self.lambda);
        let phi = self.mean(a, b);
        let da = (1.0 - l) * (a / phi).powf(p - 1.0);
        let db = l * (b / phi).powf(p - 1.0);
        MeanDerivatives {
            value: phi,
            da,
            db,
            daa: (p - 1.0) * (da / a) * (1.0 - a * da / phi),
            dab: (1.0 - p) * da * db / phi,
            dbb: (p - 1.0) * (db / b) * (1.0 - b * db / phi),
        }
    }
}

/// `((1 - lambda) a^p + lambda b^p)^(1/p)`; `a^(1 - lambda) b^lambda` at `p = 0`.
pub fn power_mean(a: f64, b: f64, p: f64, lambda: f64) -> f64 {
    if p == 0.0 {
        a.powf(1.0 - lambda) * b.powf(lambda)
    } else if p == 1.0 {
        (1.0 - lambda) * a + lambda * b
    } else {
        ((1.0 - lambda) * a.powf(p) + lambda * b.powf(p)).powf(1.0 / p)
    }
}
