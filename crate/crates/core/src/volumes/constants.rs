//! Dimensional constants.

use crate::curvature::binomial;
use crate::error::{Error, Result};

/// Volume `kappa_k` of the unit ball in R^k.
pub fn ball_volume(k: usize) -> f64 {
    match k {
        0 => 1.0,
        1 => 2.0,
        _ => 2.0 * std::f64::consts::PI / k as f64 * ball_volume(k - 2),
    }
}

/// `d_{n,j} = C(n, j) / kappa_{n-j}`, so that `V_j(K) = d_{n,j} V(K[j], B[n-j])`.
pub fn mixed_volume_factor(n: usize, j: usize) -> f64 {
    binomial(n, j) / ball_volume(n - j)
}

/// Constants attached to the pair `(n, j)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DimensionalConstants {
    /// `kappa_{n-j}`.
    pub kappa_complement: f64,
    /// `d_{n,j}`.
    pub mixed_volume_factor: f64,
    /// `e_{n,j}`, the weight of `V_{j-1}` in the intrinsic volumes of a
    /// body plus an orthogonal segment.
    pub segment_factor: f64,
    /// `C_{n,j}` of the Aleksandrov-Fenchel bound
    /// `V_{j+1} <= C_{n,j} V_j^{(j+1)/j}`.
    pub af_constant: f64,
}

pub fn dimensional_constants(n: usize, j: usize) -> Result<DimensionalConstants> {
    if n < 2 || j == 0 || j >= n {
        return Err(Error::InvalidParameter(format!("need 1 <= j <= n-1, got n={n}, j={j}")));
    }
    Ok(DimensionalConstants {
        kappa_complement: ball_volume(n - j),
        mixed_volume_factor: mixed_volume_factor(n, j),
        segment_factor: segment_factor(n, j),
        af_constant: af_constant(n, j),
    })
}

/// `e_{n,j} = 2 j d_{n,j} / (n d_{n-1,j-1})`, defined for `1 <= j <= n`.
pub fn segment_factor(n: usize, j: usize) -> f64 {
    2.0 * j as f64 * mixed_volume_factor(n, j) / (n as f64 * mixed_volume_factor(n - 1, j - 1))
}

fn af_constant(n: usize, j: usize) -> f64 {
    let jf = j as f64;
    let e = (jf + 1.0) / jf;
    ball_volume(n).powf(-1.0 / jf) / ball_volume(n - j - 1) * ball_volume(n - j).powf(e) * binomial(n, j + 1)
        / binomial(n, j).powf(e)
}

/// `V_j` of the unit ball in R^n.
pub fn ball_intrinsic_volume(n: usize, j: usize) -> f64 {
    binomial(n, j) * ball_volume(n) / ball_volume(n - j)
}

/// Kubota constant `C(n, j) kappa_n / (kappa_j kappa_{n-j})`.
pub fn kubota_constant(n: usize, j: usize) -> f64 {
    binomial(n, j) * ball_volume(n) / (ball_volume(j) * ball_volume(n - j))
}

/// `V_{j+1} / (C_{n,j} V_j^{(j+1)/j})`, at most 1 for convex bodies.
pub fn af_ratio(n: usize, j: usize, vj: f64, vj1: f64) -> Result<f64> {
    let c = dimensional_constants(n, j)?;
    Ok(vj1 / (c.af_constant * vj.powf((j as f64 + 1.0) / j as f64)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn examples() {
        let c = dimensional_constants(3, 2).unwrap();
        assert!((c.mixed_volume_factor - 1.5).abs() < 1e-15);
        assert!((c.segment_factor - 2.0).abs() < 1e-15);
        let c = dimensional_constants(3, 1).unwrap();
        assert!((c.mixed_volume_factor - 3.0 / PI).abs() < 1e-15);
        assert!((ball_volume(3) - 4.0 * PI / 3.0).abs() < 1e-15);
        assert!((ball_volume(4) - PI * PI / 2.0).abs() < 1e-14);
        assert!(dimensional_constants(3, 3).is_err());
        assert!(dimensional_constants(3, 0).is_err());
    }

    #[test]
    fn balls_are_af_extremal() {
        for n in 2..=6 {
            for j in 1..n {
                let r = af_ratio(n, j, ball_intrinsic_volume(n, j), ball_intrinsic_volume(n, j + 1)).unwrap();
                assert!((r - 1.0).abs() < 1e-12, "n={n} j={j} ratio={r}");
            }
        }
    }

    #[test]
    fn segment_factor_for_first_volume_is_two() {
        for n in 2..=6 {
            assert!((segment_factor(n, 1) - 2.0).abs() < 1e-14);
            assert!((segment_factor(n, n) - 2.0).abs() < 1e-14);
        }
    }
}
