//! Checks of the L_p Brunn-Minkowski inequality for intrinsic volumes.

use std::fmt::Write;

use serde::{Deserialize, Serialize};

use crate::bodies::{lp_combination, Body};
use crate::error::{Error, Result};
use crate::sphere::SphereGrid;
use crate::volumes::{intrinsic_volume, intrinsic_volume_2d, VolumeOptions};

/// `((1 - lambda) a^{p/j} + lambda b^{p/j})^{j/p}`, the geometric mean at `p = 0`.
pub fn p_mean_bound(a: f64, b: f64, p: f64, lambda: f64, j: usize) -> f64 {
    if p == 0.0 {
        return a.powf(1.0 - lambda) * b.powf(lambda);
    }
    let q = p / j as f64;
    ((1.0 - lambda) * a.powf(q) + lambda * b.powf(q)).powf(1.0 / q)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct InequalityVerdict {
    pub n: usize,
    pub j: usize,
    pub p: f64,
    pub lambda: f64,
    /// `V_j` of the combination.
    pub lhs: f64,
    /// `V_j(K)^{1-lambda} V_j(L)^lambda`.
    pub rhs_geo: f64,
    /// The p-mean bound.
    pub rhs_p: f64,
    /// `(rhs_geo - lhs) / rhs_geo`, positive on a violation.
    pub margin_geo: f64,
    /// `(rhs_p - lhs) / rhs_p`, positive on a violation.
    pub margin_p: f64,
}

impl InequalityVerdict {
    pub fn new(n: usize, j: usize, p: f64, lambda: f64, lhs: f64, vk: f64, vl: f64) -> Self {
        let rhs_geo = p_mean_bound(vk, vl, 0.0, lambda, j);
        let rhs_p = p_mean_bound(vk, vl, p, lambda, j);
        InequalityVerdict {
            n,
            j,
            p,
            lambda,
            lhs,
            rhs_geo,
            rhs_p,
            margin_geo: (rhs_geo - lhs) / rhs_geo,
            margin_p: (rhs_p - lhs) / rhs_p,
        }
    }

    /// Strict violation of the logarithmic inequality.
    pub fn strict_violation(&self) -> bool {
        self.margin_geo > 0.0
    }

    /// The L_p inequality `lhs >= rhs_p` up to a relative tolerance.
    pub fn holds(&self, tol: f64) -> bool {
        self.margin_p <= tol
    }

    pub const CSV_HEADER: &'static str = "n,j,p,lambda,lhs,rhs_geo,rhs_p,margin_geo,margin_p";

    pub fn csv_row(&self) -> String {
        let mut s = String::new();
        let _ = write!(
            s,
            "{},{},{},{},{:.15e},{:.15e},{:.15e},{:.6e},{:.6e}",
            self.n, self.j, self.p, self.lambda, self.lhs, self.rhs_geo, self.rhs_p, self.margin_geo, self.margin_p
        );
        s
    }
}

/// `V_j` of `(1 - lambda) K +_p lambda L` against both bounds.
pub fn check_lpbm(k: &Body, l: &Body, p: f64, lambda: f64, j: usize, options: &VolumeOptions) -> Result<InequalityVerdict> {
    let m = lp_combination(k, l, p, lambda)?;
    let lhs = intrinsic_volume(&m, j, options)?.value;
    let vk = intrinsic_volume(k, j, options)?.value;
    let vl = intrinsic_volume(l, j, options)?.value;
    Ok(InequalityVerdict::new(k.n(), j, p, lambda, lhs, vk, vl))
}

/// Outcome of the reverse inequality for `V_1` in the plane.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReverseVerdict {
    pub lhs: f64,
    pub rhs: f64,
    /// `(rhs - lhs) / rhs`; nonnegative when the reverse inequality holds.
    pub deficit: f64,
    pub homothetic: bool,
}

impl ReverseVerdict {
    pub fn holds(&self, tol: f64) -> bool {
        self.deficit >= -tol
    }
}

/// `V_1((1 - lambda) K +_p lambda L) <= ((1 - lambda) V_1(K)^p + lambda V_1(L)^p)^{1/p}`
/// for planar bodies.
pub fn reverse_j1_check(k: &Body, l: &Body, p: f64, lambda: f64) -> Result<ReverseVerdict> {
    if k.n() != 2 || l.n() != 2 {
        return Err(Error::UnsupportedDimension(if k.n() != 2 { k.n() } else { l.n() }));
    }
    let m = lp_combination(k, l, p, lambda)?;
    let lhs = intrinsic_volume_2d(&m, 1)?.0;
    let vk = intrinsic_volume_2d(k, 1)?.0;
    let vl = intrinsic_volume_2d(l, 1)?.0;
    let rhs = p_mean_bound(vk, vl, p, lambda, 1);
    let grid = SphereGrid::new(2, 256)?;
    let mut gap: f64 = 0.0;
    for u in grid.nodes() {
        gap = gap.max((k.support(u)? / vk - l.support(u)? / vl).abs());
    }
    Ok(ReverseVerdict { lhs, rhs, deficit: (rhs - lhs) / rhs, homothetic: gap < 1e-9 })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn power_mean_ordering() {
        for p in [0.1, 0.5, 0.9] {
            let g = p_mean_bound(3.0, 7.0, 0.0, 0.3, 2);
            assert!(g <= p_mean_bound(3.0, 7.0, p, 0.3, 2));
        }
        assert!((p_mean_bound(3.0, 3.0, 0.5, 0.3, 2) - 3.0).abs() < 1e-14);
    }

    #[test]
    fn reverse_inequality_square_disk() {
        let sq = Body::square(1.0).unwrap();
        let disk = Body::ball(2, 4.0 / std::f64::consts::PI).unwrap();
        let v = reverse_j1_check(&sq, &disk, 0.5, 0.5).unwrap();
        assert!(v.lhs < 4.0 && v.deficit > 1e-4 && !v.homothetic);
        let v = reverse_j1_check(&sq, &Body::square(2.0).unwrap(), 0.5, 0.3).unwrap();
        assert!(v.homothetic && v.deficit.abs() < 1e-9);
    }
}
