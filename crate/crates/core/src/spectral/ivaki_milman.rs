//! Integral inequality for smooth bodies with `j <= n - 2`.

use nalgebra::{Matrix2, SymmetricEigen};

use super::measure::positive_jets;
use crate::bodies::Body;
use crate::curvature::{binomial, curvature_cofactor, curvature_value};
use crate::error::{Error, Result};
use crate::sphere::SphereGrid;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IntegralInequality {
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
}

/// Tolerance added to the right-hand side.
pub const IM_TOLERANCE: f64 = 1e-8;

/// Quadrature of both sides of
/// `int ((c(p+1) + (j-2) h^{1-p} sigma_j) h^p |grad h|^2 + 2h sum_i lambda_i sigma_j^{ii} (grad_i h)^2)
///  <= int (h^{1-p} sigma_j - c) h^{p+1} (sigma_1 - (n-1) h)`,
/// with `grad_i` and `sigma_j^{ii}` taken in the principal frame of `A h`.
pub fn ivaki_milman_check(body: &Body, order: usize, p: f64, c: f64, grid: &SphereGrid) -> Result<IntegralInequality> {
    let n = grid.n();
    if order == 0 || order + 2 > n {
        return Err(Error::InvalidParameter(format!("order {order} must lie in 1..={}", n.saturating_sub(2))));
    }
    if !(c > 0.0) {
        return Err(Error::InvalidParameter(format!("c = {c} must be positive")));
    }
    let jets = positive_jets(body, grid)?;
    let jf = order as f64;
    let nm1 = (n - 1) as f64;
    let bin = binomial(n - 1, order);
    let mut lhs = 0.0;
    let mut rhs = 0.0;
    for (i, jet) in jets.iter().enumerate() {
        let h = jet.value;
        let sigma_j = bin * curvature_value(jet, order);
        let sigma_1 = nm1 * curvature_value(jet, 1);
        let cof = curvature_cofactor(jet, n, order)?;
        let grad2 = jet.grad.norm_squared();
        let eig = SymmetricEigen::new(Matrix2::new(jet.hess[(0, 0)], jet.hess[(0, 1)], jet.hess[(1, 0)], jet.hess[(1, 1)]));
        let mut principal = 0.0;
        for a in 0..n - 1 {
            let e = eig.eigenvectors.column(a);
            let gi = e[0] * jet.grad[0] + e[1] * jet.grad[1];
            let sii = e[0] * (cof[(0, 0)] * e[0] + cof[(0, 1)] * e[1]) + e[1] * (cof[(1, 0)] * e[0] + cof[(1, 1)] * e[1]);
            principal += eig.eigenvalues[a] * sii * gi * gi;
        }
        let hp = h.powf(p);
        let l = (c * (p + 1.0) + (jf - 2.0) * h.powf(1.0 - p) * sigma_j) * hp * grad2 + 2.0 * h * principal;
        let r = (h.powf(1.0 - p) * sigma_j - c) * hp * h * (sigma_1 - nm1 * h);
        lhs += grid.weights()[i] * l;
        rhs += grid.weights()[i] * r;
    }
    Ok(IntegralInequality { lhs, rhs, holds: lhs <= rhs + IM_TOLERANCE })
}
