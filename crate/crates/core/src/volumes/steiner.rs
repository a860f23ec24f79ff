//! Outer parallel volumes against the Steiner polynomial.

use super::constants::ball_volume;
use super::intrinsic::{intrinsic_volume, intrinsic_volume_of_field, VolumeOptions};
use crate::bodies::Body;
use crate::curvature::curvature_value;
use crate::error::{Error, Result};
use crate::sphere::{SmoothField, SphereGrid};

/// `V_n(K + rho B)` computed directly.
pub fn parallel_volume(body: &Body, rho: f64, grid: &SphereGrid) -> Result<f64> {
    let n = body.n();
    let pi = std::f64::consts::PI;
    match body {
        Body::Ball { radius, .. } => Ok(ball_volume(n) * (radius + rho).powi(n as i32)),
        Body::Polygon(p) => Ok(p.area() + rho * p.perimeter() + pi * rho * rho),
        Body::SegmentProduct(sp) => {
            let sides = match &sp.base {
                Body::Polygon(p) => p.rectangle_sides(),
                _ => None,
            };
            let (a, b) = sides.ok_or_else(|| Error::NoVolumeMethod("parallel volume of a non-box prism".into()))?;
            let c = 2.0 * sp.half_length;
            Ok(a * b * c + 2.0 * rho * (a * b + b * c + c * a) + pi * rho * rho * (a + b + c)
                + 4.0 / 3.0 * pi * rho.powi(3))
        }
        _ if body.is_smooth() => {
            if grid.n() != n {
                return Err(Error::SizeMismatch("grid dimension".into()));
            }
            let d = grid.tangent_dim();
            let mut total = 0.0;
            for i in 0..grid.len() {
                let mut jet = body.jet_at(&grid.node(i), grid.frame(i), d)?;
                jet.value += rho;
                jet.hess += crate::sphere::eye(d) * rho;
                total += grid.weights()[i] * jet.value * curvature_value(&jet, n - 1);
            }
            Ok(total / n as f64)
        }
        _ => Err(Error::NoVolumeMethod("no parallel-volume formula for this body".into())),
    }
}

/// `sum_j rho^{n-j} kappa_{n-j} V_j(K)` with `V_0 = 1`.
pub fn steiner_polynomial(volumes: &[f64], n: usize, rho: f64) -> f64 {
    let mut total = ball_volume(n) * rho.powi(n as i32);
    for j in 1..=n {
        total += rho.powi((n - j) as i32) * ball_volume(n - j) * volumes[j - 1];
    }
    total
}

/// One radius of a Steiner comparison.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SteinerRow {
    pub rho: f64,
    pub direct: f64,
    pub polynomial: f64,
    pub relative_gap: f64,
}

/// Parallel volume against the Steiner polynomial at each radius.
pub fn steiner_rows(body: &Body, grid: &SphereGrid, rhos: &[f64]) -> Result<Vec<SteinerRow>> {
    let n = body.n();
    let volumes = (1..=n)
        .map(|j| {
            if body.is_smooth() && n == 3 {
                intrinsic_volume_of_field(body, j, grid).map(|v| v.0)
            } else {
                let opts = VolumeOptions { resolution: grid.resolution(), ..VolumeOptions::default() };
                intrinsic_volume(body, j, &opts).map(|e| e.value)
            }
        })
        .collect::<Result<Vec<f64>>>()?;
    rhos.iter()
        .map(|&rho| {
            let direct = parallel_volume(body, rho, grid)?;
            let polynomial = steiner_polynomial(&volumes, n, rho);
            Ok(SteinerRow { rho, direct, polynomial, relative_gap: (direct - polynomial).abs() / direct.abs() })
        })
        .collect()
}

/// Largest relative gap between the parallel volume and the Steiner
/// polynomial over the given radii.
pub fn steiner_check(body: &Body, grid: &SphereGrid, rhos: &[f64]) -> Result<f64> {
    Ok(steiner_rows(body, grid, rhos)?.iter().map(|r| r.relative_gap).fold(0.0, f64::max))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cube_and_ball() {
        let grid = SphereGrid::new(3, 12).unwrap();
        let cube = Body::cube(1.0).unwrap();
        assert!(steiner_check(&cube, &grid, &[0.1, 0.5, 1.0, 2.0]).unwrap() < 1e-13);
        let pi = std::f64::consts::PI;
        let v = parallel_volume(&cube, 1.0, &grid).unwrap();
        assert!((v - (8.0 + 24.0 + 6.0 * pi + 4.0 * pi / 3.0)).abs() < 1e-12);
        let ball = Body::ball(3, 1.0).unwrap();
        assert!(steiner_check(&ball, &grid, &[1.0]).unwrap() < 1e-12);
    }
}
