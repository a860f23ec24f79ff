//! Curvature functions of smooth support functions on a grid.

use std::fmt::Write;

use nalgebra::{DMatrix, Vector3};
use rayon::prelude::*;

use super::discriminant::{binomial, cofactor_operator, mixed_discriminant};
use crate::bodies::{default_plane_frame, Body};
use crate::error::{Error, Result};
use crate::sphere::{Jet, SmoothField, SphereGrid};

/// The `d x d` block of a jet's `A f` matrix.
pub fn tangent_matrix(j: &Jet) -> DMatrix<f64> {
    DMatrix::from_fn(j.d, j.d, |a, b| j.hess[(a, b)])
}

/// Principal radii (eigenvalues of `A h`), ascending.
pub fn principal_radii(j: &Jet) -> Vec<f64> {
    if j.d == 1 {
        return vec![j.hess[(0, 0)]];
    }
    let (a, b, c) = (j.hess[(0, 0)], j.hess[(0, 1)], j.hess[(1, 1)]);
    let m = 0.5 * (a + c);
    let r = (0.25 * (a - c) * (a - c) + b * b).sqrt();
    vec![m - r, m + r]
}

/// `s_j` at a node, closed form for tangent dimension at most 2.
pub fn curvature_value(j: &Jet, order: usize) -> f64 {
    let h = &j.hess;
    match (j.d, order) {
        (_, 0) => 1.0,
        (1, 1) => h[(0, 0)],
        (2, 1) => 0.5 * (h[(0, 0)] + h[(1, 1)]),
        (2, 2) => h[(0, 0)] * h[(1, 1)] - h[(0, 1)] * h[(1, 0)],
        _ => f64::NAN,
    }
}

/// Coefficient matrix of the linearization of `s_j` in `A h`:
/// `j C(n-1, j) Q(A h [j-1], I [n-1-j])`.
pub fn curvature_cofactor(j: &Jet, n: usize, order: usize) -> Result<DMatrix<f64>> {
    check_order(n, order)?;
    let d = n - 1;
    if d == 1 {
        return Ok(DMatrix::from_element(1, 1, 1.0));
    }
    let a = tangent_matrix(j);
    let mut args = vec![a; order - 1];
    args.extend(std::iter::repeat_n(DMatrix::identity(d, d), d - order));
    Ok(cofactor_operator(&args)? * (order as f64 * binomial(d, order)))
}

fn check_order(n: usize, order: usize) -> Result<()> {
    if order == 0 || order + 1 > n {
        return Err(Error::InvalidParameter(format!("curvature order {order} must lie in 1..={}", n - 1)));
    }
    Ok(())
}

/// Per-node curvature data.
#[derive(Clone, Debug)]
pub struct CurvatureField {
    pub grid: SphereGrid,
    pub order: usize,
    pub values: Vec<f64>,
    pub radii: Vec<Vec<f64>>,
}

impl CurvatureField {
    /// Tabular text: node coordinates, radii, `s_j`.
    pub fn to_csv(&self) -> String {
        let d = self.grid.tangent_dim();
        let mut out = String::from("x,y,z");
        for a in 0..d {
            let _ = write!(out, ",radius_{}", a + 1);
        }
        let _ = writeln!(out, ",s_{}", self.order);
        for (i, u) in self.grid.nodes().iter().enumerate() {
            let _ = write!(out, "{:.17e},{:.17e},{:.17e}", u.x, u.y, u.z);
            for r in &self.radii[i] {
                let _ = write!(out, ",{r:.17e}");
            }
            let _ = writeln!(out, ",{:.17e}", self.values[i]);
        }
        out
    }
}

fn jets(f: &(dyn SmoothField + Sync), grid: &SphereGrid) -> Result<Vec<Jet>> {
    if f.dimension() != grid.n() {
        return Err(Error::SizeMismatch(format!("body in R^{} on a grid in R^{}", f.dimension(), grid.n())));
    }
    let d = grid.tangent_dim();
    (0..grid.len()).into_par_iter().map(|i| f.jet_at(&grid.node(i), grid.frame(i), d)).collect()
}

/// `s_j = D_{n-1}(A h [j], I [n-1-j])` at every node.
pub fn curvature_function(body: &Body, order: usize, grid: &SphereGrid) -> Result<CurvatureField> {
    if !body.is_smooth() {
        return Err(Error::NotSmooth("curvature needs a smooth representation".into()));
    }
    curvature_of_field(body, order, grid)
}

/// As [`curvature_function`] for any smooth field.
pub fn curvature_of_field(f: &(dyn SmoothField + Sync), order: usize, grid: &SphereGrid) -> Result<CurvatureField> {
    check_order(grid.n(), order)?;
    let jets = jets(f, grid)?;
    let values = jets.iter().map(|j| curvature_value(j, order)).collect();
    let radii = jets.iter().map(principal_radii).collect();
    Ok(CurvatureField { grid: grid.clone(), order, values, radii })
}

/// `s(h_1, ..., h_{n-1}, .)` at every node.
pub fn mixed_curvature(bodies: &[&Body], grid: &SphereGrid) -> Result<Vec<f64>> {
    let n = grid.n();
    if bodies.len() + 1 != n {
        return Err(Error::SizeMismatch(format!("mixed curvature in R^{n} takes {} bodies", n - 1)));
    }
    for b in bodies {
        if !b.is_smooth() {
            return Err(Error::NotSmooth("mixed curvature needs smooth bodies".into()));
        }
    }
    let per_body = bodies.iter().map(|b| jets(*b, grid)).collect::<Result<Vec<_>>>()?;
    (0..grid.len())
        .map(|i| {
            let mats: Vec<DMatrix<f64>> = per_body.iter().map(|js| tangent_matrix(&js[i])).collect();
            mixed_discriminant(&mats)
        })
        .collect()
}

/// `s_j` at `u` of a body lying in the hyperplane `normal^perp` of R^3,
/// from the curvature of the base inside that plane at the geodesic
/// projection of `u`.
pub fn degenerate_curvature(base: &Body, normal: &Vector3<f64>, order: usize, u: &Vector3<f64>) -> Result<f64> {
    let n = 3;
    if base.n() != 2 {
        return Err(Error::InvalidBody("base must be planar".into()));
    }
    if order == 0 || order > n - 2 {
        return Err(Error::InvalidParameter(format!("order {order} must lie in 1..={}", n - 2)));
    }
    let axis = normal.normalize();
    let frame = default_plane_frame(&axis);
    let (x, y) = (frame[0].dot(u), frame[1].dot(u));
    let r = (x * x + y * y).sqrt();
    if r <= 1e-14 * u.norm() {
        return Err(Error::InvalidParameter("direction is parallel to the normal".into()));
    }
    let (c, s) = (x / r, y / r);
    let t = Vector3::new(c, s, 0.0);
    let (_, _, hess) = base.ambient(&t)?;
    let tangent = Vector3::new(-s, c, 0.0);
    let planar = tangent.dot(&(hess * tangent));
    if planar <= 0.0 {
        return Err(Error::NotSmooth("base curvature is not positive".into()));
    }
    // <u, u~> = r for unit u.
    let cos = r / u.norm();
    let g = 1.0 - order as f64 / (n - 1) as f64;
    Ok(g / cos.powi(order as i32) * planar.powi(order as i32))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ball_curvature_is_power_of_radius() {
        let grid = SphereGrid::new(3, 8).unwrap();
        let b = Body::ball(3, 1.7).unwrap();
        for j in 1..=2 {
            let f = curvature_function(&b, j, &grid).unwrap();
            for v in &f.values {
                assert!((v - 1.7f64.powi(j as i32)).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn closed_form_matches_discriminant() {
        let grid = SphereGrid::new(3, 6).unwrap();
        let e = Body::ellipsoid(3, &[vec![1.0, 0.3, 0.0], vec![0.3, 2.0, 0.2], vec![0.0, 0.2, 1.4]]).unwrap();
        let js = sample(&e, &grid);
        for j in &js {
            let a = tangent_matrix(j);
            let i = DMatrix::identity(2, 2);
            let s1 = mixed_discriminant(&[a.clone(), i]).unwrap();
            let s2 = mixed_discriminant(&[a.clone(), a]).unwrap();
            assert!((s1 - curvature_value(j, 1)).abs() < 1e-12);
            assert!((s2 - curvature_value(j, 2)).abs() < 1e-12);
            let r = principal_radii(j);
            assert!((r[0] * r[1] - s2).abs() < 1e-10);
        }
    }

    fn sample(b: &Body, grid: &SphereGrid) -> Vec<Jet> {
        jets(b, grid).unwrap()
    }

    #[test]
    fn cofactor_at_unit_ball_is_identity() {
        let j = Jet::constant(2, 1.0);
        let s = curvature_cofactor(&j, 3, 1).unwrap();
        assert!((s - DMatrix::identity(2, 2)).abs().max() < 1e-15);
    }

    #[test]
    fn nonsmooth_rejected() {
        let grid = SphereGrid::new(2, 8).unwrap();
        let sq = Body::square(1.0).unwrap();
        assert!(matches!(curvature_function(&sq, 1, &grid), Err(Error::NotSmooth(_))));
    }

    #[test]
    fn degenerate_disk() {
        let disk = Body::ball(2, 1.0).unwrap();
        let u = Vector3::new(0.3, 0.4, 0.866).normalize();
        let v = degenerate_curvature(&disk, &Vector3::z(), 1, &u).unwrap();
        let cos = (u.x * u.x + u.y * u.y).sqrt();
        assert!((v - 0.5 / cos).abs() < 1e-14);
        assert!(degenerate_curvature(&disk, &Vector3::z(), 1, &Vector3::z()).is_err());
    }
}
