//! Numerical check that L_p combinations of orthogonal products split
//! into the products of the L_p combinations.

use nalgebra::Vector3;
use rayon::prelude::*;

use crate::bodies::{
    circle_directions, lp_combination_with, power_mean, spatial_directions, Body, CombinationMode, CombinationOptions,
    PMeanParams, Wulff3D, WulffShape,
};
use crate::error::{Error, Result};
use crate::sphere::SphereGrid;

/// Largest gap over the grid nodes between the support functions of
/// `(1 - lambda)(A + B) +_p lambda (C + D)` and
/// `((1 - lambda) A +_p lambda C) + ((1 - lambda) B +_p lambda D)`,
/// where `A`, `C` are planar bodies in `e3^perp` and `B`, `D` are the
/// segments of half-lengths `b`, `d` along `e3`. The left side is a
/// spatial Wulff shape whose directions include those of the planar side.
pub fn cartesian_product_identity_check(
    a: &Body,
    c: &Body,
    b: f64,
    d: f64,
    p: f64,
    lambda: f64,
    grid: &SphereGrid,
) -> Result<f64> {
    if grid.n() != 3 {
        return Err(Error::UnsupportedDimension(grid.n()));
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidParameter(format!("p = {p} must lie in [0, 1]")));
    }
    let axis = Vector3::z();
    let ab = Body::segment_product(a.clone(), b, axis, None)?;
    let cd = Body::segment_product(c.clone(), d, axis, None)?;
    // Planar sample directions contain the grid azimuths.
    let azimuths = 2 * grid.resolution() + 2;
    let planar = CombinationOptions { directions: azimuths * 128, ..CombinationOptions::default() };
    let base = if a == c { a.clone() } else { lp_combination_with(a, c, p, lambda, planar)? };
    let segment = power_mean(b, d, p, lambda);
    let rhs = Body::segment_product(base.clone(), segment, axis, None)?;
    let params = PMeanParams::new(p, lambda)?;
    let lhs = if ab == cd {
        None
    } else {
        // Spatial Wulff shape of the pointwise mean, sampled on the grid, on
        // the grid azimuths and on the active normals of the planar side.
        let mut dirs = spatial_directions(grid);
        dirs.extend(circle_directions(4 * azimuths));
        dirs.extend(edge_normals(&base));
        let values =
            dirs.iter().map(|u| Ok(params.mean(ab.support(u)?, cd.support(u)?))).collect::<Result<Vec<f64>>>()?;
        Some(Wulff3D::new(dirs, values)?)
    };
    let lhs_support = |u: &Vector3<f64>| match &lhs {
        Some(w) => w.support(u),
        None => ab.support(u),
    };
    let gaps = grid
        .nodes()
        .par_iter()
        .map(|u| Ok((lhs_support(u)? - rhs.support(u)?).abs()))
        .collect::<Result<Vec<f64>>>()?;
    Ok(gaps.into_iter().fold(0.0, f64::max))
}

/// Outward edge normals of a planar polygonal body, embedded in e3^perp.
fn edge_normals(body: &Body) -> Vec<Vector3<f64>> {
    let poly = match body {
        Body::Polygon(p) => p,
        Body::PMean(m) => match &m.mode {
            CombinationMode::Wulff(WulffShape::Planar(p)) => p,
            _ => return Vec::new(),
        },
        _ => return Vec::new(),
    };
    let v = poly.vertices();
    (0..v.len())
        .map(|i| {
            let (a, b) = (v[i], v[(i + 1) % v.len()]);
            Vector3::new(b[1] - a[1], a[0] - b[0], 0.0).normalize()
        })
        .collect()
}
