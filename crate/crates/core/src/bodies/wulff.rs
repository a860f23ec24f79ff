//! Wulff shapes: the largest convex body whose support function stays below
//! a given positive function on a finite direction set.

use microlp::{ComparisonOp, OptimizationDirection, Problem};
use nalgebra::Vector3;
use rayon::prelude::*;

use super::polygon::{convex_hull, Polygon2D};
use crate::error::{Error, Result};
use crate::sphere::SphereGrid;

/// Relative tolerance for declaring a sampled function already convex.
pub const CONVEX_TOL: f64 = 1e-11;

/// Evaluable Wulff shape.
#[derive(Clone, Debug, PartialEq)]
pub enum WulffShape {
    Planar(Polygon2D),
    Spatial(Wulff3D),
}

impl WulffShape {
    pub fn support(&self, x: &Vector3<f64>) -> Result<f64> {
        match self {
            WulffShape::Planar(p) => Ok(p.support(x.x, x.y)),
            WulffShape::Spatial(w) => w.support(x),
        }
    }
}

#[derive(Clone, Debug)]
pub struct WulffResult {
    pub directions: Vec<Vector3<f64>>,
    pub raw: Vec<f64>,
    pub clipped: Vec<f64>,
    pub is_already_convex: bool,
    pub shape: WulffShape,
}

impl WulffResult {
    /// Largest `raw - clipped` over the direction set.
    pub fn max_gap(&self) -> f64 {
        self.raw.iter().zip(&self.clipped).map(|(f, h)| f - h).fold(0.0, f64::max)
    }
}

fn check_values(values: &[f64]) -> Result<()> {
    for &v in values {
        if !(v.is_finite() && v > 0.0) {
            return Err(Error::NonPositiveSupport(v));
        }
    }
    Ok(())
}

/// `count` equally spaced unit directions on S^1, starting at angle 0.
pub fn circle_directions(count: usize) -> Vec<Vector3<f64>> {
    let half = count / 2;
    let mut out: Vec<Vector3<f64>> = (0..half)
        .map(|k| {
            let t = 2.0 * std::f64::consts::PI * k as f64 / count as f64;
            Vector3::new(t.cos(), t.sin(), 0.0)
        })
        .collect();
    for k in 0..half {
        out.push(-out[k]);
    }
    out
}

/// Polygon `{x : <x, u_k> <= f_k}` for equally spaced `u_k`, via the convex
/// hull of the dual points `u_k / f_k`.
pub fn wulff_polygon(directions: &[Vector3<f64>], values: &[f64]) -> Result<Polygon2D> {
    check_values(values)?;
    let dual: Vec<[f64; 2]> = directions.iter().zip(values).map(|(u, f)| [u.x / f, u.y / f]).collect();
    // No collinearity slack: with near-vertical runs of dual points a positive
    // tolerance lets pops cascade past genuine hull points.
    let hull = convex_hull(&dual, 0.0);
    if hull.len() < 3 {
        return Err(Error::DegenerateWulff("fewer than three active constraints".into()));
    }
    // Each hull edge (q_a, q_b) is the polar of a vertex x with <x, q_a> = <x, q_b> = 1.
    let m = hull.len();
    let mut verts = Vec::with_capacity(m);
    for i in 0..m {
        let a = hull[i];
        let b = hull[(i + 1) % m];
        let det = a[0] * b[1] - a[1] * b[0];
        if det <= 0.0 {
            return Err(Error::DegenerateWulff("origin is not interior to the dual hull".into()));
        }
        verts.push([(b[1] - a[1]) / det, (a[0] - b[0]) / det]);
    }
    // Nearly collinear dual points give nearly coincident vertices.
    let size = verts.iter().map(|v| v[0].abs().max(v[1].abs())).fold(0.0, f64::max);
    let close = |p: [f64; 2], q: [f64; 2]| (p[0] - q[0]).abs().max((p[1] - q[1]).abs()) <= 1e-12 * size;
    let mut merged: Vec<[f64; 2]> = Vec::with_capacity(verts.len());
    for v in verts {
        if merged.last().is_none_or(|&w| !close(v, w)) {
            merged.push(v);
        }
    }
    while merged.len() > 1 && close(merged[0], merged[merged.len() - 1]) {
        merged.pop();
    }
    if merged.len() < 3 {
        return Err(Error::DegenerateWulff("fewer than three distinct vertices".into()));
    }
    Ok(Polygon2D::from_ccw_unchecked(merged))
}

/// Wulff shape of `count` samples `f(u_k)` on S^1.
pub fn wulff_shape_2d(values: &[f64]) -> Result<WulffResult> {
    let count = values.len();
    if count < 8 || count % 2 == 1 {
        return Err(Error::InvalidParameter(format!("need an even number >= 8 of samples, got {count}")));
    }
    let dirs = circle_directions(count);
    let half = count / 2;
    for k in 0..half {
        if (values[k] - values[k + half]).abs() > 1e-12 * values[k].abs().max(values[k + half].abs()) {
            return Err(Error::InvalidParameter("samples are not antipodally symmetric".into()));
        }
    }
    let poly = wulff_polygon(&dirs, values)?;
    let clipped: Vec<f64> = dirs.iter().map(|u| poly.support(u.x, u.y)).collect();
    Ok(finish(dirs, values.to_vec(), clipped, WulffShape::Planar(poly)))
}

fn finish(directions: Vec<Vector3<f64>>, raw: Vec<f64>, clipped: Vec<f64>, shape: WulffShape) -> WulffResult {
    let top = raw.iter().cloned().fold(0.0, f64::max);
    let is_already_convex = raw.iter().zip(&clipped).all(|(f, h)| f - h <= CONVEX_TOL * top);
    WulffResult { directions, raw, clipped, is_already_convex, shape }
}

/// Half-space intersection over a spatial direction set, queried by LP.
#[derive(Clone, Debug, PartialEq)]
pub struct Wulff3D {
    directions: Vec<Vector3<f64>>,
    values: Vec<f64>,
}

/// Grid nodes plus the six coordinate directions.
pub fn spatial_directions(grid: &SphereGrid) -> Vec<Vector3<f64>> {
    let mut dirs = grid.nodes().to_vec();
    for a in 0..3 {
        let mut e = Vector3::zeros();
        e[a] = 1.0;
        dirs.push(e);
        dirs.push(-e);
    }
    dirs
}

impl Wulff3D {
    pub fn new(directions: Vec<Vector3<f64>>, values: Vec<f64>) -> Result<Self> {
        check_values(&values)?;
        if directions.len() != values.len() {
            return Err(Error::SizeMismatch("directions and values".into()));
        }
        let w = Wulff3D { directions, values };
        // Boundedness along the axes is necessary; the LP reports the rest.
        for a in 0..3 {
            let mut e = Vector3::zeros();
            e[a] = 1.0;
            w.support(&e)?;
            w.support(&-e)?;
        }
        Ok(w)
    }

    pub fn directions(&self) -> &[Vector3<f64>] {
        &self.directions
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// `max <x, u>` over the half-space intersection, through the dual
    /// program `min sum c_k f_k` subject to `sum c_k u_k = u`, `c >= 0`.
    pub fn support(&self, u: &Vector3<f64>) -> Result<f64> {
        let mut lp = Problem::new(OptimizationDirection::Minimize);
        let weights: Vec<_> = self.values.iter().map(|&f| lp.add_var(f, (0.0, f64::INFINITY))).collect();
        for a in 0..3 {
            let row: Vec<_> = weights.iter().zip(&self.directions).map(|(&c, v)| (c, v[a])).collect();
            lp.add_constraint(row, ComparisonOp::Eq, u[a]);
        }
        match lp.solve() {
            Ok(outcome) => match outcome.solution() {
                Some(sol) => Ok(sol.objective()),
                None => Err(Error::LinearProgram("solver was interrupted".into())),
            },
            Err(microlp::Error::Infeasible) => Err(Error::UnboundedWulff),
            Err(e) => Err(Error::LinearProgram(format!("{e:?}"))),
        }
    }
}

/// Wulff shape of `f` sampled on the grid nodes and the coordinate axes.
pub fn wulff_shape_3d<F: Fn(&Vector3<f64>) -> f64>(f: F, grid: &SphereGrid) -> Result<WulffResult> {
    if grid.n() != 3 {
        return Err(Error::UnsupportedDimension(grid.n()));
    }
    if grid.resolution() < 8 {
        return Err(Error::ResolutionTooSmall { got: grid.resolution(), min: 8 });
    }
    let dirs = spatial_directions(grid);
    let raw: Vec<f64> = dirs.iter().map(&f).collect();
    let w = Wulff3D::new(dirs.clone(), raw.clone())?;
    let clipped = dirs.par_iter().map(|u| w.support(u)).collect::<Result<Vec<f64>>>()?;
    Ok(finish(dirs, raw, clipped, WulffShape::Spatial(w)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn thin_sum_keeps_every_constraint() {
        // Many dual points share x = 1/2 up to one ulp.
        let k = Polygon2D::new(&[[-2.0, 0.0], [-0.3, -0.015], [2.0, 0.0], [0.3, 0.015]]).unwrap();
        let l = Polygon2D::new(&[[-2.0, 0.0], [0.19, -0.23], [2.0, 0.0], [-0.19, 0.23]]).unwrap();
        let dirs = circle_directions(4096);
        let vals: Vec<f64> = dirs.iter().map(|u| 0.75 * k.support(u.x, u.y) + 0.25 * l.support(u.x, u.y)).collect();
        let poly = wulff_polygon(&dirs, &vals).unwrap();
        for (u, f) in dirs.iter().zip(&vals) {
            assert!(poly.support(u.x, u.y) <= f + 1e-14, "{u:?}");
        }
    }

    #[test]
    fn constant_gives_circumscribed_polygon() {
        let r = wulff_shape_2d(&vec![1.0; 64]).unwrap();
        assert!(r.is_already_convex);
        for h in &r.clipped {
            assert!((h - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn square_is_reproduced() {
        let dirs = circle_directions(128);
        let f: Vec<f64> = dirs.iter().map(|u| u.x.abs() + u.y.abs()).collect();
        let r = wulff_shape_2d(&f).unwrap();
        assert!(r.is_already_convex);
        if let WulffShape::Planar(p) = &r.shape {
            assert_eq!(p.vertices().len(), 4);
            assert!((p.area() - 4.0).abs() < 1e-13);
        } else {
            panic!("planar expected");
        }
    }

    #[test]
    fn non_support_function_is_clipped() {
        let dirs = circle_directions(512);
        let f: Vec<f64> = dirs
            .iter()
            .map(|u| {
                let t = u.y.atan2(u.x);
                1.0 + 0.5 * (2.0 * t).cos().powi(4)
            })
            .collect();
        let r = wulff_shape_2d(&f).unwrap();
        assert!(!r.is_already_convex);
        assert!(r.max_gap() > 1e-3);
        for (h, v) in r.clipped.iter().zip(&r.raw) {
            assert!(h <= &(v + 1e-13));
        }
    }

    #[test]
    fn rejects_nonpositive_samples() {
        let mut f = vec![1.0; 16];
        f[3] = 0.0;
        f[11] = 0.0;
        assert!(matches!(wulff_shape_2d(&f), Err(Error::NonPositiveSupport(_))));
    }
}
