//! Support-function representations of origin-symmetric convex bodies.

use nalgebra::{Matrix3, Vector3};

use super::pmean::PMeanParams;
use super::polygon::Polygon2D;
use super::wulff::{circle_directions, spatial_directions, wulff_polygon, Wulff3D, WulffShape};
use crate::error::{Error, Result};
use crate::sphere::{tangent_frame, HarmonicExpansion, Jet, SmoothField, SphereGrid};

/// Smallest eigenvalue of `A(mean)` for the mean to be taken verbatim.
pub const CONVEXITY_THRESHOLD: f64 = 1e-8;

#[derive(Clone, Debug, PartialEq)]
pub enum Body {
    Ball { n: usize, radius: f64 },
    Ellipsoid(Ellipsoid),
    Polygon(Polygon2D),
    Harmonic(HarmonicExpansion),
    SegmentProduct(Box<SegmentProduct>),
    PMean(Box<PMeanBody>),
}

/// `h(u) = |A u|` for a symmetric positive definite `A`.
#[derive(Clone, Debug, PartialEq)]
pub struct Ellipsoid {
    n: usize,
    shape: Matrix3<f64>,
    quad: Matrix3<f64>,
}

/// `A + [-s theta, s theta]` with `A` a planar body in the plane `theta^perp`.
#[derive(Clone, Debug, PartialEq)]
pub struct SegmentProduct {
    pub base: Body,
    pub axis: Vector3<f64>,
    pub frame: [Vector3<f64>; 2],
    pub half_length: f64,
}

/// Resolution knobs for L_p combinations.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CombinationOptions {
    /// Grid resolution for the convexity check and the spatial Wulff step.
    pub resolution: usize,
    /// Number of directions for the planar Wulff step.
    pub directions: usize,
    /// Combine segment products with a common segment through their bases.
    pub product_rule: bool,
}

impl Default for CombinationOptions {
    fn default() -> Self {
        CombinationOptions { resolution: 16, directions: 4096, product_rule: true }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum CombinationMode {
    /// The pointwise mean is already a support function.
    Verbatim,
    Wulff(WulffShape),
}

#[derive(Clone, Debug, PartialEq)]
pub struct PMeanBody {
    pub params: PMeanParams,
    pub left: Body,
    pub right: Body,
    pub options: CombinationOptions,
    pub mode: CombinationMode,
}

fn positive(h: f64) -> Result<f64> {
    if h > 0.0 && h.is_finite() {
        Ok(h)
    } else {
        Err(Error::NonPositiveSupport(h))
    }
}

impl Ellipsoid {
    pub fn new(n: usize, rows: &[Vec<f64>]) -> Result<Self> {
        if !(n == 2 || n == 3) {
            return Err(Error::UnsupportedDimension(n));
        }
        if rows.len() != n || rows.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidBody(format!("ellipsoid matrix must be {n}x{n}")));
        }
        let mut a = Matrix3::zeros();
        for i in 0..n {
            for k in 0..n {
                if !rows[i][k].is_finite() {
                    return Err(Error::InvalidBody("non-finite matrix entry".into()));
                }
                a[(i, k)] = rows[i][k];
            }
        }
        let scale = a.abs().max();
        if (a - a.transpose()).abs().max() > 1e-12 * scale {
            return Err(Error::InvalidBody("ellipsoid matrix is not symmetric".into()));
        }
        let block = a.view((0, 0), (n, n)).into_owned();
        let min_eig = block.symmetric_eigenvalues().min();
        if min_eig <= 0.0 {
            return Err(Error::InvalidBody("ellipsoid matrix is not positive definite".into()));
        }
        Ok(Ellipsoid { n, shape: a, quad: a * a })
    }

    pub fn axes(n: usize, semi_axes: &[f64]) -> Result<Self> {
        let rows: Vec<Vec<f64>> = (0..n)
            .map(|i| (0..n).map(|k| if i == k { semi_axes[i] } else { 0.0 }).collect())
            .collect();
        Self::new(n, &rows)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn matrix(&self) -> Vec<Vec<f64>> {
        (0..self.n).map(|i| (0..self.n).map(|k| self.shape[(i, k)]).collect()).collect()
    }

    fn support(&self, x: &Vector3<f64>) -> f64 {
        (self.shape * x).norm()
    }

    fn ambient(&self, x: &Vector3<f64>) -> (f64, Vector3<f64>, Matrix3<f64>) {
        let qx = self.quad * x;
        let f = x.dot(&qx).sqrt();
        (f, qx / f, self.quad / f - qx * qx.transpose() / (f * f * f))
    }
}

impl SegmentProduct {
    fn project(&self, x: &Vector3<f64>) -> Vector3<f64> {
        Vector3::new(self.frame[0].dot(x), self.frame[1].dot(x), 0.0)
    }
}

impl Body {
    pub fn ball(n: usize, radius: f64) -> Result<Self> {
        if !(n == 2 || n == 3) {
            return Err(Error::UnsupportedDimension(n));
        }
        positive(radius)?;
        Ok(Body::Ball { n, radius })
    }

    pub fn ellipsoid(n: usize, rows: &[Vec<f64>]) -> Result<Self> {
        Ok(Body::Ellipsoid(Ellipsoid::new(n, rows)?))
    }

    pub fn ellipsoid_axes(semi_axes: &[f64]) -> Result<Self> {
        Ok(Body::Ellipsoid(Ellipsoid::axes(semi_axes.len(), semi_axes)?))
    }

    pub fn polygon(vertices: &[[f64; 2]]) -> Result<Self> {
        Ok(Body::Polygon(Polygon2D::new(vertices)?))
    }

    /// Square `[-a, a]^2`.
    pub fn square(a: f64) -> Result<Self> {
        Ok(Body::Polygon(Polygon2D::rectangle(a, a)?))
    }

    /// Cube `[-a, a]^3` as a square times a segment.
    pub fn cube(a: f64) -> Result<Self> {
        Body::segment_product(Body::square(a)?, a, Vector3::z(), None)
    }

    /// Even harmonic expansion taken as a support function. Positivity is
    /// checked on a grid fine enough for its degree.
    pub fn harmonic(e: HarmonicExpansion) -> Result<Self> {
        let res = (2 * e.max_degree()).max(8);
        let grid = SphereGrid::new(e.n(), res)?;
        for u in grid.nodes() {
            positive(e.value_unit(u))?;
        }
        Ok(Body::Harmonic(e))
    }

    /// `base + [-s axis, s axis]`, the base living in `axis^perp` with
    /// coordinates given by `frame` (a default orthonormal frame if absent).
    pub fn segment_product(
        base: Body,
        half_length: f64,
        axis: Vector3<f64>,
        frame: Option<[Vector3<f64>; 2]>,
    ) -> Result<Self> {
        if base.n() != 2 {
            return Err(Error::InvalidBody("segment product base must be planar".into()));
        }
        if !(half_length >= 0.0 && half_length.is_finite()) {
            return Err(Error::InvalidParameter(format!("segment half-length {half_length} must be >= 0")));
        }
        let norm = axis.norm();
        if !(norm > 0.0 && norm.is_finite()) {
            return Err(Error::InvalidParameter("segment axis must be nonzero".into()));
        }
        let axis = axis / norm;
        let frame = match frame {
            Some(f) => {
                let tol = 1e-12;
                let ok = (f[0].norm() - 1.0).abs() < tol
                    && (f[1].norm() - 1.0).abs() < tol
                    && f[0].dot(&f[1]).abs() < tol
                    && f[0].dot(&axis).abs() < tol
                    && f[1].dot(&axis).abs() < tol;
                if !ok {
                    return Err(Error::InvalidBody("base frame is not an orthonormal basis of axis^perp".into()));
                }
                f
            }
            None => default_plane_frame(&axis),
        };
        Ok(Body::SegmentProduct(Box::new(SegmentProduct { base, axis, frame, half_length })))
    }

    pub fn n(&self) -> usize {
        match self {
            Body::Ball { n, .. } => *n,
            Body::Ellipsoid(e) => e.n,
            Body::Polygon(_) => 2,
            Body::Harmonic(e) => e.n(),
            Body::SegmentProduct(_) => 3,
            Body::PMean(m) => m.left.n(),
        }
    }

    /// True when the support function has analytic second derivatives on
    /// the whole sphere.
    pub fn is_smooth(&self) -> bool {
        match self {
            Body::Ball { .. } | Body::Ellipsoid(_) | Body::Harmonic(_) => true,
            Body::Polygon(_) | Body::SegmentProduct(_) => false,
            Body::PMean(m) => m.mode == CombinationMode::Verbatim && m.left.is_smooth() && m.right.is_smooth(),
        }
    }

    /// Support function at any nonzero `x` (1-homogeneous).
    pub fn support(&self, x: &Vector3<f64>) -> Result<f64> {
        match self {
            Body::Ball { radius, n } => Ok(radius * if *n == 2 { x.xy().norm() } else { x.norm() }),
            Body::Ellipsoid(e) => Ok(e.support(x)),
            Body::Polygon(p) => Ok(p.support(x.x, x.y)),
            Body::Harmonic(e) => Ok(e.eval(x)),
            Body::SegmentProduct(sp) => {
                Ok(sp.base.support(&sp.project(x))? + sp.half_length * sp.axis.dot(x).abs())
            }
            Body::PMean(m) => match &m.mode {
                CombinationMode::Verbatim => {
                    let a = m.left.support(x)?;
                    let b = m.right.support(x)?;
                    Ok(m.params.mean(a, b))
                }
                CombinationMode::Wulff(w) => w.support(x),
            },
        }
    }

    /// Value, gradient and Hessian of the 1-homogeneous support function at
    /// a unit vector.
    pub fn ambient(&self, u: &Vector3<f64>) -> Result<(f64, Vector3<f64>, Matrix3<f64>)> {
        match self {
            Body::Ball { n, radius } => {
                let mut id = Matrix3::identity();
                if *n == 2 {
                    id[(2, 2)] = 0.0;
                }
                Ok((*radius, u * *radius, (id - u * u.transpose()) * *radius))
            }
            Body::Ellipsoid(e) => Ok(e.ambient(u)),
            Body::Harmonic(e) => Ok(e.ambient(u)),
            Body::Polygon(_) => Err(Error::NotDifferentiable("polygon".into())),
            Body::SegmentProduct(sp) => {
                let t = sp.axis.dot(u);
                if sp.half_length > 0.0 && t == 0.0 {
                    return Err(Error::NotDifferentiable("segment product on its equator".into()));
                }
                let y = sp.project(u);
                let r = y.norm();
                if r == 0.0 {
                    return Err(Error::NotDifferentiable("segment product at its axis".into()));
                }
                let (hb, gb, hessb) = sp.base.ambient(&(y / r))?;
                let p = nalgebra::Matrix2x3::from_rows(&[sp.frame[0].transpose(), sp.frame[1].transpose()]);
                let g2 = nalgebra::Vector2::new(gb.x, gb.y);
                let h2 = hessb.fixed_view::<2, 2>(0, 0).into_owned() / r;
                let value = r * hb + sp.half_length * t.abs();
                let grad = p.transpose() * g2 + sp.axis * (sp.half_length * t.signum());
                let hess = p.transpose() * h2 * p;
                Ok((value, grad, hess))
            }
            Body::PMean(m) => {
                if m.mode != CombinationMode::Verbatim {
                    return Err(Error::NotDifferentiable("convexified L_p combination".into()));
                }
                let (a, ga, ha) = m.left.ambient(u)?;
                let (b, gb, hb) = m.right.ambient(u)?;
                let d = m.params.derivatives(positive(a)?, positive(b)?);
                let hess = ha * d.da
                    + hb * d.db
                    + ga * ga.transpose() * d.daa
                    + (ga * gb.transpose() + gb * ga.transpose()) * d.dab
                    + gb * gb.transpose() * d.dbb;
                Ok((d.value, ga * d.da + gb * d.db, hess))
            }
        }
    }

    /// Dilate by `t > 0`.
    pub fn scaled(&self, t: f64) -> Result<Body> {
        positive(t)?;
        Ok(match self {
            Body::Ball { n, radius } => Body::Ball { n: *n, radius: radius * t },
            Body::Ellipsoid(e) => {
                let rows: Vec<Vec<f64>> = e.matrix().iter().map(|r| r.iter().map(|v| v * t).collect()).collect();
                Body::ellipsoid(e.n, &rows)?
            }
            Body::Polygon(p) => Body::Polygon(p.scaled(t)),
            Body::Harmonic(e) => Body::Harmonic(e.scaled(t)),
            Body::SegmentProduct(sp) => {
                Body::segment_product(sp.base.scaled(t)?, sp.half_length * t, sp.axis, Some(sp.frame))?
            }
            Body::PMean(m) => lp_combination_with(
                &m.left.scaled(t)?,
                &m.right.scaled(t)?,
                m.params.p,
                m.params.lambda,
                m.options,
            )?,
        })
    }

    /// Support values at the grid nodes.
    pub fn sample(&self, grid: &SphereGrid) -> Result<Vec<f64>> {
        grid.nodes().iter().map(|u| self.support(u)).collect()
    }
}

impl SmoothField for Body {
    fn dimension(&self) -> usize {
        self.n()
    }

    fn jet_at(&self, u: &Vector3<f64>, frame: &[Vector3<f64>; 2], d: usize) -> Result<Jet> {
        let (v, g, h) = self.ambient(u)?;
        Ok(Jet::from_ambient(d, frame, v, &g, &h))
    }
}

/// Orthonormal basis of `axis^perp`: the coordinate axes when `axis` is
/// `e3`, a Gram-Schmidt frame otherwise.
pub fn default_plane_frame(axis: &Vector3<f64>) -> [Vector3<f64>; 2] {
    if axis.x == 0.0 && axis.y == 0.0 {
        return [Vector3::x(), Vector3::y() * axis.z.signum()];
    }
    let [a, b] = tangent_frame(axis);
    [a, b]
}

/// Smallest eigenvalue of a symmetric 2x2 (or 1x1) tangent matrix.
pub fn min_eigenvalue(j: &Jet) -> f64 {
    if j.d == 1 {
        return j.hess[(0, 0)];
    }
    let (a, b, c) = (j.hess[(0, 0)], j.hess[(0, 1)], j.hess[(1, 1)]);
    let m = 0.5 * (a + c);
    let r = (0.25 * (a - c) * (a - c) + b * b).sqrt();
    m - r
}

/// `(1 - lambda) K +_p lambda L` with default resolution.
pub fn lp_combination(k: &Body, l: &Body, p: f64, lambda: f64) -> Result<Body> {
    lp_combination_with(k, l, p, lambda, CombinationOptions::default())
}

/// Wulff shape of the pointwise p-mean of the two support functions. The
/// Wulff step is skipped when both bodies are smooth and the mean is
/// verified to be a support function. Segment products sharing the same
/// segment are combined through their bases.
pub fn lp_combination_with(k: &Body, l: &Body, p: f64, lambda: f64, options: CombinationOptions) -> Result<Body> {
    let params = PMeanParams::new(p, lambda)?;
    if k.n() != l.n() {
        return Err(Error::SizeMismatch("bodies live in different dimensions".into()));
    }
    if k == l {
        return Ok(k.clone());
    }
    if options.product_rule {
        if let (Body::SegmentProduct(a), Body::SegmentProduct(b)) = (k, l) {
            if a.axis == b.axis && a.frame == b.frame && a.half_length == b.half_length {
                let base = lp_combination_with(&a.base, &b.base, p, lambda, options)?;
                return Body::segment_product(base, a.half_length, a.axis, Some(a.frame));
            }
        }
    }
    let n = k.n();
    let mean_at = |x: &Vector3<f64>| -> Result<f64> {
        let a = positive(k.support(x)?)?;
        let b = positive(l.support(x)?)?;
        Ok(params.mean(a, b))
    };
    let check_grid = SphereGrid::new(n, if n == 2 { 4 * options.resolution } else { options.resolution })?;
    for u in check_grid.nodes() {
        mean_at(u)?;
    }
    let mut verbatim = false;
    if k.is_smooth() && l.is_smooth() {
        verbatim = p == 1.0;
        if !verbatim {
            let candidate = PMeanBody {
                params,
                left: k.clone(),
                right: l.clone(),
                options,
                mode: CombinationMode::Verbatim,
            };
            let body = Body::PMean(Box::new(candidate));
            let d = check_grid.tangent_dim();
            let mut min_eig = f64::INFINITY;
            for i in 0..check_grid.len() {
                let jet = body.jet_at(&check_grid.node(i), check_grid.frame(i), d)?;
                min_eig = min_eig.min(min_eigenvalue(&jet));
            }
            verbatim = min_eig > CONVEXITY_THRESHOLD;
        }
    }
    let mode = if verbatim {
        CombinationMode::Verbatim
    } else if n == 2 {
        let dirs = circle_directions(options.directions);
        let values = dirs.iter().map(&mean_at).collect::<Result<Vec<f64>>>()?;
        CombinationMode::Wulff(WulffShape::Planar(wulff_polygon(&dirs, &values)?))
    } else {
        let grid = SphereGrid::new(3, options.resolution)?;
        let dirs = spatial_directions(&grid);
        let values = dirs.iter().map(&mean_at).collect::<Result<Vec<f64>>>()?;
        CombinationMode::Wulff(WulffShape::Spatial(Wulff3D::new(dirs, values)?))
    };
    Ok(Body::PMean(Box::new(PMeanBody { params, left: k.clone(), right: l.clone(), options, mode })))
}
