//! Origin-symmetric convex polygons.

use crate::error::{Error, Result};

const SMALL: usize = 16;

/// Convex polygon with vertices in counter-clockwise order.
#[derive(Clone, Debug, PartialEq)]
pub struct Polygon2D {
    vertices: Vec<[f64; 2]>,
    // Outward normal angle of edge i (from vertex i to i+1), unwrapped to
    // increase from normal_angles[0].
    normal_angles: Vec<f64>,
}

fn cross(o: [f64; 2], a: [f64; 2], b: [f64; 2]) -> f64 {
    (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
}

/// Andrew's monotone chain; drops collinear points. Counter-clockwise.
pub fn convex_hull(points: &[[f64; 2]], tol: f64) -> Vec<[f64; 2]> {
    let mut pts: Vec<[f64; 2]> = points.to_vec();
    pts.sort_by(|a, b| a[0].total_cmp(&b[0]).then(a[1].total_cmp(&b[1])));
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let mut hull: Vec<[f64; 2]> = Vec::with_capacity(2 * pts.len());
    for &p in &pts {
        while hull.len() >= 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= tol {
            hull.pop();
        }
        hull.push(p);
    }
    let lower = hull.len() + 1;
    for &p in pts.iter().rev().skip(1) {
        while hull.len() >= lower && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= tol {
            hull.pop();
        }
        hull.push(p);
    }
    hull.pop();
    hull
}

impl Polygon2D {
    /// Validated constructor: points must be in convex position, the polygon
    /// must be origin-symmetric and contain the origin in its interior.
    pub fn new(points: &[[f64; 2]]) -> Result<Self> {
        if points.iter().any(|p| !p[0].is_finite() || !p[1].is_finite()) {
            return Err(Error::InvalidBody("non-finite polygon vertex".into()));
        }
        let scale = points.iter().map(|p| p[0].abs().max(p[1].abs())).fold(0.0, f64::max);
        if scale == 0.0 {
            return Err(Error::InvalidBody("degenerate polygon".into()));
        }
        let hull = convex_hull(points, 1e-14 * scale * scale);
        if hull.len() < 4 {
            return Err(Error::InvalidBody("degenerate polygon".into()));
        }
        let mut distinct = points.to_vec();
        distinct.sort_by(|a, b| a[0].total_cmp(&b[0]).then(a[1].total_cmp(&b[1])));
        distinct.dedup();
        if hull.len() != distinct.len() {
            return Err(Error::InvalidBody("polygon vertices are not in convex position".into()));
        }
        let tol = 1e-9 * scale;
        for v in &hull {
            let paired = hull.iter().any(|w| (w[0] + v[0]).abs() <= tol && (w[1] + v[1]).abs() <= tol);
            if !paired {
                return Err(Error::InvalidBody(format!("vertex ({}, {}) has no antipodal partner", v[0], v[1])));
            }
        }
        let poly = Self::from_ccw_unchecked(hull);
        if poly.area() <= 0.0 {
            return Err(Error::InvalidBody("degenerate polygon".into()));
        }
        Ok(poly)
    }

    /// Trusts the caller: vertices convex and counter-clockwise.
    pub(crate) fn from_ccw_unchecked(vertices: Vec<[f64; 2]>) -> Self {
        let m = vertices.len();
        let mut normal_angles = Vec::with_capacity(m);
        let mut prev = f64::NEG_INFINITY;
        for i in 0..m {
            let a = vertices[i];
            let b = vertices[(i + 1) % m];
            let mut t = (a[0] - b[0]).atan2(b[1] - a[1]);
            if prev.is_finite() {
                while t < prev {
                    t += 2.0 * std::f64::consts::PI;
                }
            }
            prev = t;
            normal_angles.push(t);
        }
        Polygon2D { vertices, normal_angles }
    }

    /// Axis-aligned rectangle `[-a, a] x [-b, b]`.
    pub fn rectangle(a: f64, b: f64) -> Result<Self> {
        Self::new(&[[a, b], [-a, b], [-a, -b], [a, -b]])
    }

    pub fn vertices(&self) -> &[[f64; 2]] {
        &self.vertices
    }

    fn dot(&self, i: usize, x: f64, y: f64) -> f64 {
        let v = self.vertices[i];
        v[0] * x + v[1] * y
    }

    /// `max_v <v, (x, y)>`, 1-homogeneous.
    pub fn support(&self, x: f64, y: f64) -> f64 {
        let m = self.vertices.len();
        if m <= SMALL {
            return (0..m).map(|i| self.dot(i, x, y)).fold(f64::NEG_INFINITY, f64::max);
        }
        let two_pi = 2.0 * std::f64::consts::PI;
        let a0 = self.normal_angles[0];
        let mut t = y.atan2(x);
        while t < a0 {
            t += two_pi;
        }
        while t >= a0 + two_pi {
            t -= two_pi;
        }
        // Largest i with normal_angles[i] <= t; vertex i + 1 is optimal.
        let i = self.normal_angles.partition_point(|&a| a <= t).saturating_sub(1);
        let k = (i + 1) % m;
        let mut best = f64::NEG_INFINITY;
        for off in [m - 1, 0, 1] {
            best = best.max(self.dot((k + off) % m, x, y));
        }
        best
    }

    pub fn area(&self) -> f64 {
        let m = self.vertices.len();
        let mut s = 0.0;
        for i in 0..m {
            let a = self.vertices[i];
            let b = self.vertices[(i + 1) % m];
            s += a[0] * b[1] - a[1] * b[0];
        }
        0.5 * s
    }

    pub fn perimeter(&self) -> f64 {
        let m = self.vertices.len();
        (0..m)
            .map(|i| {
                let a = self.vertices[i];
                let b = self.vertices[(i + 1) % m];
                (b[0] - a[0]).hypot(b[1] - a[1])
            })
            .sum()
    }

    pub fn scaled(&self, t: f64) -> Self {
        Self::from_ccw_unchecked(self.vertices.iter().map(|v| [v[0] * t, v[1] * t]).collect())
    }

    /// Side lengths if this is a rectangle with perpendicular edges.
    pub fn rectangle_sides(&self) -> Option<(f64, f64)> {
        if self.vertices.len() != 4 {
            return None;
        }
        let e: Vec<[f64; 2]> = (0..4)
            .map(|i| {
                let a = self.vertices[i];
                let b = self.vertices[(i + 1) % 4];
                [b[0] - a[0], b[1] - a[1]]
            })
            .collect();
        let len = |v: [f64; 2]| v[0].hypot(v[1]);
        let dot = e[0][0] * e[1][0] + e[0][1] * e[1][1];
        if dot.abs() > 1e-12 * len(e[0]) * len(e[1]) {
            return None;
        }
        Some((len(e[0]), len(e[1])))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn square_support_and_measures() {
        let sq = Polygon2D::rectangle(1.0, 1.0).unwrap();
        let c = std::f64::consts::FRAC_1_SQRT_2;
        assert!((sq.support(c, c) - 2f64.sqrt()).abs() < 1e-15);
        assert_eq!(sq.area(), 4.0);
        assert_eq!(sq.perimeter(), 8.0);
        assert_eq!(sq.rectangle_sides(), Some((2.0, 2.0)));
    }

    #[test]
    fn rejects_invalid_polygons() {
        assert!(Polygon2D::new(&[[1.0, 0.0], [0.0, 1.0], [-1.0, 0.0]]).is_err());
        assert!(Polygon2D::new(&[[1.0, 1.0], [-1.0, 1.0], [-1.0, -1.0], [1.0, -1.0], [0.1, 0.0]]).is_err());
        assert!(Polygon2D::new(&[[2.0, 1.0], [-1.0, 1.0], [-1.0, -1.0], [1.0, -1.0]]).is_err());
    }

    #[test]
    fn binary_search_agrees_with_scan() {
        let m = 40;
        let pts: Vec<[f64; 2]> = (0..m)
            .map(|k| {
                let t = 2.0 * std::f64::consts::PI * (k as f64 + 0.3) / m as f64;
                [2.0 * t.cos(), t.sin()]
            })
            .collect();
        let p = Polygon2D::new(&pts).unwrap();
        for k in 0..997 {
            let t = 0.0063 * k as f64;
            let (x, y) = (t.cos(), t.sin());
            let scan = p.vertices().iter().map(|v| v[0] * x + v[1] * y).fold(f64::NEG_INFINITY, f64::max);
            assert_eq!(p.support(x, y), scan);
        }
    }
}
