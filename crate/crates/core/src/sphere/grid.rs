//! Antipodally symmetric quadrature grids on S^1 and S^2.

use nalgebra::Vector3;
use serde::{Deserialize, Serialize};

use super::gauss::gauss_legendre;
use crate::error::{Error, Result};

pub const MIN_RESOLUTION: usize = 4;

/// Text form of a grid: ambient dimension and resolution.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridDescriptor {
    pub n: usize,
    pub resolution: usize,
}

impl GridDescriptor {
    pub fn parse(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_text(&self) -> String {
        serde_json::to_string(self).expect("descriptor serializes")
    }

    pub fn build(&self) -> Result<SphereGrid> {
        SphereGrid::new(self.n, self.resolution)
    }
}

/// Quadrature nodes, weights and tangent frames on the unit sphere of R^n.
///
/// The node set is closed under `u -> -u`: node `i + len/2` is the exact
/// negation of node `i` and carries the same weight and frame. With
/// resolution `R` the rule on S^2 integrates polynomials of degree `2R + 1`
/// exactly; on S^1 it uses `2R` equally spaced angles.
#[derive(Clone, Debug)]
pub struct SphereGrid {
    n: usize,
    resolution: usize,
    nodes: Vec<Vector3<f64>>,
    weights: Vec<f64>,
    frames: Vec<[Vector3<f64>; 2]>,
}

impl SphereGrid {
    pub fn new(n: usize, resolution: usize) -> Result<Self> {
        if resolution < MIN_RESOLUTION {
            return Err(Error::ResolutionTooSmall { got: resolution, min: MIN_RESOLUTION });
        }
        match n {
            2 => Ok(Self::circle(resolution)),
            3 => Ok(Self::sphere(resolution)),
            _ => Err(Error::UnsupportedDimension(n)),
        }
    }

    fn circle(resolution: usize) -> Self {
        let count = 2 * resolution;
        let half = count / 2;
        let w = 2.0 * std::f64::consts::PI / count as f64;
        let mut nodes = Vec::with_capacity(count);
        let mut frames = Vec::with_capacity(count);
        for k in 0..half {
            let t = 2.0 * std::f64::consts::PI * k as f64 / count as f64;
            let u = Vector3::new(t.cos(), t.sin(), 0.0);
            nodes.push(u);
            frames.push([Vector3::new(-u.y, u.x, 0.0), Vector3::zeros()]);
        }
        Self::close_antipodally(2, resolution, nodes, vec![w; half], frames)
    }

    fn sphere(resolution: usize) -> Self {
        let rings = resolution + 1;
        let azimuths = 2 * resolution + 2;
        let (z, gw) = gauss_legendre(rings);
        let dphi = 2.0 * std::f64::consts::PI / azimuths as f64;
        let mut nodes = Vec::new();
        let mut weights = Vec::new();
        let mut frames = Vec::new();
        // Upper rings in full, the equator (odd ring count) on half the azimuths.
        for i in 0..rings {
            let zi = z[i];
            let on_equator = zi == 0.0;
            if zi < 0.0 {
                continue;
            }
            let st = (1.0 - zi * zi).sqrt();
            let count = if on_equator { azimuths / 2 } else { azimuths };
            for k in 0..count {
                let phi = dphi * k as f64;
                let u = Vector3::new(st * phi.cos(), st * phi.sin(), zi);
                nodes.push(u);
                weights.push(gw[i] * dphi);
                frames.push(tangent_frame(&u));
            }
        }
        Self::close_antipodally(3, resolution, nodes, weights, frames)
    }

    fn close_antipodally(
        n: usize,
        resolution: usize,
        mut nodes: Vec<Vector3<f64>>,
        mut weights: Vec<f64>,
        mut frames: Vec<[Vector3<f64>; 2]>,
    ) -> Self {
        let half = nodes.len();
        for i in 0..half {
            nodes.push(-nodes[i]);
            weights.push(weights[i]);
            frames.push(frames[i]);
        }
        SphereGrid { n, resolution, nodes, weights, frames }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Tangent dimension `n - 1`.
    pub fn tangent_dim(&self) -> usize {
        self.n - 1
    }

    pub fn resolution(&self) -> usize {
        self.resolution
    }

    pub fn descriptor(&self) -> GridDescriptor {
        GridDescriptor { n: self.n, resolution: self.resolution }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[Vector3<f64>] {
        &self.nodes
    }

    pub fn node(&self, i: usize) -> Vector3<f64> {
        self.nodes[i]
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn frame(&self, i: usize) -> &[Vector3<f64>; 2] {
        &self.frames[i]
    }

    /// Index of the antipodal node.
    pub fn antipode(&self, i: usize) -> usize {
        let half = self.nodes.len() / 2;
        if i < half {
            i + half
        } else {
            i - half
        }
    }

    /// Quadrature sum in node order.
    pub fn integrate(&self, values: &[f64]) -> f64 {
        debug_assert_eq!(values.len(), self.nodes.len());
        let mut s = 0.0;
        for (w, v) in self.weights.iter().zip(values) {
            s += w * v;
        }
        s
    }

    pub fn integrate_fn<F: FnMut(usize) -> f64>(&self, mut f: F) -> f64 {
        let mut s = 0.0;
        for (i, w) in self.weights.iter().enumerate() {
            s += w * f(i);
        }
        s
    }

    /// Total measure of the sphere as seen by the rule.
    pub fn area(&self) -> f64 {
        self.weights.iter().sum()
    }
}

/// Orthonormal tangent frame at `u` in R^3.
pub fn tangent_frame(u: &Vector3<f64>) -> [Vector3<f64>; 2] {
    let seed = if u.z.abs() <= 0.9 { Vector3::z() } else { Vector3::x() };
    let e1 = (seed - u * seed.dot(u)).normalize();
    let e2 = u.cross(&e1);
    [e1, e2]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_inputs() {
        assert_eq!(SphereGrid::new(3, 3).unwrap_err(), Error::ResolutionTooSmall { got: 3, min: 4 });
        assert_eq!(SphereGrid::new(5, 8).unwrap_err(), Error::UnsupportedDimension(5));
    }

    #[test]
    fn area_matches_sphere() {
        let g = SphereGrid::new(3, 8).unwrap();
        assert!((g.area() - 4.0 * std::f64::consts::PI).abs() < 1e-13);
        let c = SphereGrid::new(2, 8).unwrap();
        assert!((c.area() - 2.0 * std::f64::consts::PI).abs() < 1e-13);
    }

    #[test]
    fn antipodes_are_exact() {
        for r in [4, 5, 16] {
            let g = SphereGrid::new(3, r).unwrap();
            for i in 0..g.len() {
                let j = g.antipode(i);
                assert_eq!(g.node(j), -g.node(i));
                assert_eq!(g.weights()[j], g.weights()[i]);
            }
        }
    }

    #[test]
    fn frames_are_orthonormal() {
        let g = SphereGrid::new(3, 6).unwrap();
        for i in 0..g.len() {
            let u = g.node(i);
            let [a, b] = g.frame(i);
            assert!((u.norm() - 1.0).abs() < 1e-15);
            assert!(a.dot(&u).abs() < 1e-14 && b.dot(&u).abs() < 1e-14 && a.dot(b).abs() < 1e-14);
            assert!((a.norm() - 1.0).abs() < 1e-14 && (b.norm() - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn integrates_polynomials() {
        // Integral of z^2 over S^2 is 4 pi / 3, of x^2 y^2 z^2 is 4 pi / 105.
        let g = SphereGrid::new(3, 4).unwrap();
        let a = g.integrate_fn(|i| g.node(i).z.powi(2));
        assert!((a - 4.0 * std::f64::consts::PI / 3.0).abs() < 1e-13);
        let b = g.integrate_fn(|i| {
            let u = g.node(i);
            (u.x * u.y * u.z).powi(2)
        });
        assert!((b - 4.0 * std::f64::consts::PI / 105.0).abs() < 1e-14);
    }

    #[test]
    fn descriptor_round_trip() {
        let d = GridDescriptor { n: 3, resolution: 12 };
        assert_eq!(GridDescriptor::parse(&d.to_text()).unwrap(), d);
    }
}
