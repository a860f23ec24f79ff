#![allow(dead_code)]

use nalgebra::{Matrix3, Rotation3, Vector3};
use proptest::prelude::*;

use lpbm::bodies::{convex_hull, Body};
use lpbm::sphere::{HarmonicExpansion, HarmonicTerm};

/// Symmetric positive definite matrix `R diag(a) R^T`.
pub fn spd(axes: [f64; 3], angles: [f64; 3]) -> Vec<Vec<f64>> {
    let r = Rotation3::from_euler_angles(angles[0], angles[1], angles[2]);
    let m = r.matrix() * Matrix3::from_diagonal(&Vector3::from(axes)) * r.matrix().transpose();
    (0..3).map(|i| (0..3).map(|k| m[(i, k)]).collect()).collect()
}

pub fn ellipsoid_strategy() -> impl Strategy<Value = Body> {
    (prop::array::uniform3(0.5f64..2.0), prop::array::uniform3(0.0f64..std::f64::consts::PI))
        .prop_map(|(a, t)| Body::ellipsoid(3, &spd(a, t)).unwrap())
}

/// Symmetric polygon from points in the upper half plane and their negatives.
pub fn polygon_strategy() -> impl Strategy<Value = Body> {
    prop::collection::vec((0.05f64..3.0, 0.3f64..2.0), 3..8).prop_map(|pts| {
        let mut v: Vec<[f64; 2]> = pts.iter().map(|&(t, r)| [r * t.cos(), r * t.sin()]).collect();
        let neg: Vec<[f64; 2]> = v.iter().map(|p| [-p[0], -p[1]]).collect();
        v.extend(neg);
        v.push([2.0, 0.0]);
        v.push([-2.0, 0.0]);
        Body::polygon(&convex_hull(&v, 1e-9)).unwrap()
    })
}

/// `1 + eps * sum c_k Y_k` over even degrees 2 and 4, with `|c_k| <= 1`.
pub fn near_ball_strategy(eps: f64) -> impl Strategy<Value = Body> {
    prop::collection::vec(-1.0f64..1.0, 14).prop_map(move |c| {
        let mut terms = vec![HarmonicTerm { degree: 0, order: 0, value: (4.0 * std::f64::consts::PI).sqrt() }];
        let mut k = 0;
        for l in [2usize, 4] {
            for m in -(l as i32)..=(l as i32) {
                if k < c.len() {
                    terms.push(HarmonicTerm { degree: l, order: m, value: eps * c[k] });
                }
                k += 1;
            }
        }
        Body::harmonic(HarmonicExpansion::new(3, &terms).unwrap()).unwrap()
    })
}

pub fn unit_vector() -> impl Strategy<Value = Vector3<f64>> {
    (0.0f64..std::f64::consts::TAU, -1.0f64..1.0).prop_map(|(phi, z)| {
        let r = (1.0 - z * z).sqrt();
        Vector3::new(r * phi.cos(), r * phi.sin(), z)
    })
}

pub fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(1e-300)
}
