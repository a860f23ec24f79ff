mod common;

use common::*;
use nalgebra::DMatrix;
use proptest::prelude::*;

use lpbm::bodies::Body;
use lpbm::curvature::{
    curvature_function, mixed_curvature, mixed_discriminant, normalized_elementary, principal_radii,
};
use lpbm::sphere::SphereGrid;

fn symmetric(n: usize) -> impl Strategy<Value = DMatrix<f64>> {
    prop::collection::vec(-2.0f64..2.0, n * n).prop_map(move |v| {
        let m = DMatrix::from_vec(n, n, v);
        (&m + m.transpose()) * 0.5
    })
}

fn psd(n: usize) -> impl Strategy<Value = DMatrix<f64>> {
    prop::collection::vec(-2.0f64..2.0, n * n).prop_map(move |v| {
        let m = DMatrix::from_vec(n, n, v);
        &m * m.transpose()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn multilinear(a in symmetric(3), b in symmetric(3), c in symmetric(3), d in symmetric(3), al in -2.0f64..2.0, be in -2.0f64..2.0) {
        let mix = &a * al + &b * be;
        let lhs = mixed_discriminant(&[mix, c.clone(), d.clone()]).unwrap();
        let rhs = al * mixed_discriminant(&[a, c.clone(), d.clone()]).unwrap() + be * mixed_discriminant(&[b, c, d]).unwrap();
        prop_assert!((lhs - rhs).abs() < 1e-12 * (1.0 + lhs.abs()));
    }

    #[test]
    fn symmetric_in_arguments(a in symmetric(4), b in symmetric(4), c in symmetric(4), d in symmetric(4)) {
        let base = mixed_discriminant(&[a.clone(), b.clone(), c.clone(), d.clone()]).unwrap();
        for perm in [[1, 0, 2, 3], [3, 2, 1, 0], [2, 3, 0, 1], [0, 3, 1, 2]] {
            let args = [&a, &b, &c, &d];
            let p: Vec<DMatrix<f64>> = perm.iter().map(|&i| args[i].clone()).collect();
            prop_assert!((mixed_discriminant(&p).unwrap() - base).abs() < 1e-12 * (1.0 + base.abs()));
        }
    }

    #[test]
    fn nonnegative_on_psd(a in psd(3), b in psd(3), c in psd(3)) {
        prop_assert!(mixed_discriminant(&[a, b, c]).unwrap() >= -1e-12);
    }

    #[test]
    fn curvature_matches_elementary_symmetric(e in ellipsoid_strategy()) {
        let grid = SphereGrid::new(3, 6).unwrap();
        for j in 1..=2 {
            let f = curvature_function(&e, j, &grid).unwrap();
            for (v, r) in f.values.iter().zip(&f.radii) {
                prop_assert!((v - normalized_elementary(r, j)).abs() < 1e-8);
            }
        }
    }

    #[test]
    fn mixed_curvature_symmetric(k in ellipsoid_strategy(), l in near_ball_strategy(0.05)) {
        let grid = SphereGrid::new(3, 5).unwrap();
        let kl = mixed_curvature(&[&k, &l], &grid).unwrap();
        let lk = mixed_curvature(&[&l, &k], &grid).unwrap();
        for (x, y) in kl.iter().zip(&lk) {
            prop_assert!((x - y).abs() < 1e-12 * (1.0 + x.abs()));
        }
        let kk = mixed_curvature(&[&k, &k], &grid).unwrap();
        let s2 = curvature_function(&k, 2, &grid).unwrap();
        for (x, y) in kk.iter().zip(&s2.values) {
            prop_assert!((x - y).abs() < 1e-12 * (1.0 + x.abs()));
        }
    }
}

#[test]
fn radii_of_a_ball() {
    let grid = SphereGrid::new(3, 4).unwrap();
    let f = curvature_function(&Body::ball(3, 2.5).unwrap(), 1, &grid).unwrap();
    assert!(f.radii.iter().flatten().all(|r| (r - 2.5).abs() < 1e-13));
    let _ = principal_radii;
}
