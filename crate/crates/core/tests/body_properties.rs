mod common;

use common::*;
use nalgebra::Vector3;
use proptest::prelude::*;

use lpbm::bodies::{lp_combination, wulff_shape_2d, wulff_shape_3d, Body, BodySpec};
use lpbm::sphere::SphereGrid;

fn check_inclusion(k: &Body, l: &Body, lambda: f64, nodes: &[Vector3<f64>]) -> Result<(), TestCaseError> {
    let ps = [-1.0, 0.0, 0.5, 1.0];
    let combos: Vec<Body> = ps.iter().map(|&p| lp_combination(k, l, p, lambda).unwrap()).collect();
    for u in nodes {
        let h: Vec<f64> = combos.iter().map(|c| c.support(u).unwrap()).collect();
        for w in h.windows(2) {
            prop_assert!(w[0] <= w[1] + 1e-9, "{h:?} at {u:?}");
        }
    }
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn combinations_increase_with_p_planar(k in polygon_strategy(), l in polygon_strategy(), lambda in 0.1f64..0.9) {
        let grid = SphereGrid::new(2, 32).unwrap();
        check_inclusion(&k, &l, lambda, grid.nodes())?;
    }

    #[test]
    fn combinations_increase_with_p_spatial(k in ellipsoid_strategy(), l in ellipsoid_strategy(), lambda in 0.1f64..0.9) {
        // The Wulff step samples the default resolution-16 grid; compare there.
        let grid = SphereGrid::new(3, 16).unwrap();
        let nodes: Vec<Vector3<f64>> = grid.nodes().iter().step_by(19).copied().collect();
        check_inclusion(&k, &l, lambda, &nodes)?;
    }

    #[test]
    fn combination_with_itself(k in ellipsoid_strategy(), lambda in 0.0f64..1.0, u in unit_vector()) {
        for p in [-1.0, 0.0, 0.5, 1.0] {
            let m = lp_combination(&k, &k, p, lambda).unwrap();
            prop_assert!(rel(m.support(&u).unwrap(), k.support(&u).unwrap()) < 1e-10);
        }
    }

    #[test]
    fn planar_wulff_shape_lies_below_samples(vals in prop::collection::vec(0.5f64..2.0, 32)) {
        let mut f = vals.clone();
        f.extend(vals);
        let w = wulff_shape_2d(&f).unwrap();
        for (u, fk) in w.directions.iter().zip(&f) {
            prop_assert!(w.shape.support(u).unwrap() <= fk * (1.0 + 1e-12));
        }
    }

    #[test]
    fn spatial_wulff_shape_lies_below_samples(a in 0.6f64..1.6, b in 0.6f64..1.6) {
        let grid = SphereGrid::new(3, 8).unwrap();
        // Not a support function: a sum of two ellipsoid norms squared, rooted.
        let f = |u: &Vector3<f64>| (a * u.x * u.x + u.y * u.y / b + 0.3 * u.z.powi(4) + 0.2).sqrt();
        let w = wulff_shape_3d(f, &grid).unwrap();
        for u in w.directions.iter().step_by(7) {
            prop_assert!(w.shape.support(u).unwrap() <= f(u) * (1.0 + 1e-9));
        }
    }

    #[test]
    fn supports_are_subadditive(
        e in ellipsoid_strategy(),
        poly in polygon_strategy(),
        near in near_ball_strategy(0.05),
        x in unit_vector(),
        y in unit_vector(),
        s in 0.1f64..3.0,
    ) {
        let prism = Body::segment_product(poly.clone(), s, Vector3::new(0.0, 1.0, 1.0), None).unwrap();
        let mean = lp_combination(&e, &near, 0.5, 0.5).unwrap();
        let flat = |v: &Vector3<f64>| Vector3::new(v.x, v.y, 0.0);
        for b in [&e, &prism, &near, &mean] {
            let lhs = b.support(&(x + s * y)).unwrap();
            let rhs = b.support(&x).unwrap() + b.support(&(s * y)).unwrap();
            prop_assert!(lhs <= rhs + 1e-12 * rhs.abs());
        }
        let (px, py) = (flat(&x), flat(&y));
        if px.norm() > 1e-6 && py.norm() > 1e-6 && (px + py).norm() > 1e-6 {
            prop_assert!(poly.support(&(px + py)).unwrap() <= poly.support(&px).unwrap() + poly.support(&py).unwrap() + 1e-12);
        }
    }

    #[test]
    fn body_files_round_trip(e in ellipsoid_strategy(), poly in polygon_strategy(), s in 0.0f64..2.0) {
        let prism = Body::segment_product(poly, s, Vector3::z(), None).unwrap();
        let mean = lp_combination(&e, &prism, 0.5, 0.3).unwrap();
        for b in [e, prism, mean] {
            let text = BodySpec::from_body(&b).to_text();
            let back = Body::from_json(&text).unwrap();
            prop_assert_eq!(BodySpec::from_body(&back).to_text(), text);
        }
    }
}
