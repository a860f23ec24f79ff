mod common;

use common::*;
use proptest::prelude::*;

use lpbm::bodies::Body;
use lpbm::sphere::{HarmonicExpansion, HarmonicTerm, SphereGrid};
use lpbm::spectral::{assemble_operator, lambda_1e};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn operator_structure(body in near_ball_strategy(0.02)) {
        let grid = SphereGrid::new(3, 16).unwrap();
        let prob = assemble_operator(&body, 2, &grid, 8).unwrap();
        prop_assert!(prob.constant_residual < 1e-10);
        let spec = prob.even_spectrum().unwrap();
        prop_assert!(spec.values.iter().all(|v| v.is_finite() && *v >= -1e-8));
        prop_assert!(spec.values.windows(2).all(|w| w[0] <= w[1]));
        let (_, mass) = prob.deflated().unwrap();
        let gram = spec.vectors.transpose() * mass * &spec.vectors;
        let dev = (gram - nalgebra::DMatrix::identity(spec.values.len(), spec.values.len())).amax();
        prop_assert!(dev < 1e-8, "{dev}");
    }
}

#[test]
fn gap_tends_to_the_ball_value() {
    let grid = SphereGrid::new(3, 16).unwrap();
    let shape = |eps: f64| {
        let terms = [
            HarmonicTerm { degree: 0, order: 0, value: (4.0 * std::f64::consts::PI).sqrt() },
            HarmonicTerm { degree: 2, order: 1, value: eps },
            HarmonicTerm { degree: 4, order: -2, value: 0.5 * eps },
        ];
        Body::harmonic(HarmonicExpansion::new(3, &terms).unwrap()).unwrap()
    };
    let mut last = f64::INFINITY;
    for eps in [0.08, 0.04, 0.02, 0.01, 0.005] {
        let gap = (lambda_1e(&assemble_operator(&shape(eps), 2, &grid, 8).unwrap()).unwrap() - 3.0).abs();
        assert!(gap < last, "eps {eps}: {gap} after {last}");
        last = gap;
    }
    assert!(last < 0.02, "{last}");
}
