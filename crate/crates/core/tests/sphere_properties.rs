mod common;

use proptest::prelude::*;
use rand::SeedableRng;

use lpbm::sphere::{laplacian_spectrum, random_even_expansion, sample_jets, SphereGrid};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn quadrature_integrates_even_harmonics(resolution in 4usize..10, seed in any::<u64>()) {
        let grid = SphereGrid::new(3, resolution).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let top = (2 * resolution).min(12);
        let f = random_even_expansion(&mut rng, 3, 0, top).unwrap();
        let integral = grid.integrate(&f.sample_values(&grid));
        // Only the constant term survives; Y_00 = 1 / sqrt(4 pi).
        let want = f.coefficient(0, 0) * (4.0 * std::f64::consts::PI).sqrt();
        prop_assert!((integral - want).abs() < 1e-10, "{integral} vs {want}");
    }

    #[test]
    fn even_fields_stay_even(resolution in 4usize..10, seed in any::<u64>()) {
        let grid = SphereGrid::new(3, resolution).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let f = random_even_expansion(&mut rng, 3, 0, 6).unwrap();
        let jets = sample_jets(&f, &grid).unwrap();
        for i in 0..grid.len() {
            let k = grid.antipode(i);
            prop_assert!((grid.node(i) + grid.node(k)).norm() < 1e-15);
            prop_assert!((jets[i].value - jets[k].value).abs() < 1e-12);
            prop_assert!((jets[i].hess - jets[k].hess).amax() < 1e-11);
            prop_assert!((jets[i].grad + jets[k].grad).amax() < 1e-11);
        }
    }
}

#[test]
fn laplacian_eigenvalues() {
    let grid = SphereGrid::new(3, 10).unwrap();
    let values = laplacian_spectrum(&grid, 4, false).unwrap();
    let mut want = Vec::new();
    for k in 0..=4usize {
        want.extend(std::iter::repeat_n((k * (k + 1)) as f64, 2 * k + 1));
    }
    assert_eq!(values.len(), want.len());
    for (v, w) in values.iter().zip(&want) {
        assert!((v - w).abs() < 1e-8, "{v} vs {w}");
    }
    let even = laplacian_spectrum(&grid, 4, true).unwrap();
    assert!((even[1] - 6.0).abs() < 1e-8);
}
