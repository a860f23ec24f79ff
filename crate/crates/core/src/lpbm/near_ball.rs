//! Random smooth bodies close to the unit ball.

use rand::Rng;

use crate::bodies::Body;
use crate::error::{Error, Result};
use crate::sphere::{random_even_expansion, sample_jets, HarmonicExpansion, SmoothField, SphereGrid};

/// `max(|h - 1|, |grad h|, |A h - I|)` over the grid, operator norm for the
/// matrix term.
pub fn c2_distance_to_ball(f: &dyn SmoothField, grid: &SphereGrid) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for j in sample_jets(f, grid)? {
        let dev = j.hess - crate::sphere::eye(j.d);
        let op = if j.d == 1 {
            dev[(0, 0)].abs()
        } else {
            let m = 0.5 * (dev[(0, 0)] + dev[(1, 1)]);
            let r = (0.25 * (dev[(0, 0)] - dev[(1, 1)]).powi(2) + dev[(0, 1)] * dev[(1, 0)]).sqrt();
            m.abs() + r
        };
        worst = worst.max((j.value - 1.0).abs()).max(j.grad.norm()).max(op);
    }
    Ok(worst)
}

/// `1 + z` with `z` a Gaussian combination of even harmonics of degrees
/// `2..=max_degree`, rescaled so that the grid C^2 distance to the ball is
/// exactly `distance`.
pub fn near_ball_body<R: Rng + ?Sized>(
    rng: &mut R,
    n: usize,
    max_degree: usize,
    distance: f64,
    grid: &SphereGrid,
) -> Result<Body> {
    if !(distance > 0.0 && distance < 0.5) {
        return Err(Error::InvalidParameter(format!("distance {distance} must lie in (0, 0.5)")));
    }
    let z = random_even_expansion(rng, n, 2, max_degree)?;
    let size = c2_distance_to_ball(&z.plus(&HarmonicExpansion::constant(n, 1.0)?)?, grid)?;
    Body::harmonic(z.scaled(distance / size).plus(&HarmonicExpansion::constant(n, 1.0)?)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn requested_distance() {
        let grid = SphereGrid::new(3, 16).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let b = near_ball_body(&mut rng, 3, 4, 0.05, &grid).unwrap();
        let d = c2_distance_to_ball(&b, &grid).unwrap();
        assert!((d - 0.05).abs() < 1e-12, "{d}");
    }
}
