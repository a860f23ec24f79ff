//! Monte Carlo cross-check: intrinsic volumes as averages of projection
//! volumes over random subspaces.

use nalgebra::Vector3;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;

use super::constants::kubota_constant;
use crate::bodies::{circle_directions, wulff_polygon, Body};
use crate::error::{Error, Result};

pub const DEFAULT_SEED: u64 = 0x5eed_2024;
pub const MIN_SAMPLES: usize = 100;
const SHARD: usize = 128;
/// Quadrature points on the circle for smooth projections.
const SMOOTH_POINTS: usize = 256;
/// Sampled directions for the polygonal approximation of a projection.
const POLYGON_POINTS: usize = 4096;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MonteCarloEstimate {
    pub mean: f64,
    pub stderr: f64,
    pub samples: usize,
}

impl MonteCarloEstimate {
    /// `|x - mean| <= max(k * stderr, floor)`.
    pub fn agrees_with(&self, x: f64, k: f64, floor: f64) -> bool {
        (x - self.mean).abs() <= (k * self.stderr).max(floor)
    }
}

fn gaussian_vector(rng: &mut ChaCha8Rng, n: usize) -> Vector3<f64> {
    let mut v = Vector3::zeros();
    for i in 0..n {
        v[i] = StandardNormal.sample(rng);
    }
    v
}

/// Orthonormalized Gaussian frame of `j` vectors in R^n.
pub fn random_frame(rng: &mut ChaCha8Rng, n: usize, j: usize) -> Vec<Vector3<f64>> {
    let mut out: Vec<Vector3<f64>> = Vec::with_capacity(j);
    while out.len() < j {
        let mut v = gaussian_vector(rng, n);
        for e in &out {
            v -= e * e.dot(&v);
        }
        let norm = v.norm();
        if norm > 1e-8 {
            out.push(v / norm);
        }
    }
    out
}

/// `j`-volume of the projection of `body` onto the span of `frame`.
pub fn projection_volume(body: &Body, frame: &[Vector3<f64>]) -> Result<f64> {
    match frame.len() {
        1 => Ok(2.0 * body.support(&frame[0])?),
        2 => {
            let (e1, e2) = (frame[0], frame[1]);
            if body.is_smooth() {
                // (1/2) int (h^2 - h'^2) over the great circle.
                let step = 2.0 * std::f64::consts::PI / SMOOTH_POINTS as f64;
                let mut total = 0.0;
                for k in 0..SMOOTH_POINTS {
                    let (s, c) = (k as f64 * step).sin_cos();
                    let u = e1 * c + e2 * s;
                    let t = e2 * c - e1 * s;
                    let (h, g, _) = body.ambient(&u)?;
                    let dh = g.dot(&t);
                    total += h * h - dh * dh;
                }
                Ok(0.5 * total * step)
            } else {
                let dirs = circle_directions(POLYGON_POINTS);
                let values = dirs
                    .iter()
                    .map(|d| body.support(&(e1 * d.x + e2 * d.y)))
                    .collect::<Result<Vec<f64>>>()?;
                Ok(wulff_polygon(&dirs, &values)?.area())
            }
        }
        k => Err(Error::InvalidParameter(format!("projections of dimension {k} are not supported"))),
    }
}

/// Estimate of `V_j(body)` from `samples` random projections, reproducible
/// for a fixed seed regardless of thread count.
pub fn kubota_oracle(body: &Body, j: usize, samples: usize, seed: u64) -> Result<MonteCarloEstimate> {
    let n = body.n();
    if j == 0 || j >= n {
        return Err(Error::InvalidParameter(format!("oracle needs 1 <= j <= n-1, got j={j}")));
    }
    if samples < MIN_SAMPLES {
        return Err(Error::InvalidParameter(format!("need at least {MIN_SAMPLES} samples, got {samples}")));
    }
    let shards = samples.div_ceil(SHARD);
    let per_shard = (0..shards)
        .into_par_iter()
        .map(|s| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(s as u64);
            let count = SHARD.min(samples - s * SHARD);
            (0..count)
                .map(|_| projection_volume(body, &random_frame(&mut rng, n, j)))
                .collect::<Result<Vec<f64>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let c = kubota_constant(n, j);
    let values: Vec<f64> = per_shard.into_iter().flatten().map(|v| c * v).collect();
    let m = values.len() as f64;
    let mean = values.iter().sum::<f64>() / m;
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (m - 1.0);
    Ok(MonteCarloEstimate { mean, stderr: (var / m).sqrt(), samples })
}
