//! Strict violations of the logarithmic inequality for intrinsic volumes,
//! built from a planar pair with equal mean width by adding long segments.

use nalgebra::Vector3;
use serde::{Deserialize, Serialize};

use super::verdict::{check_lpbm, p_mean_bound, InequalityVerdict};
use crate::bodies::{lp_combination, Body};
use crate::error::{Error, Result};
use crate::volumes::{intrinsic_volume_2d, segment_factor, VolumeOptions};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SearchOptions {
    /// Required relative margin of the violation.
    pub target_margin: f64,
    pub s_start: f64,
    pub s_cap: f64,
    pub bisection_steps: usize,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions { target_margin: 1e-4, s_start: 1.0, s_cap: 1e6, bisection_steps: 60 }
    }
}

/// Planar pairs with equal `V_1 = 4` that are not homothetic, in the order
/// they are tried.
pub fn base_pairs() -> Result<Vec<(&'static str, Body, Body)>> {
    let r = std::f64::consts::SQRT_2;
    Ok(vec![
        ("square-disk", Body::square(1.0)?, Body::ball(2, 4.0 / std::f64::consts::PI)?),
        ("square-diamond", Body::square(1.0)?, Body::polygon(&[[r, 0.0], [0.0, r], [-r, 0.0], [0.0, -r]])?),
    ])
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanRow {
    pub s: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub margin: f64,
}

#[derive(Clone, Debug)]
pub struct Counterexample {
    pub n: usize,
    pub j: usize,
    pub p: f64,
    pub lambda: f64,
    pub base: &'static str,
    /// Segment half-lengths, one per lift.
    pub half_lengths: Vec<f64>,
    /// Smallest `s` with a violation at the last lift.
    pub crossover: f64,
    pub verdict: InequalityVerdict,
    /// Margin against `s` at the last lift.
    pub scan: Vec<ScanRow>,
    /// The two bodies in R^3 (only built for `n = 3`).
    pub bodies: Option<(Body, Body)>,
}

/// Intrinsic volumes `V_0, ..., V_top` of a triple (K, L, combination).
#[derive(Clone, Debug)]
struct Triple {
    k: Vec<f64>,
    l: Vec<f64>,
    m: Vec<f64>,
}

impl Triple {
    /// Add a segment of half-length `s` in dimension `dim`.
    fn lift(&self, dim: usize, s: f64) -> Triple {
        let up = |v: &Vec<f64>| -> Vec<f64> {
            let mut w = v.clone();
            for k in 1..v.len().min(dim + 1) {
                w[k] = v[k] + s * segment_factor(dim, k) * v[k - 1];
            }
            w
        };
        Triple { k: up(&self.k), l: up(&self.l), m: up(&self.m) }
    }

    fn row(&self, j: usize, lambda: f64, s: f64) -> ScanRow {
        let rhs = p_mean_bound(self.k[j], self.l[j], 0.0, lambda, j);
        ScanRow { s, lhs: self.m[j], rhs, margin: (rhs - self.m[j]) / rhs }
    }
}

/// Doubling scan for a margin above the target, then bisection for the
/// crossover. Returns `(s, crossover)`.
fn search(t: &Triple, dim: usize, j: usize, lambda: f64, opts: &SearchOptions) -> Result<(f64, f64)> {
    let margin = |s: f64| t.lift(dim, s).row(j, lambda, s).margin;
    let mut s = opts.s_start;
    while margin(s) < opts.target_margin {
        s *= 2.0;
        if s > opts.s_cap {
            return Err(Error::SearchFailure(format!(
                "no margin >= {} for s <= {} (limit {:.3e})",
                opts.target_margin,
                opts.s_cap,
                margin(opts.s_cap)
            )));
        }
    }
    let crossover = if margin(0.0) > 0.0 {
        0.0
    } else {
        let (mut lo, mut hi) = (0.0, s);
        for _ in 0..opts.bisection_steps {
            let mid = 0.5 * (lo + hi);
            if margin(mid) > 0.0 {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        hi
    };
    Ok((s, crossover))
}

fn planar_volumes(b: &Body, top: usize) -> Result<Vec<f64>> {
    let mut v = vec![0.0; top + 1];
    v[0] = 1.0;
    for k in 1..=top.min(2) {
        v[k] = intrinsic_volume_2d(b, k)?.0;
    }
    Ok(v)
}

fn attempt(
    name: &'static str,
    k: &Body,
    l: &Body,
    n: usize,
    j: usize,
    p: f64,
    lambda: f64,
    opts: &SearchOptions,
) -> Result<Counterexample> {
    let m = lp_combination(k, l, p, lambda)?;
    let mut t = Triple { k: planar_volumes(k, n)?, l: planar_volumes(l, n)?, m: planar_volumes(&m, n)? };
    // The planar pair violates the inequality for V_1 in any dimension;
    // each lift raises both the dimension and the index by one.
    let start_dim = n + 1 - j;
    let base_margin = t.row(1, lambda, 0.0).margin;
    if base_margin < opts.target_margin {
        return Err(Error::SearchFailure(format!("planar margin {base_margin:.3e} is below the target")));
    }
    let mut half_lengths = Vec::new();
    let mut crossover = 0.0;
    let mut scan = vec![t.row(1, lambda, 0.0)];
    for level in 2..=j {
        let dim = start_dim + level - 1;
        let (s, cross) = search(&t, dim, level, lambda, opts)?;
        if level == j {
            scan = scan_rows(&t, dim, level, lambda, cross, s);
        }
        t = t.lift(dim, s);
        half_lengths.push(s);
        crossover = cross;
    }
    let mut verdict = InequalityVerdict::new(n, j, p, lambda, t.m[j], t.k[j], t.l[j]);
    let bodies = if n == 3 {
        let s = half_lengths.first().copied().unwrap_or(0.0);
        let kp = Body::segment_product(k.clone(), s, Vector3::z(), None)?;
        let lp = Body::segment_product(l.clone(), s, Vector3::z(), None)?;
        verdict = check_lpbm(&kp, &lp, p, lambda, j, &VolumeOptions::default())?;
        Some((kp, lp))
    } else {
        None
    };
    Ok(Counterexample { n, j, p, lambda, base: name, half_lengths, crossover, verdict, scan, bodies })
}

fn scan_rows(t: &Triple, dim: usize, j: usize, lambda: f64, crossover: f64, s: f64) -> Vec<ScanRow> {
    let lo = if crossover > 0.0 { crossover / 8.0 } else { s / 64.0 };
    let hi = s * 16.0;
    let count = 49;
    let (a, b) = (lo.ln(), hi.ln());
    (0..count)
        .map(|i| {
            let si = (a + (b - a) * i as f64 / (count - 1) as f64).exp();
            t.lift(dim, si).row(j, lambda, si)
        })
        .collect()
}

/// Bodies in R^n violating `V_j(M) < V_j(K)^{1-lambda} V_j(L)^lambda` with
/// the requested relative margin.
pub fn construct_counterexample(n: usize, j: usize, p: f64, lambda: f64, opts: &SearchOptions) -> Result<Counterexample> {
    if n < 2 || j == 0 || j >= n {
        return Err(Error::InvalidParameter(format!("need n >= 2 and 1 <= j <= n-1, got n={n}, j={j}")));
    }
    if !(0.0..1.0).contains(&p) {
        return Err(Error::InvalidParameter(format!("p = {p} must lie in [0, 1)")));
    }
    let mut last = None;
    for (name, k, l) in base_pairs()? {
        match attempt(name, &k, &l, n, j, p, lambda, opts) {
            Ok(c) => return Ok(c),
            Err(e @ Error::SearchFailure(_)) => last = Some(e),
            Err(e) => return Err(e),
        }
    }
    Err(last.unwrap_or_else(|| Error::SearchFailure("no base pair".into())))
}
