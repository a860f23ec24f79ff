use nalgebra::Vector3;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::newton::{newton_solve_from, SolveReport, SolverConfig};
use super::problem::{CMProblem, ProblemOptions};
use crate::bodies::{default_plane_frame, Body};
use crate::curvature::degenerate_curvature;
use crate::error::{Error, Result};
use crate::lpbm::c2_distance_to_ball;
use crate::sphere::{random_even_expansion, HarmonicExpansion, SphereGrid};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ProbeVerdict {
    /// Every run converged to the reference solution.
    Agree,
    /// Some converged run ended elsewhere.
    Disagree,
    /// Some run aborted.
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq)]
pub struct UniquenessReport {
    pub verdict: ProbeVerdict,
    pub tolerance: f64,
    /// Sup-norm distance to the reference solution, `None` for aborted runs.
    pub deviations: Vec<Option<f64>>,
    pub failures: Vec<Error>,
}

/// Agreement threshold between solutions from different starts.
pub const AGREEMENT_TOLERANCE: f64 = 1e-8;

fn random_start(problem: &CMProblem, spread: f64, seed: u64, stream: u64) -> Result<HarmonicExpansion> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    let z = random_even_expansion(&mut rng, problem.n, 2, problem.max_degree.min(6))?;
    let one = HarmonicExpansion::constant(problem.n, 1.0)?;
    let size = c2_distance_to_ball(&z.plus(&one)?, &problem.grid)?;
    z.scaled(spread / size).plus(&one)
}

fn sup_difference(problem: &CMProblem, a: &[f64], b: &[f64]) -> f64 {
    let mut worst: f64 = 0.0;
    for i in 0..problem.grid.len() {
        let mut s = 0.0;
        for (k, bj) in problem.basis_jets.iter().enumerate() {
            s += (a[k] - b[k]) * bj[i].value;
        }
        worst = worst.max(s.abs());
    }
    worst
}

/// Re-solves from `init_count` random even starts with `||h0 - 1||_C2 = spread`
/// and compares with `reference`.
pub fn uniqueness_probe(
    problem: &CMProblem,
    reference: &SolveReport,
    init_count: usize,
    spread: f64,
    seed: u64,
    config: &SolverConfig,
) -> Result<UniquenessReport> {
    if !reference.converged() {
        return Err(Error::InvalidParameter("the reference solve did not converge".into()));
    }
    if !(spread > 0.0) {
        return Err(Error::InvalidParameter(format!("spread {spread} must be positive")));
    }
    let runs: Vec<Result<SolveReport>> = (0..init_count as u64)
        .into_par_iter()
        .map(|k| {
            let start = random_start(problem, spread, seed, k)?;
            Ok(newton_solve_from(problem, Some(&start), config))
        })
        .collect();
    let mut deviations = Vec::with_capacity(runs.len());
    let mut failures = Vec::new();
    for run in runs {
        let run = run?;
        match run.failure {
            Some(e) => {
                deviations.push(None);
                failures.push(e);
            }
            None => deviations.push(Some(sup_difference(problem, &run.coefficients, &reference.coefficients))),
        }
    }
    let verdict = if !failures.is_empty() {
        ProbeVerdict::Inconclusive
    } else if deviations.iter().flatten().all(|&d| d <= AGREEMENT_TOLERANCE) {
        ProbeVerdict::Agree
    } else {
        ProbeVerdict::Disagree
    };
    Ok(UniquenessReport { verdict, tolerance: AGREEMENT_TOLERANCE, deviations, failures })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoundSummary {
    pub min_h: f64,
    pub max_h: f64,
    /// Largest tangential gradient of `h`.
    pub lipschitz: f64,
    pub log_data_sup: f64,
}

impl BoundSummary {
    /// For a symmetric body the gradient is bounded by the circumradius.
    pub fn lipschitz_within_bound(&self, tol: f64) -> bool {
        self.lipschitz <= self.max_h + tol
    }
}

/// Extrema and Lipschitz estimate of the solution on a grid of `resolution`.
pub fn bound_monitor(report: &SolveReport, data: &HarmonicExpansion, resolution: usize) -> Result<BoundSummary> {
    let grid = SphereGrid::new(report.n, resolution)?;
    let jets = report.solution.sample_jets(&grid);
    let mut s = BoundSummary { min_h: f64::INFINITY, max_h: f64::NEG_INFINITY, lipschitz: 0.0, log_data_sup: 0.0 };
    for j in &jets {
        s.min_h = s.min_h.min(j.value);
        s.max_h = s.max_h.max(j.value);
        s.lipschitz = s.lipschitz.max(j.grad_norm2().sqrt());
    }
    s.log_data_sup = data.sample_values(&grid).iter().map(|g| g.ln().abs()).fold(0.0, f64::max);
    Ok(s)
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepRow {
    pub epsilon: f64,
    pub log_data_sup: f64,
    pub min_h: f64,
    pub max_h: f64,
    pub ratio: f64,
    pub residual: f64,
    pub iterations: usize,
    pub converged: bool,
}

pub const SWEEP_HEADER: &str = "epsilon,sup_log_g,min_h,max_h,ratio,residual,iterations,converged";

impl SweepRow {
    pub fn csv_row(&self) -> String {
        format!(
            "{:.17e},{:.17e},{:.17e},{:.17e},{:.17e},{:.17e},{},{}",
            self.epsilon,
            self.log_data_sup,
            self.min_h,
            self.max_h,
            self.ratio,
            self.residual,
            self.iterations,
            self.converged
        )
    }
}

/// Solves with `g = 1 + eps * direction` for each `eps`.
pub fn bound_sweep(
    order: usize,
    p: f64,
    direction: &HarmonicExpansion,
    epsilons: &[f64],
    options: ProblemOptions,
    config: &SolverConfig,
) -> Result<Vec<SweepRow>> {
    epsilons
        .par_iter()
        .map(|&eps| {
            let data = HarmonicExpansion::constant(direction.n(), 1.0)?.plus(&direction.scaled(eps))?;
            let problem = CMProblem::new(order, p, data, options)?;
            let r = newton_solve_from(&problem, None, config);
            Ok(SweepRow {
                epsilon: eps,
                log_data_sup: r.log_data_sup,
                min_h: r.min_h,
                max_h: r.max_h,
                ratio: r.max_h / r.min_h,
                residual: r.residual(),
                iterations: r.iterations(),
                converged: r.converged(),
            })
        })
        .collect()
}

/// `h^(1-p) s_j` at `u` for the flat body spanned by a planar `base` placed
/// orthogonally to `normal` in R^3.
pub fn degenerate_equation_value(
    base: &Body,
    normal: &Vector3<f64>,
    order: usize,
    p: f64,
    u: &Vector3<f64>,
) -> Result<f64> {
    let s = degenerate_curvature(base, normal, order, u)?;
    let frame = default_plane_frame(&normal.normalize());
    let h = base.support(&Vector3::new(frame[0].dot(u), frame[1].dot(u), 0.0))?;
    Ok(h.powf(1.0 - p) * s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sphere::HarmonicTerm;

    fn opts() -> ProblemOptions {
        ProblemOptions { resolution: 12, max_degree: 8, ..Default::default() }
    }

    fn y20() -> HarmonicExpansion {
        HarmonicExpansion::new(3, &[HarmonicTerm { degree: 2, order: 0, value: 1.0 }]).unwrap()
    }

    fn solved(eps: f64) -> (CMProblem, SolveReport) {
        let g = HarmonicExpansion::constant(3, 1.0).unwrap().plus(&y20().scaled(eps)).unwrap();
        let problem = CMProblem::new(1, 0.5, g, opts()).unwrap();
        let r = newton_solve_from(&problem, None, &SolverConfig::default());
        (problem, r)
    }

    #[test]
    fn probe_agrees_near_the_ball() {
        let (problem, r) = solved(0.05);
        let u = uniqueness_probe(&problem, &r, 5, 0.1, 7, &SolverConfig::default()).unwrap();
        assert_eq!(u.verdict, ProbeVerdict::Agree, "{u:?}");
    }

    #[test]
    fn wide_spread_is_inconclusive() {
        let (problem, r) = solved(0.0);
        let u = uniqueness_probe(&problem, &r, 3, 3.0, 7, &SolverConfig::default()).unwrap();
        assert_eq!(u.verdict, ProbeVerdict::Inconclusive);
    }

    #[test]
    fn unit_ball_bounds() {
        let (_, r) = solved(0.0);
        let b = bound_monitor(&r, &HarmonicExpansion::constant(3, 1.0).unwrap(), 16).unwrap();
        assert!((b.min_h - 1.0).abs() < 1e-12 && (b.max_h - 1.0).abs() < 1e-12 && b.lipschitz < 1e-12);
    }

    #[test]
    fn perturbed_bounds() {
        let (problem, r) = solved(0.05);
        let b = bound_monitor(&r, &problem.data, 24).unwrap();
        assert!(b.min_h > 0.0 && b.lipschitz_within_bound(1e-10));
    }

    #[test]
    fn degenerate_disk() {
        let disk = Body::ball(2, 1.0).unwrap();
        let u = Vector3::new(0.3, -0.4, 0.7).normalize();
        let v = degenerate_equation_value(&disk, &Vector3::z(), 1, 0.0, &u).unwrap();
        assert!((v - 0.5).abs() < 1e-12);
    }
}
