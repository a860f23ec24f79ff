use std::fmt::Write as _;

use nalgebra::{DMatrix, DVector};

use super::problem::CMProblem;
use crate::curvature::{binomial, curvature_cofactor, curvature_value, principal_radii};
use crate::error::{Error, Result};
use crate::linalg::condition_number;
use crate::sphere::{HarmonicExpansion, Jet, SphereGrid};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SolverConfig {
    /// Stop once the sup-norm residual on the grid drops below this.
    pub tolerance: f64,
    pub max_iterations: usize,
    pub max_halvings: usize,
    /// Above this condition number the Newton matrix is replaced by the
    /// linearization at `h = 1`.
    pub singular_threshold: f64,
    /// Re-evaluate the residual on a grid of twice the resolution.
    pub certify: bool,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig { tolerance: 1e-10, max_iterations: 40, max_halvings: 8, singular_threshold: 1e10, certify: true }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SolveReport {
    pub n: usize,
    pub order: usize,
    pub p: f64,
    /// Sup-norm residual on the solve grid, starting with the initial guess.
    pub residuals: Vec<f64>,
    pub step_lengths: Vec<f64>,
    /// Whether each step used the `h = 1` linearization.
    pub reference_steps: Vec<bool>,
    /// Smallest principal radius over the grid at every iterate.
    pub convexity: Vec<f64>,
    pub coefficients: Vec<f64>,
    pub solution: HarmonicExpansion,
    pub min_h: f64,
    pub max_h: f64,
    pub log_data_sup: f64,
    pub holder_distance: f64,
    /// Residual on the finer certification grid.
    pub certified_residual: Option<f64>,
    pub failure: Option<Error>,
}

pub const REPORT_SCHEMA: &str = "cm-solve-report/1";
pub const HISTORY_HEADER: &str = "iteration,residual,step,min_radius,reference_operator";

impl SolveReport {
    pub fn converged(&self) -> bool {
        self.failure.is_none()
    }

    pub fn iterations(&self) -> usize {
        self.residuals.len().saturating_sub(1)
    }

    pub fn residual(&self) -> f64 {
        *self.residuals.last().unwrap_or(&f64::INFINITY)
    }

    pub fn into_result(self) -> Result<SolveReport> {
        match &self.failure {
            Some(e) => Err(e.clone()),
            None => Ok(self),
        }
    }

    /// `ln r_(k+1) / ln r_k` over consecutive residuals below 1 whose
    /// successor stays above `floor`.
    pub fn log_residual_ratios(&self, floor: f64) -> Vec<f64> {
        self.residuals
            .windows(2)
            .filter(|w| w[0] < 1.0 && w[1] < 1.0 && w[0] > 0.0 && w[1] > floor)
            .map(|w| w[1].ln() / w[0].ln())
            .collect()
    }

    pub fn history_csv(&self) -> String {
        let mut out = format!("{HISTORY_HEADER}\n");
        for (k, r) in self.residuals.iter().enumerate() {
            let step = if k == 0 { 0.0 } else { self.step_lengths[k - 1] };
            let reference = k > 0 && self.reference_steps[k - 1];
            let _ = writeln!(out, "{k},{r:.17e},{step:.17e},{:.17e},{reference}", self.convexity[k]);
        }
        out
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "schema: {REPORT_SCHEMA}");
        let _ = writeln!(out, "n: {}", self.n);
        let _ = writeln!(out, "j: {}", self.order);
        let _ = writeln!(out, "p: {}", self.p);
        let status = match &self.failure {
            None => "converged".to_string(),
            Some(e) => format!("failed ({e})"),
        };
        let _ = writeln!(out, "status: {status}");
        let _ = writeln!(out, "iterations: {}", self.iterations());
        let _ = writeln!(out, "residual: {:.6e}", self.residual());
        if let Some(c) = self.certified_residual {
            let _ = writeln!(out, "certified_residual: {c:.6e}");
        }
        let _ = writeln!(out, "min_h: {:.15}", self.min_h);
        let _ = writeln!(out, "max_h: {:.15}", self.max_h);
        let _ = writeln!(out, "sup_log_g: {:.15}", self.log_data_sup);
        let _ = writeln!(out, "holder_distance: {:.15}", self.holder_distance);
        let _ = writeln!(out, "min_principal_radius: {:.15}", self.convexity.last().copied().unwrap_or(f64::NAN));
        let ratios: Vec<String> = self.log_residual_ratios(0.0).iter().map(|r| format!("{r:.4}")).collect();
        let _ = writeln!(out, "log_residual_ratios: [{}]", ratios.join(", "));
        out
    }
}

struct State {
    jets: Vec<Jet>,
    residual: Vec<f64>,
    sup: f64,
    min_radius: f64,
}

fn equation_value(jet: &Jet, order: usize, p: f64) -> f64 {
    jet.value.powf(1.0 - p) * curvature_value(jet, order)
}

fn evaluate_jets(jets: Vec<Jet>, data: &[f64], order: usize, p: f64) -> State {
    let mut sup: f64 = 0.0;
    let mut min_radius = f64::INFINITY;
    let mut residual = Vec::with_capacity(jets.len());
    for (jet, g) in jets.iter().zip(data) {
        min_radius = min_radius.min(principal_radii(jet)[0]);
        let r = if jet.value > 0.0 { equation_value(jet, order, p) - g } else { f64::INFINITY };
        sup = sup.max(r.abs());
        residual.push(r);
    }
    State { jets, residual, sup, min_radius }
}

fn evaluate(problem: &CMProblem, coefficients: &[f64]) -> State {
    let d = problem.grid.tangent_dim();
    let mut jets = vec![Jet::zero(d); problem.grid.len()];
    for (c, bj) in coefficients.iter().zip(&problem.basis_jets) {
        if *c != 0.0 {
            for (jet, b) in jets.iter_mut().zip(bj) {
                jet.axpy(*c, b);
            }
        }
    }
    evaluate_jets(jets, &problem.data_values, problem.order, problem.p)
}

/// Galerkin matrix of the derivative of `h -> h^(1-p) s_j(h)` at `state`.
fn newton_matrix(problem: &CMProblem, state: &State) -> Result<DMatrix<f64>> {
    let (n, order, p) = (problem.n, problem.order, problem.p);
    let norm = binomial(n - 1, order);
    let (nodes, m) = (problem.grid.len(), problem.basis_jets.len());
    let d = problem.grid.tangent_dim();
    let mut deriv = DMatrix::zeros(nodes, m);
    for (i, jet) in state.jets.iter().enumerate() {
        let h = jet.value;
        let zeroth = (1.0 - p) * h.powf(-p) * curvature_value(jet, order);
        let first = h.powf(1.0 - p) / norm;
        let cof = curvature_cofactor(jet, n, order)?;
        for b in 0..m {
            let w = &problem.basis_jets[b][i];
            let mut tr = 0.0;
            for k in 0..d {
                for l in 0..d {
                    tr += cof[(k, l)] * w.hess[(k, l)];
                }
            }
            deriv[(i, b)] = zeroth * w.value + first * tr;
        }
    }
    Ok(&problem.projector * deriv)
}

fn newton_step(problem: &CMProblem, state: &State, config: &SolverConfig) -> Result<(DVector<f64>, bool)> {
    let rhs = -(&problem.projector * DVector::from_column_slice(&state.residual));
    let matrix = newton_matrix(problem, state)?;
    let cond = condition_number(&matrix);
    if cond.is_finite() && cond <= config.singular_threshold {
        if let Some(x) = matrix.lu().solve(&rhs) {
            return Ok((x, false));
        }
    }
    let reference = problem.linearized();
    let x = DVector::from_fn(rhs.len(), |a, _| rhs[a] / reference.factor(problem.basis.degree(a)));
    Ok((x, true))
}

fn initial_guess(problem: &CMProblem) -> Vec<f64> {
    let grid = &problem.grid;
    let mean = grid.integrate(&problem.data_values) / grid.area();
    let level = mean.powf(1.0 / (problem.order as f64 + 1.0 - problem.p));
    problem.coefficients_of(&HarmonicExpansion::constant(problem.n, level).expect("valid dimension"))
}

/// Solves from a constant initial guess; a failure is returned as an error.
pub fn newton_solve(problem: &CMProblem, config: &SolverConfig) -> Result<SolveReport> {
    newton_solve_from(problem, None, config).into_result()
}

/// Solves from `init` (or a constant guess) and always returns the report,
/// recording any failure in it.
pub fn newton_solve_from(problem: &CMProblem, init: Option<&HarmonicExpansion>, config: &SolverConfig) -> SolveReport {
    let mut coefficients = match init {
        Some(f) => problem.coefficients_of(f),
        None => initial_guess(problem),
    };
    let mut state = evaluate(problem, &coefficients);
    let mut residuals = vec![state.sup];
    let mut convexity = vec![state.min_radius];
    let mut step_lengths = Vec::new();
    let mut reference_steps = Vec::new();
    let mut failure = None;
    let mut increases = 0;

    if !(state.min_radius > 0.0) || !state.sup.is_finite() {
        failure = Some(Error::ConvexityLost(state.min_radius));
    }
    let mut iteration = 0;
    while failure.is_none() && state.sup >= config.tolerance {
        if iteration == config.max_iterations {
            failure = Some(Error::MaxIterations(state.sup));
            break;
        }
        iteration += 1;
        let (delta, reference) = match newton_step(problem, &state, config) {
            Ok(s) => s,
            Err(e) => {
                failure = Some(e);
                break;
            }
        };
        let mut t = 1.0;
        let mut accepted: Option<(State, Vec<f64>, f64)> = None;
        let mut fallback: Option<(State, Vec<f64>, f64)> = None;
        let mut full_step_radius = f64::NAN;
        for halving in 0..=config.max_halvings {
            let trial: Vec<f64> = coefficients.iter().zip(delta.iter()).map(|(c, d)| c + t * d).collect();
            let ts = evaluate(problem, &trial);
            if halving == 0 {
                full_step_radius = ts.min_radius;
            }
            if ts.min_radius > 0.0 && ts.sup.is_finite() {
                if ts.sup < state.sup {
                    accepted = Some((ts, trial, t));
                    break;
                }
                if fallback.as_ref().is_none_or(|f| ts.sup < f.0.sup) {
                    fallback = Some((ts, trial, t));
                }
            }
            t *= 0.5;
        }
        let (next, trial, t) = match (accepted, fallback) {
            (Some(a), _) => {
                increases = 0;
                a
            }
            (None, Some(f)) => {
                increases += 1;
                f
            }
            (None, None) => {
                failure = Some(Error::ConvexityLost(full_step_radius));
                break;
            }
        };
        state = next;
        coefficients = trial;
        residuals.push(state.sup);
        convexity.push(state.min_radius);
        step_lengths.push(t);
        reference_steps.push(reference);
        if increases >= 2 {
            failure = Some(Error::Divergence(state.sup));
        }
    }

    let solution = problem.expansion(&coefficients).expect("basis indices are valid");
    let (min_h, max_h) = state
        .jets
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), j| (lo.min(j.value), hi.max(j.value)));
    let certified_residual = if config.certify && failure.is_none() {
        SphereGrid::new(problem.n, 2 * problem.grid.resolution())
            .ok()
            .map(|fine| residual_on_grid(&solution, &problem.data, problem.order, problem.p, &fine))
    } else {
        None
    };
    SolveReport {
        n: problem.n,
        order: problem.order,
        p: problem.p,
        residuals,
        step_lengths,
        reference_steps,
        convexity,
        coefficients,
        solution,
        min_h,
        max_h,
        log_data_sup: problem.log_data_sup(),
        holder_distance: problem.holder_distance,
        certified_residual,
        failure,
    }
}

/// `sup|h^(1-p) s_j(h) - g|` over `grid`.
pub fn residual_on_grid(h: &HarmonicExpansion, g: &HarmonicExpansion, order: usize, p: f64, grid: &SphereGrid) -> f64 {
    let state = evaluate_jets(h.sample_jets(grid), &g.sample_values(grid), order, p);
    state.sup
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cmsolver::ProblemOptions;
    use crate::sphere::HarmonicTerm;

    fn small() -> ProblemOptions {
        ProblemOptions { resolution: 12, max_degree: 8, ..Default::default() }
    }

    fn quadrupole(eps: f64) -> HarmonicExpansion {
        HarmonicExpansion::constant(3, 1.0)
            .unwrap()
            .plus(&HarmonicExpansion::new(3, &[HarmonicTerm { degree: 2, order: 0, value: eps }]).unwrap())
            .unwrap()
    }

    #[test]
    fn newton_matrix_matches_finite_differences() {
        let problem = CMProblem::new(1, 0.5, quadrupole(0.1), small()).unwrap();
        let mut c = initial_guess(&problem);
        c[3] += 0.05;
        c[10] -= 0.03;
        let state = evaluate(&problem, &c);
        let j = newton_matrix(&problem, &state).unwrap();
        let galerkin = |c: &[f64]| &problem.projector * DVector::from_column_slice(&evaluate(&problem, c).residual);
        for b in [0, 3, 7, 20] {
            let e = 1e-6;
            let mut cp = c.clone();
            cp[b] += e;
            let mut cm = c.clone();
            cm[b] -= e;
            let fd = (galerkin(&cp) - galerkin(&cm)) / (2.0 * e);
            let err = (fd - j.column(b)).amax();
            assert!(err < 1e-7, "column {b}: {err}");
        }
    }

    #[test]
    fn unit_data_gives_unit_ball() {
        let problem = CMProblem::new(1, 0.5, HarmonicExpansion::constant(3, 1.0).unwrap(), small()).unwrap();
        let r = newton_solve(&problem, &SolverConfig::default()).unwrap();
        assert!(r.iterations() <= 2);
        assert!(r.residual() < 1e-12);
        assert!((r.min_h - 1.0).abs() < 1e-12 && (r.max_h - 1.0).abs() < 1e-12);
    }

    #[test]
    fn constant_data() {
        let c = 2f64.powf(1.5);
        let problem = CMProblem::new(1, 0.5, HarmonicExpansion::constant(3, c).unwrap(), small()).unwrap();
        let r = newton_solve(&problem, &SolverConfig::default()).unwrap();
        assert!((r.min_h - 2.0).abs() < 1e-12 && (r.max_h - 2.0).abs() < 1e-12, "{r:?}");
    }

    #[test]
    fn quadrupole_converges_quadratically() {
        let problem = CMProblem::new(1, 0.5, quadrupole(0.05), ProblemOptions::default()).unwrap();
        let r = newton_solve(&problem, &SolverConfig::default()).unwrap();
        assert!(r.residual() < 1e-10, "{}", r.to_text());
        let ratios = r.log_residual_ratios(0.0);
        assert!(ratios.len() >= 3 && ratios.iter().all(|&q| q >= 1.8), "{ratios:?}");
        assert!(r.certified_residual.unwrap() < 1e-10);
        assert!(r.reference_steps.iter().all(|&x| !x));
    }

    #[test]
    fn starting_from_non_convex_body_fails() {
        let problem = CMProblem::new(1, 0.5, quadrupole(0.05), small()).unwrap();
        let bad = quadrupole(-3.0);
        let r = newton_solve_from(&problem, Some(&bad), &SolverConfig::default());
        assert!(matches!(r.failure, Some(Error::ConvexityLost(_))), "{:?}", r.failure);
    }

    #[test]
    fn history_has_a_row_per_iterate() {
        let problem = CMProblem::new(1, 0.5, quadrupole(0.02), small()).unwrap();
        let r = newton_solve(&problem, &SolverConfig::default()).unwrap();
        let csv = r.history_csv();
        assert_eq!(csv.lines().count(), r.residuals.len() + 1);
        assert!(csv.starts_with(HISTORY_HEADER));
    }
}
