//! Newton solver for the even L_p Christoffel-Minkowski equation
//! `h^(1-p) s_j(h) = g` near `g = 1`.

mod monitor;
mod newton;
mod problem;

pub use monitor::{
    bound_monitor, bound_sweep, degenerate_equation_value, uniqueness_probe, BoundSummary, ProbeVerdict,
    SweepRow, UniquenessReport, AGREEMENT_TOLERANCE, SWEEP_HEADER,
};
pub use newton::{newton_solve, newton_solve_from, SolveReport, SolverConfig, HISTORY_HEADER, REPORT_SCHEMA};
pub use problem::{
    holder_distance, linearized_operator, CMProblem, LinearizedOperator, ProblemOptions, HOLDER_EXPONENT,
};
