//! Experiments around the L_p Brunn-Minkowski inequality for intrinsic
//! volumes.

mod counterexample;
mod near_ball;
mod product;
mod verdict;

pub use counterexample::{base_pairs, construct_counterexample, Counterexample, ScanRow, SearchOptions};
pub use near_ball::{c2_distance_to_ball, near_ball_body};
pub use product::cartesian_product_identity_check;
pub use verdict::{check_lpbm, p_mean_bound, reverse_j1_check, InequalityVerdict, ReverseVerdict};
