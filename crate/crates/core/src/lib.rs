//! Numerics for origin-symmetric convex bodies: intrinsic volumes, L_p
//! combinations, the spectral gap of the Hilbert-Brunn-Minkowski operator
//! and a Newton solver for the Christoffel-Minkowski equation.

pub mod bodies;
pub mod cli;
pub mod cmsolver;
pub mod curvature;
pub mod error;
pub mod linalg;
pub mod lpbm;
pub mod spectral;
pub mod sphere;
pub mod volumes;

pub use error::{Error, Result};
