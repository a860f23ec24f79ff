//! Quadrature grids, harmonics and second-order jets on the unit sphere.

mod gauss;
mod grid;
mod harmonics;
mod jet;
mod ops;
mod poly;

pub use gauss::{gauss_legendre, legendre_with_derivative};
pub use grid::{tangent_frame, GridDescriptor, SphereGrid, MIN_RESOLUTION};
pub use harmonics::{
    harmonic_indices, poly_ambient, random_even_expansion, poly_jet, real_harmonic, validate_index, HarmonicBasis, HarmonicExpansion,
    HarmonicTerm,
};
pub use jet::{eye, Jet};
pub use poly::Poly;
pub use ops::{hessian_operator, laplacian_spectrum, sample_jets, spherical_gradient, SmoothField};
