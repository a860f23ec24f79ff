//! Cone measure, the second-order operator on even fields and its
//! spectral gap, and related integral identities.

mod identity;
mod ivaki_milman;
mod measure;
mod operator;

pub use identity::{second_derivative_identity_check, SecondDerivativeCheck, DEFAULT_STEP};
pub use ivaki_milman::{ivaki_milman_check, IntegralInequality, IM_TOLERANCE};
pub use measure::{cone_measure, cone_measure_from_jets, positive_jets, ConeMeasure};
pub use operator::{assemble_operator, lambda_1e, EvenSpectrum, SpectralProblem, MAX_MASS_CONDITION};
