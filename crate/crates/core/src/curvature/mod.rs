//! Mixed discriminants and curvature functions.

mod discriminant;
mod field;

pub use discriminant::{
    binomial, cofactor_operator, mixed_discriminant, mixed_discriminant_cofactor, mixed_discriminant_polarization,
    normalized_elementary, MAX_POLARIZATION_SIZE,
};
pub use field::{
    curvature_cofactor, curvature_function, curvature_of_field, curvature_value, degenerate_curvature,
    mixed_curvature, principal_radii, tangent_matrix, CurvatureField,
};
