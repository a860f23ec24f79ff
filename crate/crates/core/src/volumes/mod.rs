//! Intrinsic volumes, dimensional constants and consistency checks.

mod constants;
mod intrinsic;
mod kubota;
mod steiner;

pub use constants::{
    af_ratio, ball_intrinsic_volume, ball_volume, dimensional_constants, kubota_constant, mixed_volume_factor,
    segment_factor, DimensionalConstants,
};
pub use intrinsic::{
    intrinsic_volume, intrinsic_volume_2d, intrinsic_volume_of_field, intrinsic_volume_product,
    intrinsic_volume_smooth, volume_report, VolumeEntry, VolumeMethod, VolumeOptions, VolumeReport,
    DEFAULT_RESOLUTION, PLANAR_RESOLUTION,
};
pub use kubota::{kubota_oracle, projection_volume, random_frame, MonteCarloEstimate, DEFAULT_SEED, MIN_SAMPLES};
pub use steiner::{parallel_volume, steiner_check, steiner_polynomial, steiner_rows, SteinerRow};
