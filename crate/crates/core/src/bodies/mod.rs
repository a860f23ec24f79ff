//! Convex bodies given by support functions, Wulff shapes and L_p
//! combinations.

mod body;
mod format;
mod pmean;
mod polygon;
mod wulff;

pub use body::{
    default_plane_frame, lp_combination, lp_combination_with, min_eigenvalue, Body, CombinationMode,
    CombinationOptions, Ellipsoid, PMeanBody, SegmentProduct, CONVEXITY_THRESHOLD,
};
pub use format::BodySpec;
pub use pmean::{power_mean, MeanDerivatives, PMeanParams};
pub use polygon::{convex_hull, Polygon2D};
pub use wulff::{
    circle_directions, spatial_directions, wulff_polygon, wulff_shape_2d, wulff_shape_3d, Wulff3D, WulffResult,
    WulffShape, CONVEX_TOL,
};
