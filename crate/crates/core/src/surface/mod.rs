//! Discrete immersion grids and their differential geometry.

mod checks;
mod geometry;
mod grid;

pub use checks::{
    blowup_ode_check, check_degenerate_hyperplane, check_holonomy_tube, BlowupReport, HolonomyReport,
    HyperplaneReport, TubeVariant, HOLONOMY_TOL, HYPERPLANE_TOL, NULL_NORMAL_TOL,
};
pub use geometry::{
    angle_field, check_constant_angle, check_constant_angle_frames, curvatures, frame_angle_field,
    gauss_map, normal_frame, tangents, AngleSample, ConstantAngleReport, InvariantReport, NodeInvariants,
};
pub use grid::{sample_immersion, GridGeometry, ImmersionGrid};
