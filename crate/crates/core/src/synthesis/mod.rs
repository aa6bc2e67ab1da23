//! Constant-angle surface construction.

pub mod family;
mod frame;
mod integrate;
mod lift;
mod metric;
mod potentials;

pub use family::{family_metric, make_family, polytrig_potentials, trig_potentials, FamilySpec, ProductCurve};
pub use frame::{adapted_frame, frame_derivatives, AdaptedFrame};
pub use integrate::{integrate_immersion, integrate_immersion_at, ClosureReport};
pub use lift::{angle_constants, gauss_map_formula, horizontal_lift, HorizontalLift, MIN_SIN_PSI};
pub use metric::{
    kg_residual, solve_cauchy_curve, solve_goursat, CauchyData, CauchyField, MetricField, MASK_THRESHOLD,
};
pub use potentials::{immersion_from_potentials, PotentialPair, PotentialReport};
