//! Complexified quaternions, the vector model of R^{1,3} and the Spin(1,3) action.

mod quaternion;
mod spin;
mod vector;

pub use quaternion::{conj_bar, conj_hat, h_form, quat_mul, ComplexQuaternion};
pub(crate) use spin::cross_unchecked;
pub use spin::{mixed_product, spin_act, vector_cross, SpinElement};
pub use vector::{embed_vector, project_unchecked, project_vector, wedge_to_bivector, MinkowskiVector};
