// negated float comparisons are deliberate: they also reject NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod algebra;
pub mod cli;
pub mod cmath;
pub mod error;
pub mod planes;
pub mod surface;
pub mod synthesis;

pub use error::{Error, Result};
