#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod intercept;
pub mod model;
pub mod montecarlo;
pub mod outage;
pub mod sinr;
pub mod specfun;
pub mod sweep;

pub use error::{Error, Result};
