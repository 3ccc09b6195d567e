//! Approximation methods, split by problem class.

pub mod bvp;
pub mod osc;
