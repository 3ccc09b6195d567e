//! Approximate analytical solutions of canonical nonlinear oscillators and
//! singularly perturbed boundary-value problems, with an independent numerical
//! oracle for cross-validation.
//!
//! The crate is organized in layers:
//!
//! * [`trig`]: closed algebra of trigonometric polynomials (products,
//!   derivatives, sine-kernel integrals, secular-term detection).
//! * [`problems`]: the problem registry (oscillators, boundary-value problems,
//!   oscillatory second-order equations, a gravitating bound-state system, a
//!   traveling-wave reduction) plus a pointwise residual evaluator.
//! * [`methods`]: the approximation engines. [`methods::osc`] covers periodic
//!   solutions (iterative correction, secular-cancellation expansions, a
//!   homotopy split for the quintic oscillator, a limit-cycle growth-rate
//!   formula); [`methods::bvp`] covers boundary-value and field problems
//!   (direct variational solutions, integral-equation sweeps, inner/outer
//!   matching, phase-integral approximation, fixed-point sweeps for a
//!   coupled integro-differential pair).
//! * [`oracle`]: independent numerical ground truth (adaptive embedded
//!   Runge-Kutta with dense output, cycle measurement, shooting for two-point
//!   problems, closed-form solutions where available).
//! * [`acceptance`]: the end-to-end verification suite wiring methods against
//!   the oracle at pinned tolerances.

// Validation guards are written as negated comparisons (`!(x > 0.0)`) on
// purpose: NaN must land in the rejection branch, which `x <= 0.0` misses.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod acceptance;
pub mod error;
pub mod methods;
pub mod oracle;
pub mod problems;
pub mod quad;
pub mod trig;

pub use error::{Error, Result};
