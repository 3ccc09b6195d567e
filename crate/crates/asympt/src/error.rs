//! Crate-wide error type.
//!
//! Every fallible operation returns [`Error`]; callers that need to map
//! failures onto process exit codes can match on the variant class via
//! [`Error::is_config`] / [`Error::is_method`].

use thiserror::Error;

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A coefficient or parameter was NaN or infinite.
    #[error("non-finite value for {what}")]
    NonFinite { what: &'static str },

    /// Two trigonometric polynomials with different base frequencies were combined.
    #[error("base frequency mismatch: {left} vs {right}")]
    FrequencyMismatch { left: f64, right: f64 },

    /// The sine-kernel integral is only defined for inputs free of secular
    /// (t-multiplied) terms.
    #[error("sine-kernel integration of a term with t^{t_power} is not supported")]
    SecularInput { t_power: u32 },

    /// Problem name not present in the registry.
    #[error("unknown problem '{name}'")]
    UnknownProblem { name: String },

    /// A required parameter was absent from the parameter map.
    #[error("problem '{problem}' requires parameter '{param}'")]
    MissingParam { problem: &'static str, param: &'static str },

    /// A parameter value violated its documented range.
    #[error("invalid parameter '{param}': {reason}")]
    InvalidParam { param: &'static str, reason: String },

    /// The requested method does not apply to the given problem.
    #[error("method not applicable: {reason}")]
    Unsupported { reason: String },

    /// Expansion order outside the implemented range.
    #[error("expansion order {got} not supported (valid: {valid})")]
    InvalidOrder { got: u32, valid: &'static str },

    /// The secular (resonant) coefficient could not be cancelled.
    #[error("cannot cancel resonant term: {reason}")]
    SecularUnresolvable { reason: String },

    /// A small denominator made a coefficient formula singular.
    #[error("near-resonant denominator {value:.3e} in {context}")]
    NearResonantDenominator { value: f64, context: &'static str },

    /// Parameter combination makes a formula singular.
    #[error("singular parameter combination: {what}")]
    SingularParameter { what: String },

    /// Evaluation requested outside a problem's domain.
    #[error("point {x} outside domain [{lo}, {hi}]")]
    OutsideDomain { x: f64, lo: f64, hi: f64 },

    /// Candidate or residual evaluation produced a non-finite value.
    #[error("evaluation produced a non-finite value at x = {x}")]
    EvaluationFailed { x: f64 },

    /// Adaptive quadrature hit its subdivision limit before reaching tolerance.
    #[error("quadrature did not converge on [{a}, {b}]: error estimate {estimate:.3e} > {tol:.3e}")]
    QuadratureNonConvergence { a: f64, b: f64, estimate: f64, tol: f64 },

    /// Adaptive integration could not continue (step size underflow).
    #[error("integration failed at t = {t_last}: {reason}")]
    IntegrationFailure { t_last: f64, reason: String },

    /// No periodic cycle was detected within the observation window.
    #[error("no stable cycle detected: {reason}")]
    NoCycle { reason: String },

    /// Shooting found no root in the scanned bracket.
    #[error("no solution found by shooting: {detail}")]
    NoSolution { detail: String },

    /// Coefficient field has a zero or negative value on the sampling grid.
    #[error("coefficient function non-positive at x = {x}: turning point in domain")]
    TurningPoint { x: f64 },

    /// Matched-solution domain growth did not stabilize.
    #[error("inner domain did not stabilize after {doublings} doublings")]
    NonStabilizing { doublings: u32 },

    /// Fixed-point sweeps diverged (residual grew over consecutive sweeps).
    #[error("fixed-point iteration diverged after {sweeps} sweeps (residual {residual:.3e})")]
    PicardDiverged { sweeps: u32, residual: f64 },

    /// Grid supplied to a grid-valued constructor was invalid.
    #[error("invalid grid: {reason}")]
    InvalidGrid { reason: String },

    /// Configuration file syntax or semantics error.
    #[error("config error at line {line}: {reason}")]
    Config { line: usize, reason: String },
}

impl Error {
    /// True for errors caused by bad user input (problem names, parameters,
    /// configuration files). Maps to the configuration exit status.
    pub fn is_config(&self) -> bool {
        matches!(
            self,
            Error::UnknownProblem { .. }
                | Error::MissingParam { .. }
                | Error::InvalidParam { .. }
                | Error::InvalidOrder { .. }
                | Error::Config { .. }
        )
    }

    /// True for errors raised by a method or solver failing on valid input.
    pub fn is_method(&self) -> bool {
        !self.is_config()
    }
}
