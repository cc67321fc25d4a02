//! Error type shared by every module of the crate.

use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    /// Input outside the domain of an operation (e.g. `|z| >= 1`).
    #[error("domain error: {0}")]
    Domain(String),

    /// A function specification fails its structural invariants.
    #[error("invalid function spec: {0}")]
    InvalidSpec(String),

    /// Grid construction failed validation.
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    /// Adaptive quadrature exhausted its subdivision budget.
    #[error("quadrature did not converge: achieved {achieved:.3e}, requested {requested:.3e}")]
    QuadratureNonConvergence { achieved: f64, requested: f64 },

    /// An improper integral with a non-integrable endpoint.
    #[error("integral diverges: {0}")]
    DivergentIntegral(String),

    /// Royster's construction has no admissible parameter.
    #[error("no admissible mu: {0}")]
    NoAdmissibleMu(String),

    /// The Loewner chain degenerates (`z f_t' = 0` away from the origin).
    #[error("degenerate chain sample at t = {t}, z = {z}")]
    DegenerateChain { t: f64, z: Complex64 },

    /// Argument unwrapping saw a jump too large to resolve.
    #[error("grid too coarse for argument unwrapping: jump of {jump:.4} rad at theta index {index}")]
    GridTooCoarse { jump: f64, index: usize },

    /// An operation-specific precondition does not hold.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// The plane extension could not be evaluated at the requested point.
    #[error("extension failed at w = {w}: {reason}")]
    Extension { w: Complex64, reason: String },
}

pub type Result<T> = std::result::Result<T, Error>;
