//! Numerical toolkit for spirallike and Robertson functions on the unit disk.
//!
//! The crate evaluates the extremal families of the classes `SP(lambda)`
//! (lambda-spirallike) and `R(lambda)` (lambda-Robertson), sweeps the defining
//! Re-functionals over disk grids, computes sharp growth envelopes and the
//! boundedness integral with its endpoint singularity, drives an explicit
//! Loewner chain, and measures the complex dilatation of the induced Becker
//! extension on an annulus.
//!
//! Module map:
//! - [`analytic`]: function specifications, exact jets, principal powers,
//!   the alpha-primitive.
//! - [`classes`]: membership reports for `SP(lambda)`, `R(lambda)` and the
//!   convex class, the lambda-argument, and the equivalence chain.
//! - [`growth`]: growth envelopes, the boundedness integral, the cubic root
//!   `x0`, Royster's non-univalent construction and collision search.
//! - [`loewner`]: the explicit chain, its transition function, the
//!   univalence inequality and Herglotz disk checks.
//! - [`qcext`]: generalized condition reports, admissible dilatation bounds,
//!   the Becker extension, and finite-difference dilatation fields.
//!
//! A grid verdict is a certificate of failure but only evidence of
//! membership: the underlying conditions quantify over the whole open disk.

pub mod analytic;
pub mod classes;
pub mod error;
pub mod fmt;
pub mod growth;
pub mod loewner;
pub mod qcext;
pub mod quadrature;
pub mod report;

pub use error::{Error, Result};
pub use num_complex::Complex64;
