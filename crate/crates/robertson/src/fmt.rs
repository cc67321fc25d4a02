//! Deterministic float formatting for report artifacts.
//!
//! All JSON/CSV emitters format floats through [`sig17`], so identical
//! inputs produce byte-identical files.

/// Scientific notation with 17 significant digits (round-trips any f64).
pub fn sig17(x: f64) -> String {
    format!("{x:.16e}")
}
