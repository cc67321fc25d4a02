//! Disk grids and membership reports shared by the sweep operations.

use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Hard ceiling for grid radii; the conditions under test are open-disk
/// conditions and everything we sample stays strictly inside.
pub const MAX_GRID_R: f64 = 0.995;

/// Polar sampling grid: circles `r_values` times `n_theta` equispaced angles.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub r_values: Vec<f64>,
    pub n_theta: usize,
}

impl GridSpec {
    pub fn new(r_values: Vec<f64>, n_theta: usize) -> Result<Self> {
        if n_theta < 8 {
            return Err(Error::InvalidGrid(format!("n_theta = {n_theta} < 8")));
        }
        if r_values.is_empty() {
            return Err(Error::InvalidGrid("empty r_values".into()));
        }
        if r_values.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidGrid("r_values must be strictly increasing".into()));
        }
        let lo = r_values[0];
        let hi = *r_values.last().unwrap();
        if lo <= 0.0 || hi > MAX_GRID_R {
            return Err(Error::InvalidGrid(format!(
                "r_values must lie in (0, {MAX_GRID_R}], got [{lo}, {hi}]"
            )));
        }
        Ok(Self { r_values, n_theta })
    }

    /// Radii accumulating geometrically toward `r_max`:
    /// `1 - r_k = (1 - r_max)^{k / r_count}`.
    pub fn geometric(r_count: usize, r_max: f64, n_theta: usize) -> Result<Self> {
        if r_count == 0 {
            return Err(Error::InvalidGrid("r_count = 0".into()));
        }
        if !(0.0..=MAX_GRID_R).contains(&r_max) || r_max <= 0.0 {
            return Err(Error::InvalidGrid(format!("r_max = {r_max} outside (0, {MAX_GRID_R}]")));
        }
        let gap = 1.0 - r_max;
        let r_values = (1..=r_count)
            .map(|k| 1.0 - gap.powf(k as f64 / r_count as f64))
            .collect();
        Self::new(r_values, n_theta)
    }

    pub fn r_max(&self) -> f64 {
        *self.r_values.last().expect("validated non-empty")
    }

    pub fn theta(&self, j: usize) -> f64 {
        TAU * j as f64 / self.n_theta as f64
    }

    /// Grid points in deterministic order: radius-major, angles ascending.
    pub fn points(&self) -> impl Iterator<Item = Complex64> + '_ {
        self.r_values.iter().flat_map(move |&r| {
            (0..self.n_theta).map(move |j| Complex64::from_polar(r, self.theta(j)))
        })
    }

    pub fn len(&self) -> usize {
        self.r_values.len() * self.n_theta
    }

    pub fn is_empty(&self) -> bool {
        self.r_values.is_empty()
    }
}

impl Default for GridSpec {
    fn default() -> Self {
        Self::geometric(40, 0.99, 720).expect("default grid is valid")
    }
}

/// Grid-sweep verdict. `PassBoundary` marks a minimum that sits on the
/// boundary of the condition (within tolerance of zero) where the sweep was
/// asked to distinguish that case; plain sweeps only emit `Pass`/`Fail`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Pass,
    PassBoundary,
    Fail,
}

impl Verdict {
    pub fn passed(self) -> bool {
        matches!(self, Verdict::Pass | Verdict::PassBoundary)
    }
}

mod complex_pair {
    use num_complex::Complex64;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(v: &Complex64, s: S) -> Result<S::Ok, S::Error> {
        [v.re, v.im].serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Complex64, D::Error> {
        let p = <[f64; 2]>::deserialize(d)?;
        Ok(Complex64::new(p[0], p[1]))
    }
}

mod opt_complex_pair {
    use num_complex::Complex64;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(v: &Option<Complex64>, s: S) -> Result<S::Ok, S::Error> {
        v.map(|c| [c.re, c.im]).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Complex64>, D::Error> {
        Ok(Option::<[f64; 2]>::deserialize(d)?.map(|p| Complex64::new(p[0], p[1])))
    }
}

/// Outcome of sweeping a real functional over a grid.
///
/// `verdict = Pass` (or `PassBoundary`) exactly when
/// `min_value > -margin_tolerance`; a degenerate sample (a vanishing
/// denominator at a grid point) forces `min_value = -inf` and records the
/// offending point in `flagged_point`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MembershipReport {
    #[serde(rename = "functional")]
    pub functional_name: String,
    pub min_value: f64,
    #[serde(with = "complex_pair")]
    pub argmin: Complex64,
    pub verdict: Verdict,
    pub margin_tolerance: f64,
    pub grid: GridSpec,
    #[serde(
        default,
        skip_serializing_if = "Option::is_none",
        with = "opt_complex_pair"
    )]
    pub flagged_point: Option<Complex64>,
}

/// One sample of a sweep.
#[derive(Debug, Clone, Copy)]
pub(crate) enum Sample {
    Value(f64),
    Degenerate,
}

/// Accumulates sweep samples into a [`MembershipReport`].
pub(crate) struct SweepAccumulator {
    min: f64,
    argmin: Complex64,
    flagged: Option<Complex64>,
}

impl SweepAccumulator {
    pub fn new() -> Self {
        Self {
            min: f64::INFINITY,
            argmin: Complex64::new(0.0, 0.0),
            flagged: None,
        }
    }

    pub fn add(&mut self, z: Complex64, sample: Sample) {
        match sample {
            Sample::Value(v) => {
                if v < self.min {
                    self.min = v;
                    self.argmin = z;
                }
            }
            Sample::Degenerate => {
                if self.flagged.is_none() {
                    self.flagged = Some(z);
                }
            }
        }
    }

    pub fn finish(
        self,
        functional_name: &str,
        grid: &GridSpec,
        tol: f64,
        boundary_aware: bool,
    ) -> MembershipReport {
        let (min_value, argmin, verdict) = if let Some(p) = self.flagged {
            (f64::NEG_INFINITY, p, Verdict::Fail)
        } else {
            let v = if self.min <= -tol {
                Verdict::Fail
            } else if boundary_aware && self.min <= tol {
                Verdict::PassBoundary
            } else {
                Verdict::Pass
            };
            (self.min, self.argmin, v)
        };
        MembershipReport {
            functional_name: functional_name.to_string(),
            min_value,
            argmin,
            verdict,
            margin_tolerance: tol,
            grid: grid.clone(),
            flagged_point: self.flagged,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn geometric_grid_shape() {
        let g = GridSpec::geometric(40, 0.99, 720).unwrap();
        assert_eq!(g.r_values.len(), 40);
        assert!((g.r_max() - 0.99).abs() < 1e-12);
        assert!(g.r_values[0] > 0.1 && g.r_values[0] < 0.12);
        assert_eq!(g.len(), 40 * 720);
    }

    #[test]
    fn grid_validation() {
        assert!(GridSpec::new(vec![0.5, 0.4], 720).is_err());
        assert!(GridSpec::new(vec![0.5], 4).is_err());
        assert!(GridSpec::new(vec![0.9991], 720).is_err());
        assert!(GridSpec::new(vec![0.0], 720).is_err());
        assert!(GridSpec::geometric(0, 0.9, 64).is_err());
    }

    #[test]
    fn verdict_serialization() {
        assert_eq!(serde_json::to_string(&Verdict::Pass).unwrap(), "\"pass\"");
        assert_eq!(
            serde_json::to_string(&Verdict::PassBoundary).unwrap(),
            "\"pass-boundary\""
        );
        assert_eq!(serde_json::to_string(&Verdict::Fail).unwrap(), "\"fail\"");
    }

    #[test]
    fn report_json_schema() {
        let grid = GridSpec::new(vec![0.5, 0.9], 8).unwrap();
        let mut acc = SweepAccumulator::new();
        acc.add(Complex64::new(0.5, 0.0), Sample::Value(0.25));
        acc.add(Complex64::new(-0.9, 0.0), Sample::Value(0.125));
        let rep = acc.finish("test_functional", &grid, 1e-9, false);
        let v: serde_json::Value = serde_json::to_value(&rep).unwrap();
        assert_eq!(v["functional"], "test_functional");
        assert_eq!(v["verdict"], "pass");
        assert_eq!(v["min_value"], 0.125);
        assert_eq!(v["argmin"][0], -0.9);
        assert!(v.get("flagged_point").is_none());
        let back: MembershipReport = serde_json::from_value(v).unwrap();
        assert_eq!(back.verdict, Verdict::Pass);
    }

    #[test]
    fn degenerate_sample_forces_fail() {
        let grid = GridSpec::new(vec![0.5], 8).unwrap();
        let mut acc = SweepAccumulator::new();
        acc.add(Complex64::new(0.5, 0.0), Sample::Value(1.0));
        acc.add(Complex64::new(-0.5, 0.0), Sample::Degenerate);
        let rep = acc.finish("f", &grid, 1e-9, false);
        assert_eq!(rep.verdict, Verdict::Fail);
        assert_eq!(rep.min_value, f64::NEG_INFINITY);
        assert_eq!(rep.flagged_point, Some(Complex64::new(-0.5, 0.0)));
    }
}
