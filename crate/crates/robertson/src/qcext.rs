//! Quasiconformal extension machinery: the generalized membership
//! condition, admissible dilatation bounds, the Hotta-type inequality, the
//! Becker extension built from the explicit chain, and finite-difference
//! measurement of its complex dilatation on an annulus.

use std::f64::consts::FRAC_PI_2;

use num_complex::Complex64;
use serde::Serialize;

use crate::analytic::FunctionSpec;
use crate::error::{Error, Result};
use crate::fmt::sig17;
use crate::loewner::chain_eval;
use crate::report::{GridSpec, MembershipReport, Sample, SweepAccumulator, Verdict};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

fn check_lambda(lambda: f64) -> Result<()> {
    if !lambda.is_finite() || lambda.abs() >= FRAC_PI_2 {
        return Err(Error::Domain(format!("lambda = {lambda} outside (-pi/2, pi/2)")));
    }
    Ok(())
}

/// `H_s(z) = s (1 + z f''/f') + (1 - s) z f'/f`, continued by `H_s(0) = 1`.
pub fn h_s(f: &FunctionSpec, s: Complex64, z: Complex64) -> Result<Complex64> {
    if z == ZERO {
        return Ok(ONE);
    }
    let jet = f.jet(z)?;
    if jet.v1 == ZERO {
        return Err(Error::Domain(format!("f'({z}) = 0")));
    }
    if jet.v0 == ZERO {
        return Err(Error::Domain(format!("f({z}) = 0 away from the origin")));
    }
    Ok(s * (ONE + z * jet.v2 / jet.v1) + (ONE - s) * (z * jet.v1 / jet.v0))
}

/// `Re e^{-i lambda} (1 + z f''/f' + q z f'/f)` swept over the grid; with
/// `q = 0` this is exactly the Robertson sweep.
pub fn theorem3_condition_report(
    f: &FunctionSpec,
    lambda: f64,
    q: f64,
    grid: &GridSpec,
    tol: f64,
) -> Result<MembershipReport> {
    check_lambda(lambda)?;
    if q <= -1.0 {
        return Err(Error::Precondition(format!("q = {q} must be > -1")));
    }
    let rot = Complex64::from_polar(1.0, -lambda);
    let mut acc = SweepAccumulator::new();
    for z in grid.points() {
        let jet = f.jet(z)?;
        let sample = if jet.v1 == ZERO || jet.v0 == ZERO {
            Sample::Degenerate
        } else {
            let inner = ONE + z * jet.v2 / jet.v1 + q * (z * jet.v1 / jet.v0);
            Sample::Value((rot * inner).re)
        };
        acc.add(z, sample);
    }
    Ok(acc.finish("generalized_condition", grid, tol, false))
}

/// Least admissible quasiconformality constant for the generalized
/// condition; `usable` is false when the value reaches 1 and the criterion
/// yields no conclusion.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AdmissibleK {
    pub k: f64,
    pub usable: bool,
}

/// Thresholds relating `cos lambda`, `q` and `k`:
/// without the second-coefficient condition `cos l <= k/2` (`q <= 0`) or
/// `cos l <= k/(2 + 4q)` (`q > 0`); with `f''(0) = 0` the bounds sharpen to
/// `k` and `k/(1 + 2q)`.
pub fn admissible_k(lambda: f64, q: f64, second_coeff_zero: bool) -> Result<AdmissibleK> {
    check_lambda(lambda)?;
    if q <= -1.0 {
        return Err(Error::Precondition(format!("q = {q} must be > -1")));
    }
    let cl = lambda.cos();
    let factor = match (second_coeff_zero, q > 0.0) {
        (false, false) => 2.0,
        (false, true) => 2.0 + 4.0 * q,
        (true, false) => 1.0,
        (true, true) => 1.0 + 2.0 * q,
    };
    let k = factor * cl;
    Ok(AdmissibleK { k, usable: k < 1.0 })
}

/// Parameters of the Hotta-type extension inequality; `s = a + i b`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HottaParams {
    pub a: f64,
    pub b: f64,
    pub c: Complex64,
    pub k: f64,
}

impl HottaParams {
    pub fn s(&self) -> Complex64 {
        Complex64::new(self.a, self.b)
    }

    fn validate(&self) -> Result<()> {
        if !(self.a > 0.0) {
            return Err(Error::Precondition(format!("a = {} must be > 0", self.a)));
        }
        if !(0.0..1.0).contains(&self.k) {
            return Err(Error::Precondition(format!("k = {} outside [0, 1)", self.k)));
        }
        Ok(())
    }
}

/// Result of sweeping the Hotta inequality
/// `|c |z|^2 + s - a (1 - |z|^2) H_s(z)| <= M`.
#[derive(Debug, Clone, Serialize)]
pub struct HottaReport {
    pub lhs_max: f64,
    #[serde(skip)]
    pub argmax: Complex64,
    pub m_bound: f64,
    /// Dilatation bound of the resulting extension,
    /// `l = (2ka + (1-k^2)|b|) / ((1+k^2)a + (1-k^2)|s|) < 1`; `l = k`
    /// exactly when `b = 0`.
    pub l: f64,
    pub verdict: Verdict,
    /// Grid points where `H_s` degenerated and was skipped.
    pub flagged: usize,
}

pub fn hotta_check(
    f: &FunctionSpec,
    params: &HottaParams,
    grid: &GridSpec,
    tol: f64,
) -> Result<HottaReport> {
    params.validate()?;
    let s = params.s();
    let (a, b, c, k) = (params.a, params.b, params.c, params.k);
    let mut lhs_max = f64::NEG_INFINITY;
    let mut argmax = ZERO;
    let mut flagged = 0usize;
    for z in std::iter::once(ZERO).chain(grid.points()) {
        let h = match h_s(f, s, z) {
            Ok(h) => h,
            Err(_) => {
                flagged += 1;
                continue;
            }
        };
        let r2 = z.norm_sqr();
        let lhs = (c * r2 + s - a * (1.0 - r2) * h).norm();
        if lhs > lhs_max {
            lhs_max = lhs;
            argmax = z;
        }
    }
    let m_bound = if a <= 1.0 {
        a * k * s.norm() + (a - 1.0) * (s + c).norm()
    } else {
        k * s.norm()
    };
    let k2 = k * k;
    let l = (2.0 * k * a + (1.0 - k2) * b.abs()) / ((1.0 + k2) * a + (1.0 - k2) * s.norm());
    let verdict = if lhs_max <= m_bound + tol { Verdict::Pass } else { Verdict::Fail };
    Ok(HottaReport { lhs_max, argmax, m_bound, l, verdict, flagged })
}

/// Becker extension of `f` to the plane through the explicit chain:
/// `F(w) = f(w)` for `|w| <= 1` and `F(e^{t + i theta}) = f_t(e^{i theta})`
/// for `t = ln|w| > 0`. `F` is continuous across the unit circle because
/// the chain starts at `f`.
pub fn becker_extend(f: &FunctionSpec, lambda: f64, w: Complex64) -> Result<Complex64> {
    check_lambda(lambda)?;
    let r = w.norm();
    if r < 1.0 {
        return Ok(f.jet(w)?.v0);
    }
    if r == 1.0 {
        return boundary_value(f, w);
    }
    let t = r.ln();
    let dir = w / r;
    chain_eval(f, lambda, t, dir).map(|s| s.f_t).map_err(|e| match e {
        Error::DegenerateChain { t, z } => Error::Extension {
            w,
            reason: format!("chain degenerate at t = {t}, z = {z}"),
        },
        other => other,
    })
}

/// Radial limit of `f` on the unit circle, where it exists: the closed
/// forms extend continuously everywhere except the branch point `z = 1`,
/// which is finite only when the power of `1 - z` decays there.
fn boundary_value(f: &FunctionSpec, z: Complex64) -> Result<Complex64> {
    if z == ONE {
        return match f {
            FunctionSpec::Identity => Ok(ONE),
            FunctionSpec::RobertsonExtremal { .. } | FunctionSpec::Royster { .. } => {
                let mu = match f {
                    FunctionSpec::RobertsonExtremal { lambda } => {
                        Complex64::from_polar(1.0, 2.0 * lambda)
                    }
                    FunctionSpec::Royster { mu } => *mu,
                    _ => unreachable!(),
                };
                if mu.re < 0.0 {
                    // (1-z)^{-mu} -> 0, so f -> -1/mu
                    Ok(-ONE / mu)
                } else {
                    Err(Error::Extension { w: z, reason: "unbounded at z = 1".into() })
                }
            }
            FunctionSpec::Taylor { coeffs } => {
                Ok(coeffs.iter().fold(ZERO, |acc, &a| acc + a))
            }
            _ => Err(Error::Extension { w: z, reason: "unbounded at z = 1".into() }),
        };
    }
    // off the branch point the jet formulas are continuous on the closure;
    // evaluate them at a point negligibly inside
    let inner = z * (1.0 - 1e-15);
    Ok(f.jet(inner)?.v0)
}

/// Sampled complex dilatation `mu = (dF/d w-bar)/(dF/dw)` of the extension
/// on an annulus.
#[derive(Debug, Clone)]
pub struct DilatationField {
    /// `(w, mu(w))` samples, radius-major like grid sweeps.
    pub samples: Vec<(Complex64, Complex64)>,
    pub max_abs_mu: f64,
    pub fd_step: f64,
    /// Samples excluded by the degenerate-Jacobian or Richardson guards.
    pub excluded: Vec<(Complex64, String)>,
}

/// Summary emitted next to the CSV field.
#[derive(Debug, Clone, Serialize)]
pub struct DilatationSummary {
    pub max_abs_mu: f64,
    pub k_bound: f64,
    pub verdict: Verdict,
}

impl DilatationField {
    /// `re_w,im_w,re_mu,im_mu,abs_mu` rows.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("re_w,im_w,re_mu,im_mu,abs_mu\n");
        for (w, mu) in &self.samples {
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                sig17(w.re),
                sig17(w.im),
                sig17(mu.re),
                sig17(mu.im),
                sig17(mu.norm())
            ));
        }
        out
    }

    pub fn summary(&self, k_bound: f64, tol: f64) -> DilatationSummary {
        let verdict = if self.max_abs_mu <= k_bound + tol {
            Verdict::Pass
        } else {
            Verdict::Fail
        };
        DilatationSummary { max_abs_mu: self.max_abs_mu, k_bound, verdict }
    }
}

/// Richardson agreement required between steps `h` and `h/2`.
const RICHARDSON_TOL: f64 = 1e-3;
/// Jacobian modulus below which a sample is declared degenerate.
const JACOBIAN_FLOOR: f64 = 1e-10;

fn wirtinger_mu(
    f: &FunctionSpec,
    lambda: f64,
    w: Complex64,
    h: f64,
) -> Result<Option<Complex64>> {
    let fx = (becker_extend(f, lambda, w + Complex64::new(h, 0.0))?
        - becker_extend(f, lambda, w - Complex64::new(h, 0.0))?)
        / (2.0 * h);
    let fy = (becker_extend(f, lambda, w + Complex64::new(0.0, h))?
        - becker_extend(f, lambda, w - Complex64::new(0.0, h))?)
        / (2.0 * h);
    let i = Complex64::new(0.0, 1.0);
    let d_w = (fx - i * fy) * 0.5;
    let d_wbar = (fx + i * fy) * 0.5;
    if d_w.norm() < JACOBIAN_FLOOR {
        return Ok(None);
    }
    Ok(Some(d_wbar / d_w))
}

/// Measure the dilatation of the Becker extension on
/// `max(1.001, 1 + 4 fd_step) <= |w| <= r_out` with `n_r x n_theta` samples.
///
/// Wirtinger derivatives come from central differences in the two real
/// coordinates at steps `fd_step` and `fd_step/2`; a sample whose two
/// estimates disagree by more than `1e-3`, or whose holomorphic derivative
/// collapses, is excluded and recorded.
pub fn dilatation_field(
    f: &FunctionSpec,
    lambda: f64,
    r_out: f64,
    n_r: usize,
    n_theta: usize,
    fd_step: f64,
) -> Result<DilatationField> {
    check_lambda(lambda)?;
    if r_out <= 1.0 {
        return Err(Error::Precondition(format!("r_out = {r_out} must exceed 1")));
    }
    if !(fd_step > 0.0) || fd_step > 1e-4 * (r_out - 1.0) {
        return Err(Error::Precondition(format!(
            "fd_step = {fd_step} outside (0, 1e-4 (r_out - 1)]"
        )));
    }
    if n_r == 0 || n_theta == 0 {
        return Err(Error::Precondition("need n_r, n_theta >= 1".into()));
    }
    let r_lo = (1.0 + 4.0 * fd_step).max(1.001);
    if r_lo >= r_out {
        return Err(Error::Precondition(format!("annulus [{r_lo}, {r_out}] is empty")));
    }

    let mut samples = Vec::with_capacity(n_r * n_theta);
    let mut excluded = Vec::new();
    let mut max_abs_mu = 0.0_f64;
    for ir in 0..n_r {
        let r = if n_r == 1 {
            r_lo
        } else {
            r_lo + (r_out - r_lo) * ir as f64 / (n_r - 1) as f64
        };
        for jt in 0..n_theta {
            let theta = std::f64::consts::TAU * jt as f64 / n_theta as f64;
            let w = Complex64::from_polar(r, theta);
            let coarse = wirtinger_mu(f, lambda, w, fd_step)?;
            let fine = wirtinger_mu(f, lambda, w, 0.5 * fd_step)?;
            match (coarse, fine) {
                (Some(mc), Some(mf)) => {
                    if (mc - mf).norm() > RICHARDSON_TOL {
                        excluded.push((w, format!(
                            "richardson disagreement {:.3e}",
                            (mc - mf).norm()
                        )));
                    } else {
                        max_abs_mu = max_abs_mu.max(mf.norm());
                        samples.push((w, mf));
                    }
                }
                _ => excluded.push((w, "degenerate jacobian".into())),
            }
        }
    }
    Ok(DilatationField { samples, max_abs_mu, fd_step, excluded })
}
