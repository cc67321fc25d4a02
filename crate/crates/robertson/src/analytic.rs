//! Analytic function specifications on the unit disk with exact jets.
//!
//! Every builtin family reduces to principal-branch powers of `1 - z`;
//! since `1 - z` has positive real part on the disk, those powers are
//! single-valued and smooth there and no branch cut is ever crossed.
//! All values are normalized so that `f(0) = 0` and `f'(0) = 1`.

use std::f64::consts::FRAC_PI_2;

use num_complex::Complex64;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::quadrature::{self, DEFAULT_QUAD_TOL, MAX_QUAD_SUBDIV};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Value, first and second derivative of an analytic function at a point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet2 {
    pub v0: Complex64,
    pub v1: Complex64,
    pub v2: Complex64,
}

/// A closed-under-evaluation description of a normalized analytic function
/// on the unit disk.
///
/// - `RobertsonExtremal(lambda)`: `f_lambda(z) = ((1-z)^{1-2 e^{i lam} cos lam} - 1)/(2 e^{i lam} cos lam - 1)`,
///   the distinguished member of `R(lambda)`. Equivalently Royster's map with
///   `mu = e^{2 i lam}`.
/// - `SpirallikeExtremal(lambda)`: `P_lambda(z) = z/(1-z)^{1+e^{2 i lam}}`,
///   extremal in `SP(lambda)`; the Koebe function at `lambda = 0`.
/// - `Royster(mu)`: `f*_mu(z) = ((1-z)^{-mu} - 1)/mu`, `mu != 0`.
/// - `HalfPlane`: `z/(1-z)`.
/// - `Identity`: `z`.
/// - `Taylor(coeffs)`: truncated series `a_1 z + ... + a_N z^N` with `a_1 = 1`.
#[derive(Debug, Clone, PartialEq)]
pub enum FunctionSpec {
    RobertsonExtremal { lambda: f64 },
    SpirallikeExtremal { lambda: f64 },
    Royster { mu: Complex64 },
    HalfPlane,
    Identity,
    Taylor { coeffs: Vec<Complex64> },
}

fn check_lambda(lambda: f64) -> Result<()> {
    if !lambda.is_finite() || lambda.abs() >= FRAC_PI_2 {
        return Err(Error::Domain(format!(
            "lambda = {lambda} outside (-pi/2, pi/2)"
        )));
    }
    Ok(())
}

impl FunctionSpec {
    pub fn robertson_extremal(lambda: f64) -> Result<Self> {
        check_lambda(lambda)?;
        Ok(Self::RobertsonExtremal { lambda })
    }

    pub fn spirallike_extremal(lambda: f64) -> Result<Self> {
        check_lambda(lambda)?;
        Ok(Self::SpirallikeExtremal { lambda })
    }

    pub fn royster(mu: Complex64) -> Result<Self> {
        if mu == ZERO {
            return Err(Error::InvalidSpec("Royster mu must be nonzero".into()));
        }
        Ok(Self::Royster { mu })
    }

    pub fn taylor(coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::InvalidSpec("Taylor spec needs at least a_1".into()));
        }
        if coeffs[0] != ONE {
            return Err(Error::InvalidSpec(format!(
                "Taylor a_1 must be exactly 1, got {}",
                coeffs[0]
            )));
        }
        Ok(Self::Taylor { coeffs })
    }

    /// `f''(0)`, exact for every kind.
    pub fn d2_at_zero(&self) -> Complex64 {
        match self {
            Self::RobertsonExtremal { lambda } => robertson_mu(*lambda) + 1.0,
            Self::SpirallikeExtremal { lambda } => {
                (ONE + Complex64::from_polar(1.0, 2.0 * lambda)) * 2.0
            }
            Self::Royster { mu } => mu + 1.0,
            Self::HalfPlane => Complex64::new(2.0, 0.0),
            Self::Identity => ZERO,
            Self::Taylor { coeffs } => {
                coeffs.get(1).copied().unwrap_or(ZERO) * 2.0
            }
        }
    }

    /// Evaluate `(f, f', f'')` at `z`, `|z| < 1`.
    ///
    /// Closed-form derivatives for the builtin kinds, a Horner pass for
    /// Taylor specs. `jet(0) = (0, 1, f''(0))` exactly.
    pub fn jet(&self, z: Complex64) -> Result<Jet2> {
        if z.norm() >= 1.0 {
            return Err(Error::Domain(format!("|z| = {} >= 1", z.norm())));
        }
        if z == ZERO {
            return Ok(Jet2 { v0: ZERO, v1: ONE, v2: self.d2_at_zero() });
        }
        Ok(match self {
            Self::RobertsonExtremal { lambda } => royster_jet(robertson_mu(*lambda), z),
            Self::Royster { mu } => royster_jet(*mu, z),
            Self::SpirallikeExtremal { lambda } => spirallike_jet(*lambda, z),
            Self::HalfPlane => {
                let d = ONE - z;
                let d2 = d * d;
                Jet2 { v0: z / d, v1: ONE / d2, v2: Complex64::new(2.0, 0.0) / (d2 * d) }
            }
            Self::Identity => Jet2 { v0: z, v1: ONE, v2: ZERO },
            Self::Taylor { coeffs } => taylor_jet(coeffs, z),
        })
    }

    /// Truncation-error estimate `|a_N| |z|^N N` for Taylor specs.
    ///
    /// Builtin kinds are exact and return `None`; callers decide what to do
    /// with the estimate when sampling close to the boundary.
    pub fn truncation_estimate(&self, z: Complex64) -> Option<f64> {
        match self {
            Self::Taylor { coeffs } => {
                let n = coeffs.len();
                let a_n = coeffs[n - 1].norm();
                Some(a_n * z.norm().powi(n as i32) * n as f64)
            }
            _ => None,
        }
    }

    /// `log f'(z)` on the branch with `log f'(0) = 0`, analytic along each
    /// radial segment for the builtin kinds.
    ///
    /// For Taylor specs the principal branch of `Log f'` is used, which is
    /// the analytic branch as long as `f'` stays off the negative real axis
    /// along the segment.
    pub(crate) fn log_deriv(&self, z: Complex64) -> Result<Complex64> {
        let ld = (ONE - z).ln();
        Ok(match self {
            Self::RobertsonExtremal { lambda } => (-robertson_mu(*lambda) - 1.0) * ld,
            Self::Royster { mu } => (-mu - 1.0) * ld,
            Self::HalfPlane => -2.0 * ld,
            Self::Identity => ZERO,
            Self::SpirallikeExtremal { lambda } => {
                let beta = ONE + Complex64::from_polar(1.0, 2.0 * lambda);
                // 1 + (beta - 1) z = 1 + e^{2 i lam} z lies in the right half plane
                (-beta - 1.0) * ld + (ONE + (beta - ONE) * z).ln()
            }
            Self::Taylor { .. } => {
                let v1 = self.jet(z)?.v1;
                if v1 == ZERO {
                    return Err(Error::Domain(format!("f'({z}) = 0")));
                }
                v1.ln()
            }
        })
    }
}

/// `mu = e^{2 i lambda}` so that `f_lambda = f*_mu`; the exponent in the
/// extremal formula is `1 - 2 e^{i lam} cos lam = -mu`.
fn robertson_mu(lambda: f64) -> Complex64 {
    Complex64::from_polar(1.0, 2.0 * lambda)
}

/// `exp(w) - 1` without cancellation for small `|w|`.
fn exp_m1(w: Complex64) -> Complex64 {
    let re = w.re.exp_m1() * w.im.cos() - 2.0 * (0.5 * w.im).sin().powi(2);
    let im = w.re.exp() * w.im.sin();
    Complex64::new(re, im)
}

fn royster_jet(mu: Complex64, z: Complex64) -> Jet2 {
    let ld = (ONE - z).ln();
    Jet2 {
        v0: exp_m1(-mu * ld) / mu,
        v1: ((-mu - 1.0) * ld).exp(),
        v2: (mu + 1.0) * ((-mu - 2.0) * ld).exp(),
    }
}

fn spirallike_jet(lambda: f64, z: Complex64) -> Jet2 {
    let beta = ONE + Complex64::from_polar(1.0, 2.0 * lambda);
    let ld = (ONE - z).ln();
    let lin = ONE + (beta - ONE) * z;
    Jet2 {
        v0: z * (-beta * ld).exp(),
        v1: ((-beta - 1.0) * ld).exp() * lin,
        v2: ((-beta - 2.0) * ld).exp() * ((beta + 1.0) * lin + (beta - ONE) * (ONE - z)),
    }
}

fn taylor_jet(coeffs: &[Complex64], z: Complex64) -> Jet2 {
    // f = z q(z) with q = sum a_n z^{n-1}; one Horner pass carries q, q', q''
    let mut q = ZERO;
    let mut q1 = ZERO;
    let mut q2 = ZERO;
    for &a in coeffs.iter().rev() {
        q2 = q2 * z + q1 * 2.0;
        q1 = q1 * z + q;
        q = q * z + a;
    }
    Jet2 {
        v0: z * q,
        v1: q + z * q1,
        v2: q1 * 2.0 + z * q2,
    }
}

/// Principal-branch complex power `exp(alpha Log w)`, `Im Log w` in `(-pi, pi]`.
///
/// `w = 0` returns `0` when `Re alpha > 0` and a domain error otherwise.
pub fn principal_pow(w: Complex64, alpha: Complex64) -> Result<Complex64> {
    if w == ZERO {
        return if alpha.re > 0.0 {
            Ok(ZERO)
        } else {
            Err(Error::Domain("0^alpha with Re alpha <= 0".into()))
        };
    }
    Ok((alpha * w.ln()).exp())
}

/// The exponent `alpha = e^{-i lambda} / cos lambda` of the convexity route.
pub fn alpha_exponent(lambda: f64) -> Complex64 {
    Complex64::from_polar(1.0 / lambda.cos(), -lambda)
}

/// `g(z) = int_0^z f'(zeta)^alpha d zeta` along the radial segment.
///
/// The integrand uses the analytic branch of `log f'` anchored at
/// `log f'(0) = 0`; integration is adaptive Gauss-Kronrod with absolute
/// tolerance `1e-10`. Path independence holds because the integrand is
/// analytic on the disk.
pub fn alpha_primitive(f: &FunctionSpec, lambda: f64, z: Complex64) -> Result<Complex64> {
    check_lambda(lambda)?;
    if z.norm() >= 1.0 {
        return Err(Error::Domain(format!("|z| = {} >= 1", z.norm())));
    }
    if z == ZERO {
        return Ok(ZERO);
    }
    let alpha = alpha_exponent(lambda);
    // log_deriv failure poisons the sample with NaN and is rejected below
    let integrand = |t: f64| match f.log_deriv(z * t) {
        Ok(lg) => (alpha * lg).exp() * z,
        Err(_) => Complex64::new(f64::NAN, f64::NAN),
    };
    let q = quadrature::adaptive_gk15(&integrand, 0.0, 1.0, DEFAULT_QUAD_TOL, MAX_QUAD_SUBDIV)?;
    if q.value.is_finite() {
        Ok(q.value)
    } else {
        Err(Error::Domain("f' vanished along the integration segment".into()))
    }
}

const PROFILE_SEG_TOL: f64 = 1e-12;
const PROFILE_SEG_SUBDIV: usize = 1 << 12;

/// Cumulative alpha-primitive along the ray `rho e^{i theta}` at the given
/// increasing radii; one incremental integration per ray instead of one
/// full integral per point.
pub fn alpha_primitive_profile(
    f: &FunctionSpec,
    lambda: f64,
    theta: f64,
    radii: &[f64],
) -> Result<Vec<Complex64>> {
    check_lambda(lambda)?;
    if radii.is_empty() {
        return Ok(Vec::new());
    }
    if radii.windows(2).any(|w| w[0] >= w[1]) || radii[0] <= 0.0 {
        return Err(Error::Domain("radii must be positive and increasing".into()));
    }
    if *radii.last().unwrap() >= 1.0 {
        return Err(Error::Domain("radii must stay inside the disk".into()));
    }
    let dir = Complex64::from_polar(1.0, theta);
    let alpha = alpha_exponent(lambda);
    let integrand = |rho: f64| match f.log_deriv(dir * rho) {
        Ok(lg) => (alpha * lg).exp() * dir,
        Err(_) => Complex64::new(f64::NAN, f64::NAN),
    };
    let mut out = Vec::with_capacity(radii.len());
    let mut acc = ZERO;
    let mut prev = 0.0;
    for &r in radii {
        let q = quadrature::adaptive_gk15(&integrand, prev, r, PROFILE_SEG_TOL, PROFILE_SEG_SUBDIV)?;
        acc += q.value;
        if !acc.is_finite() {
            return Err(Error::Domain("f' vanished along the integration segment".into()));
        }
        out.push(acc);
        prev = r;
    }
    Ok(out)
}

// JSON shape: {"kind": "...", "lambda": f64 | "mu": [re, im] | "coeffs": [[re, im], ...]}
#[derive(Serialize, Deserialize)]
struct SpecRepr {
    kind: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    lambda: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    mu: Option<[f64; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    coeffs: Option<Vec<[f64; 2]>>,
}

impl Serialize for FunctionSpec {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let repr = match self {
            Self::RobertsonExtremal { lambda } => SpecRepr {
                kind: "robertson_extremal".into(),
                lambda: Some(*lambda),
                mu: None,
                coeffs: None,
            },
            Self::SpirallikeExtremal { lambda } => SpecRepr {
                kind: "spirallike_extremal".into(),
                lambda: Some(*lambda),
                mu: None,
                coeffs: None,
            },
            Self::Royster { mu } => SpecRepr {
                kind: "royster".into(),
                lambda: None,
                mu: Some([mu.re, mu.im]),
                coeffs: None,
            },
            Self::HalfPlane => SpecRepr { kind: "half_plane".into(), lambda: None, mu: None, coeffs: None },
            Self::Identity => SpecRepr { kind: "identity".into(), lambda: None, mu: None, coeffs: None },
            Self::Taylor { coeffs } => SpecRepr {
                kind: "taylor".into(),
                lambda: None,
                mu: None,
                coeffs: Some(coeffs.iter().map(|c| [c.re, c.im]).collect()),
            },
        };
        repr.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for FunctionSpec {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let repr = SpecRepr::deserialize(deserializer)?;
        let need_lambda = || {
            repr.lambda
                .ok_or_else(|| D::Error::custom(format!("kind {} needs \"lambda\"", repr.kind)))
        };
        let spec = match repr.kind.as_str() {
            "robertson_extremal" => FunctionSpec::robertson_extremal(need_lambda()?),
            "spirallike_extremal" => FunctionSpec::spirallike_extremal(need_lambda()?),
            "royster" => {
                let m = repr
                    .mu
                    .ok_or_else(|| D::Error::custom("kind royster needs \"mu\": [re, im]"))?;
                FunctionSpec::royster(Complex64::new(m[0], m[1]))
            }
            "half_plane" => Ok(FunctionSpec::HalfPlane),
            "identity" => Ok(FunctionSpec::Identity),
            "taylor" => {
                let cs = repr
                    .coeffs
                    .ok_or_else(|| D::Error::custom("kind taylor needs \"coeffs\""))?;
                FunctionSpec::taylor(cs.iter().map(|c| Complex64::new(c[0], c[1])).collect())
            }
            other => return Err(D::Error::custom(format!("unknown function kind {other:?}"))),
        };
        spec.map_err(|e| D::Error::custom(e.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::{FRAC_PI_3, PI};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn principal_pow_examples() {
        assert_eq!(principal_pow(ONE, c(0.0, 1.0)).unwrap(), ONE);
        let v = principal_pow(c(-1.0, 0.0), c(2.0, 0.0)).unwrap();
        assert!((v - ONE).norm() < 1e-12);
        // 2^{1+i} = 2 e^{i ln 2}
        let v = principal_pow(c(2.0, 0.0), c(1.0, 1.0)).unwrap();
        let ln2 = std::f64::consts::LN_2;
        let expect = c(2.0 * ln2.cos(), 2.0 * ln2.sin());
        assert!((v - expect).norm() < 1e-14);
        assert_relative_eq!(v.re, 1.5384778027279443, max_relative = 1e-12);
        assert_relative_eq!(v.im, 1.2779225526272696, max_relative = 1e-12);
    }

    #[test]
    fn principal_pow_zero_base() {
        assert_eq!(principal_pow(ZERO, c(2.0, 1.0)).unwrap(), ZERO);
        assert!(principal_pow(ZERO, c(-1.0, 0.0)).is_err());
        assert!(principal_pow(ZERO, c(0.0, 1.0)).is_err());
    }

    #[test]
    fn jet_zero_is_exact_for_all_kinds() {
        let specs = [
            FunctionSpec::robertson_extremal(0.3).unwrap(),
            FunctionSpec::spirallike_extremal(-0.8).unwrap(),
            FunctionSpec::royster(c(0.5, 0.5)).unwrap(),
            FunctionSpec::HalfPlane,
            FunctionSpec::Identity,
            FunctionSpec::taylor(vec![ONE, c(0.25, -0.5), c(0.0, 0.125)]).unwrap(),
        ];
        for f in &specs {
            let j = f.jet(ZERO).unwrap();
            assert_eq!(j.v0, ZERO);
            assert_eq!(j.v1, ONE);
            assert_eq!(j.v2, f.d2_at_zero());
        }
    }

    #[test]
    fn robertson_at_lambda_zero_is_half_plane_map() {
        let f = FunctionSpec::robertson_extremal(0.0).unwrap();
        let j = f.jet(c(0.5, 0.0)).unwrap();
        assert_relative_eq!(j.v0.re, 1.0, max_relative = 1e-14);
        assert!(j.v0.im.abs() < 1e-14);
    }

    #[test]
    fn spirallike_at_lambda_zero_is_koebe() {
        let f = FunctionSpec::spirallike_extremal(0.0).unwrap();
        let j = f.jet(c(0.5, 0.0)).unwrap();
        assert_relative_eq!(j.v0.re, 2.0, max_relative = 1e-14);
    }

    #[test]
    fn taylor_identity_jet() {
        let f = FunctionSpec::taylor(vec![ONE]).unwrap();
        let z = c(0.3, 0.4);
        let j = f.jet(z).unwrap();
        assert_eq!(j.v0, z);
        assert_eq!(j.v1, ONE);
        assert_eq!(j.v2, ZERO);
    }

    #[test]
    fn robertson_first_derivative_closed_form() {
        // f_lambda' = (1-z)^{-2 e^{i lam} cos lam}
        let lambda = 0.7;
        let f = FunctionSpec::robertson_extremal(lambda).unwrap();
        let expo = Complex64::from_polar(2.0 * lambda.cos(), lambda);
        for z in [c(0.4, 0.3), c(-0.7, 0.2), c(0.0, -0.9)] {
            let j = f.jet(z).unwrap();
            let expect = principal_pow(ONE - z, -expo).unwrap();
            assert!((j.v1 - expect).norm() <= 1e-13 * expect.norm());
        }
    }

    /// Central differences with step `h` as the independent derivative oracle.
    fn fd_jet(f: &FunctionSpec, z: Complex64, h: f64) -> (Complex64, Complex64) {
        let e = c(h, 0.0);
        let vp = f.jet(z + e).unwrap();
        let vm = f.jet(z - e).unwrap();
        let d1 = (vp.v0 - vm.v0) / (2.0 * h);
        let d2 = (vp.v1 - vm.v1) / (2.0 * h);
        (d1, d2)
    }

    #[test]
    fn jets_match_finite_differences() {
        let specs = [
            FunctionSpec::robertson_extremal(FRAC_PI_3).unwrap(),
            FunctionSpec::robertson_extremal(-0.45 * PI).unwrap(),
            FunctionSpec::spirallike_extremal(0.45 * PI).unwrap(),
            FunctionSpec::spirallike_extremal(-FRAC_PI_3).unwrap(),
            FunctionSpec::royster(c(-0.28, 0.96)).unwrap(),
            FunctionSpec::HalfPlane,
            FunctionSpec::taylor(vec![ONE, c(0.3, 0.1), c(-0.05, 0.2), c(0.01, -0.02)]).unwrap(),
        ];
        let points = [c(0.5, 0.0), c(-0.3, 0.62), c(0.1, -0.88), c(-0.99, 0.0), c(0.69, 0.69)];
        for f in &specs {
            for &z in &points {
                let j = f.jet(z).unwrap();
                let (d1, d2) = fd_jet(f, z, 1e-6);
                assert!(
                    (j.v1 - d1).norm() <= 1e-6 * j.v1.norm().max(1.0),
                    "{f:?} v1 mismatch at {z}"
                );
                assert!(
                    (j.v2 - d2).norm() <= 1e-6 * j.v2.norm().max(1.0),
                    "{f:?} v2 mismatch at {z}"
                );
            }
        }
    }

    #[test]
    fn jet_rejects_boundary() {
        let f = FunctionSpec::Identity;
        assert!(f.jet(c(1.0, 0.0)).is_err());
        assert!(f.jet(c(0.8, 0.8)).is_err());
    }

    #[test]
    fn taylor_requires_unit_first_coefficient() {
        assert!(FunctionSpec::taylor(vec![]).is_err());
        assert!(FunctionSpec::taylor(vec![c(0.99, 0.0)]).is_err());
        assert!(FunctionSpec::taylor(vec![ONE, c(2.0, 0.0)]).is_ok());
    }

    #[test]
    fn truncation_estimate_only_for_taylor() {
        let f = FunctionSpec::taylor(vec![ONE, c(2.0, 0.0)]).unwrap();
        let est = f.truncation_estimate(c(0.9, 0.0)).unwrap();
        assert_relative_eq!(est, 2.0 * 0.81 * 2.0, max_relative = 1e-12);
        assert!(FunctionSpec::Identity.truncation_estimate(c(0.9, 0.0)).is_none());
    }

    #[test]
    fn alpha_primitive_identity() {
        let v = alpha_primitive(&FunctionSpec::Identity, 0.9, c(0.5, 0.0)).unwrap();
        assert!((v - c(0.5, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn alpha_primitive_half_plane_case() {
        // f_0 with lambda = 0: alpha = 1, primitive of (1-z)^{-2} is z/(1-z)
        let f = FunctionSpec::robertson_extremal(0.0).unwrap();
        let v = alpha_primitive(&f, 0.0, c(0.3, 0.0)).unwrap();
        assert_relative_eq!(v.re, 0.3 / 0.7, max_relative = 1e-10);
        assert!(v.im.abs() < 1e-12);
    }

    #[test]
    fn alpha_primitive_extremal_collapses_to_half_plane() {
        // For f_lambda the alpha-power of f' is exactly (1-z)^{-2}, so the
        // primitive is z/(1-z) for every lambda.
        let lambda = FRAC_PI_3;
        let f = FunctionSpec::robertson_extremal(lambda).unwrap();
        for r in [0.1, 0.25, 0.5, 0.75, 0.9] {
            let z = c(0.5 * r, 0.45 * r);
            let v = alpha_primitive(&f, lambda, z).unwrap();
            let expect = z / (ONE - z);
            assert!((v - expect).norm() < 1e-9, "r = {r}: {v} vs {expect}");
        }
    }

    #[test]
    fn alpha_primitive_mixed_lambdas_match_closed_form() {
        // f_lambda integrated with a different lambda': integrand is
        // (1 - zeta)^{-cexp} with cexp = 2 e^{i lam} cos lam e^{-i lam'}/cos lam',
        // antiderivative ((1-z)^{1-cexp} - 1)/(cexp - 1).
        let lam = 0.5;
        let lam_p = -0.4;
        let f = FunctionSpec::robertson_extremal(lam).unwrap();
        let cexp = Complex64::from_polar(2.0 * lam.cos(), lam) * alpha_exponent(lam_p);
        for z in [c(0.4, 0.2), c(-0.6, 0.3)] {
            let got = alpha_primitive(&f, lam_p, z).unwrap();
            let expect =
                (principal_pow(ONE - z, ONE - cexp).unwrap() - ONE) / (cexp - ONE);
            assert!((got - expect).norm() < 1e-9);
        }
    }

    #[test]
    fn alpha_primitive_reproduces_f_at_lambda_zero() {
        let specs = [
            FunctionSpec::robertson_extremal(0.9).unwrap(),
            FunctionSpec::spirallike_extremal(-0.6).unwrap(),
            FunctionSpec::royster(c(0.2, 0.8)).unwrap(),
            FunctionSpec::HalfPlane,
            FunctionSpec::Identity,
        ];
        for f in &specs {
            for z in [c(0.45, 0.45), c(-0.9, 0.0), c(0.0, 0.63)] {
                let g = alpha_primitive(f, 0.0, z).unwrap();
                let v = f.jet(z).unwrap().v0;
                assert!((g - v).norm() < 1e-8, "{f:?} at {z}");
            }
        }
    }

    #[test]
    fn profile_matches_pointwise_primitive() {
        let f = FunctionSpec::spirallike_extremal(0.5).unwrap();
        let radii = [0.2, 0.5, 0.8, 0.93];
        let theta = 2.1;
        let prof = alpha_primitive_profile(&f, 0.5, theta, &radii).unwrap();
        for (r, g) in radii.iter().zip(&prof) {
            let z = Complex64::from_polar(*r, theta);
            let direct = alpha_primitive(&f, 0.5, z).unwrap();
            assert!((g - direct).norm() < 1e-9);
        }
    }

    #[test]
    fn spec_json_round_trip() {
        let specs = [
            FunctionSpec::robertson_extremal(FRAC_PI_3).unwrap(),
            FunctionSpec::royster(c(-0.28, 0.96)).unwrap(),
            FunctionSpec::taylor(vec![ONE, c(2.0, 0.0)]).unwrap(),
            FunctionSpec::Identity,
        ];
        for f in &specs {
            let js = serde_json::to_string(f).unwrap();
            let back: FunctionSpec = serde_json::from_str(&js).unwrap();
            assert_eq!(*f, back);
        }
        let js = r#"{"kind":"taylor","coeffs":[[1,0],[2,0]]}"#;
        let f: FunctionSpec = serde_json::from_str(js).unwrap();
        assert_eq!(f, FunctionSpec::taylor(vec![ONE, c(2.0, 0.0)]).unwrap());
        assert!(serde_json::from_str::<FunctionSpec>(r#"{"kind":"taylor","coeffs":[[3,0]]}"#).is_err());
        assert!(serde_json::from_str::<FunctionSpec>(r#"{"kind":"nope"}"#).is_err());
    }
}
