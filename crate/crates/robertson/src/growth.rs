//! Growth envelopes, the boundedness integral, the cubic threshold root,
//! and Royster's non-univalent construction with its collision search.

use std::f64::consts::FRAC_PI_2;

use num_complex::Complex64;

use crate::analytic::FunctionSpec;
use crate::error::{Error, Result};
use crate::fmt::sig17;
use crate::quadrature::{adaptive_gk15_real, MAX_QUAD_SUBDIV};
use crate::report::GridSpec;

const ONE: Complex64 = Complex64::new(1.0, 0.0);

fn check_lambda(lambda: f64) -> Result<()> {
    if !lambda.is_finite() || lambda.abs() >= FRAC_PI_2 {
        return Err(Error::Domain(format!("lambda = {lambda} outside (-pi/2, pi/2)")));
    }
    Ok(())
}

/// Sharp modulus bounds `psi_lo <= |f(z)| <= psi_hi` on `|z| = r` for
/// `f` lambda-spirallike, together with the extremal angles.
///
/// The angles satisfy `sin(lambda + theta_j) = r sin(lambda)` with
/// `cos(lambda + theta_1) < 0 < cos(lambda + theta_2)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GrowthEnvelope {
    pub r: f64,
    pub psi_lo: f64,
    pub psi_hi: f64,
    pub theta_lo: f64,
    pub theta_hi: f64,
}

fn wrap_angle(x: f64) -> f64 {
    let y = x.rem_euclid(std::f64::consts::TAU);
    if y > std::f64::consts::PI {
        y - std::f64::consts::TAU
    } else {
        y
    }
}

/// Growth envelope of the spirallike class at radius `r`, obtained by direct
/// evaluation of the extremal map at the extremal angles (the authoritative
/// path; `growth_bounds_closed_form` carries the explicit formulas).
pub fn growth_bounds(lambda: f64, r: f64) -> Result<GrowthEnvelope> {
    check_lambda(lambda)?;
    if !(0.0..1.0).contains(&r) || r == 0.0 {
        return Err(Error::Domain(format!("r = {r} outside (0, 1)")));
    }
    let a = (r * lambda.sin()).asin();
    let theta_hi = wrap_angle(a - lambda);
    let theta_lo = wrap_angle(std::f64::consts::PI - a - lambda);
    let p = FunctionSpec::spirallike_extremal(lambda)?;
    let psi_lo = p.jet(Complex64::from_polar(r, theta_lo))?.v0.norm();
    let psi_hi = p.jet(Complex64::from_polar(r, theta_hi))?.v0.norm();
    Ok(GrowthEnvelope { r, psi_lo, psi_hi, theta_lo, theta_hi })
}

/// Closed forms `(psi_lo, psi_hi)` for the envelope:
///
/// `psi_lo = r exp(-sin 2l asin(r sin l)) / (sqrt(1 - r^2 sin^2 l) + r cos l)^{2 cos^2 l}`
/// `psi_hi = r exp(+sin 2l asin(r sin l)) / (sqrt(1 - r^2 sin^2 l) - r cos l)^{2 cos^2 l}`
///
/// The denominator bases keep the `sqrt` term first so they stay positive
/// for every `r < 1`; the `lambda = 0` Koebe reduction
/// `r/(1+r)^2 <= |f| <= r/(1-r)^2` pins the signs.
pub fn growth_bounds_closed_form(lambda: f64, r: f64) -> Result<(f64, f64)> {
    check_lambda(lambda)?;
    if !(0.0..1.0).contains(&r) || r == 0.0 {
        return Err(Error::Domain(format!("r = {r} outside (0, 1)")));
    }
    let sl = lambda.sin();
    let cl = lambda.cos();
    let s2 = (2.0 * lambda).sin();
    let a = (r * sl).asin();
    let root = (1.0 - r * r * sl * sl).sqrt();
    let expo = 2.0 * cl * cl;
    let lo = r * (-s2 * a).exp() / (root + r * cl).powf(expo);
    let hi = r * (s2 * a).exp() / (root - r * cl).powf(expo);
    Ok((lo, hi))
}

/// CSV export of a family of envelopes: `r,psi_lo,psi_hi,theta_lo,theta_hi`.
pub fn envelopes_to_csv(rows: &[GrowthEnvelope]) -> String {
    let mut out = String::from("r,psi_lo,psi_hi,theta_lo,theta_hi\n");
    for e in rows {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            sig17(e.r),
            sig17(e.psi_lo),
            sig17(e.psi_hi),
            sig17(e.theta_lo),
            sig17(e.theta_hi)
        ));
    }
    out
}

/// Where the boundedness integrand splits into a regular part and the
/// analytic power model of its endpoint singularity.
const SPLIT_DELTA: f64 = 1e-3;
const INTEGRAL_TOL: f64 = 1e-11;

/// numerator `exp(sin(2 lambda) asin(t sin lambda))`
fn bound_num(lambda: f64, t: f64) -> f64 {
    ((2.0 * lambda).sin() * (t * lambda.sin()).asin()).exp()
}

/// `sqrt(1 - t^2 sin^2 l) - t cos l`, rationalized to avoid cancellation:
/// `(1 - t^2) / (sqrt(1 - t^2 sin^2 l) + t cos l)`.
fn bound_base(lambda: f64, t: f64) -> f64 {
    let sl = lambda.sin();
    (1.0 - t * t) / ((1.0 - t * t * sl * sl).sqrt() + t * lambda.cos())
}

/// `phi(s) = h(1-s) s^gamma` where `h` is the integrand; smooth through 0,
/// with `phi(0) = exp(sin 2l asin(sin l)) cos(l)^gamma`.
fn bound_phi(lambda: f64, s: f64) -> f64 {
    let sl = lambda.sin();
    let cl = lambda.cos();
    let t = 1.0 - s;
    let gamma = 2.0 * cl * cl;
    let ratio = ((1.0 - t * t * sl * sl).sqrt() + t * cl) / (2.0 - s);
    bound_num(lambda, t) * ratio.powf(gamma)
}

fn bound_phi0(lambda: f64) -> f64 {
    let cl = lambda.cos();
    bound_num(lambda, 1.0) * cl.powf(2.0 * cl * cl)
}

/// `int_{s_lo}^{delta} s^{-gamma} ds` in closed form.
fn power_tail(gamma: f64, s_lo: f64, delta: f64) -> f64 {
    if (gamma - 1.0).abs() < 1e-14 {
        (delta / s_lo).ln()
    } else {
        (delta.powf(1.0 - gamma) - s_lo.powf(1.0 - gamma)) / (1.0 - gamma)
    }
}

/// The boundedness integral
/// `I(r) = int_0^r exp(sin 2l asin(t sin l)) / (sqrt(1 - t^2 sin^2 l) - t cos l)^{2 cos^2 l} dt`.
///
/// Near `t = 1` the base behaves like `(1-t)/cos l`, so the integrand has an
/// algebraic endpoint singularity of exponent `gamma = 2 cos^2 l`. The last
/// `SPLIT_DELTA` of the range is integrated in the variable `s = 1 - t` with
/// the singular power split off analytically; `r = 1` is admitted only for
/// `gamma < 1` and reported as divergent otherwise.
pub fn boundedness_integral(lambda: f64, r: f64) -> Result<f64> {
    check_lambda(lambda)?;
    if !(0.0 < r && r <= 1.0) {
        return Err(Error::Domain(format!("r = {r} outside (0, 1]")));
    }
    let cl = lambda.cos();
    let gamma = 2.0 * cl * cl;
    // exponents within one rounding step of 1 are the cos lambda = 1/sqrt(2)
    // boundary, where no boundedness claim is made
    if r == 1.0 && gamma >= 1.0 - 1e-12 {
        return Err(Error::DivergentIntegral(format!(
            "endpoint exponent 2 cos^2 lambda = {gamma} >= 1 (cos lambda >= 1/sqrt(2))"
        )));
    }
    let h = |t: f64| bound_num(lambda, t) / bound_base(lambda, t).powf(gamma);
    let cut = (1.0 - SPLIT_DELTA).min(r);
    let (mut total, _) = adaptive_gk15_real(&h, 0.0, cut, INTEGRAL_TOL, MAX_QUAD_SUBDIV)?;
    if r > cut {
        let s_lo = 1.0 - r;
        let phi0 = bound_phi0(lambda);
        if s_lo > 0.0 {
            let reg = |s: f64| (bound_phi(lambda, s) - phi0) * s.powf(-gamma);
            let (reg_part, _) =
                adaptive_gk15_real(&reg, s_lo, SPLIT_DELTA, INTEGRAL_TOL, MAX_QUAD_SUBDIV)?;
            total += reg_part + phi0 * power_tail(gamma, s_lo, SPLIT_DELTA);
        } else {
            // r = 1, gamma < 1: the regular part integrates through s = 0
            let reg = |s: f64| (bound_phi(lambda, s) - phi0) * s.powf(-gamma);
            let (reg_part, _) =
                adaptive_gk15_real(&reg, 0.0, SPLIT_DELTA, INTEGRAL_TOL, MAX_QUAD_SUBDIV)?;
            total += reg_part + phi0 * SPLIT_DELTA.powf(1.0 - gamma) / (1.0 - gamma);
        }
    }
    Ok(total)
}

/// Analytic model of one tail slice: `int_{s1}^{s0} phi(0) s^{-gamma} ds`.
/// Differences `I(1 - s1) - I(1 - s0)` approach this as `s -> 0`.
pub fn boundedness_tail_model(lambda: f64, s1: f64, s0: f64) -> Result<f64> {
    check_lambda(lambda)?;
    if !(0.0 < s1 && s1 < s0 && s0 < 1.0) {
        return Err(Error::Domain(format!("need 0 < s1 < s0 < 1, got {s1}, {s0}")));
    }
    let gamma = 2.0 * lambda.cos().powi(2);
    Ok(bound_phi0(lambda) * power_tail(gamma, s1, s0))
}

/// `g(s) cos(lambda) / s` with `g(s) = sqrt(1 - (1-s)^2 sin^2 l) - (1-s) cos l`;
/// tends to 1 as `s -> 0` with a linear remainder.
pub fn asymptotic_check(lambda: f64, s: f64) -> Result<f64> {
    check_lambda(lambda)?;
    if !(0.0 < s && s <= 0.5) {
        return Err(Error::Domain(format!("s = {s} outside (0, 0.5]")));
    }
    let t = 1.0 - s;
    let g = (1.0 - t * t * lambda.sin().powi(2)).sqrt() - t * lambda.cos();
    Ok(g * lambda.cos() / s)
}

/// The unique positive root of `16 x^3 + 16 x^2 + x - 1`, by bisection on
/// `[0, 1]` to `1e-12`. A scan certifies the sign changes exactly once.
pub fn cubic_root_x0() -> f64 {
    let p = |x: f64| 16.0 * x.powi(3) + 16.0 * x * x + x - 1.0;
    let mut sign_changes = 0;
    let mut prev = p(0.0);
    for k in 1..=1000 {
        let cur = p(k as f64 / 1000.0);
        if prev < 0.0 && cur >= 0.0 || prev >= 0.0 && cur < 0.0 {
            sign_changes += 1;
        }
        prev = cur;
    }
    assert_eq!(sign_changes, 1, "cubic must cross zero exactly once on (0, 1)");

    let (mut lo, mut hi) = (0.0_f64, 1.0_f64);
    while hi - lo > 1e-12 {
        let mid = 0.5 * (lo + hi);
        if p(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Royster parameter for a non-univalent member of `R(lambda)`:
/// `mu + 1 = |mu + 1| e^{i lambda}`, `|mu| <= 1`, `|mu + 1| > 1`, `|mu - 1| > 1`.
///
/// For `|sin lambda| > 1/2` the choice `mu = e^{2 i lambda}` (radius
/// `R = |mu + 1| = 2 cos lambda`) satisfies everything. Otherwise a scan
/// over `R` in `(1, 2 cos lambda]` looks for an admissible radius and the
/// failure, if any, names the violated constraint.
pub fn royster_mu(lambda: f64) -> Result<Complex64> {
    check_lambda(lambda)?;
    let cl = lambda.cos();
    if !(0.5 < cl && cl < 1.0) {
        return Err(Error::Precondition(format!(
            "cos lambda = {cl} outside (1/2, 1)"
        )));
    }
    let verify = |mu: Complex64| -> Result<Complex64> {
        let r_plus = (mu + ONE).norm();
        let r_minus = (mu - ONE).norm();
        if mu.norm() > 1.0 + 1e-12 {
            return Err(Error::NoAdmissibleMu(format!("|mu| = {} > 1", mu.norm())));
        }
        if r_plus <= 1.0 {
            return Err(Error::NoAdmissibleMu(format!("|mu + 1| = {r_plus} <= 1")));
        }
        if r_minus <= 1.0 {
            return Err(Error::NoAdmissibleMu(format!("|mu - 1| = {r_minus} <= 1")));
        }
        let arg_err = (mu + ONE).arg() - lambda;
        if arg_err.abs() > 1e-12 {
            return Err(Error::NoAdmissibleMu(format!(
                "arg(mu + 1) off lambda by {arg_err:e}"
            )));
        }
        Ok(mu)
    };

    if lambda.sin().abs() > 0.5 {
        // mu = e^{2 i lambda}: |mu| = 1, |mu + 1| = 2 cos l > 1,
        // |mu - 1| = 2 |sin l| > 1
        return verify(Complex64::from_polar(1.0, 2.0 * lambda));
    }
    // scan R in (1, 2 cos lambda]: mu = R e^{i lambda} - 1
    let r_hi = 2.0 * cl;
    let steps = 4000;
    for k in 1..steps {
        let r = 1.0 + (r_hi - 1.0) * k as f64 / steps as f64;
        let mu = Complex64::from_polar(r, lambda) - ONE;
        if verify(mu).is_ok() {
            return Ok(mu);
        }
    }
    Err(Error::NoAdmissibleMu(format!(
        "no admissible radius in (1, {r_hi}] for lambda = {lambda}"
    )))
}

/// A refined near-collision: two separated preimages with (numerically)
/// equal images.
#[derive(Debug, Clone, Copy)]
pub struct CollisionPair {
    pub z1: Complex64,
    pub z2: Complex64,
    /// `|f(z1) - f(z2)|` after refinement.
    pub image_gap: f64,
}

/// Relative tolerance accepted for a reported collision.
pub const COLLISION_TOL_REL: f64 = 1e-4;
const REFINE_MAX_ITERS: usize = 200;
const REFINE_HALVINGS: usize = 50;
const REFINE_RADIUS_CAP: f64 = 0.99999;
const SEED_COUNT: usize = 32;

/// Search for `z1 != z2` in the disk with `f(z1) = f(z2)` (within
/// `COLLISION_TOL_REL` relative) and `|z1 - z2| >= separation`.
///
/// Grid pairs are ranked by `|f(z1) - f(z2)|` relative to the geometric
/// scale `|z1 - z2| (|f'(z1)| + |f'(z2)|)/2`, which singles out pairs whose
/// images are close across different sheets rather than neighbors along one
/// sheet. The best seeds are refined by coordinate descent on
/// `|f(z1) - f(z2)|^2` with step halving; iterates may leave the grid's
/// radius but stay strictly inside the disk. Absence of a collision is a
/// valid result (`None`).
pub fn collision_search(
    f: &FunctionSpec,
    grid: &GridSpec,
    separation: f64,
) -> Result<Option<CollisionPair>> {
    if separation <= 0.0 {
        return Err(Error::Precondition(format!("separation = {separation} <= 0")));
    }
    let mut zs = Vec::with_capacity(grid.len());
    let mut vals = Vec::with_capacity(grid.len());
    let mut ders = Vec::with_capacity(grid.len());
    for z in grid.points() {
        let j = f.jet(z)?;
        zs.push(z);
        vals.push(j.v0);
        ders.push(j.v1.norm());
    }

    // worst-kept-small list of (badness, i, j)
    let mut seeds: Vec<(f64, usize, usize)> = Vec::with_capacity(SEED_COUNT + 1);
    let n = zs.len();
    for i in 0..n {
        for j in (i + 1)..n {
            let dz = (zs[i] - zs[j]).norm();
            if dz < separation {
                continue;
            }
            let scale = dz * 0.5 * (ders[i] + ders[j]);
            if scale <= 0.0 {
                continue;
            }
            let badness = (vals[i] - vals[j]).norm() / scale;
            if seeds.len() < SEED_COUNT || badness < seeds.last().unwrap().0 {
                let pos = seeds.partition_point(|s| s.0 < badness);
                seeds.insert(pos, (badness, i, j));
                seeds.truncate(SEED_COUNT);
            }
        }
    }

    let mut best: Option<CollisionPair> = None;
    for &(_, i, j) in &seeds {
        if let Some(pair) = refine_pair(f, zs[i], zs[j], separation) {
            let tol = COLLISION_TOL_REL * (1.0 + f.jet(pair.z1).map(|j| j.v0.norm()).unwrap_or(0.0));
            if pair.image_gap < tol
                && best.as_ref().map_or(true, |b| pair.image_gap < b.image_gap)
            {
                best = Some(pair);
            }
        }
    }
    Ok(best)
}

fn clamp_disk(z: Complex64) -> Complex64 {
    let r = z.norm();
    if r > REFINE_RADIUS_CAP {
        z * (REFINE_RADIUS_CAP / r)
    } else {
        z
    }
}

/// Coordinate descent on `|f(z1) - f(z2)|^2`: Newton steps toward the other
/// point's value, halved until they decrease the gap, subject to the disk
/// cap and the separation constraint.
fn refine_pair(
    f: &FunctionSpec,
    mut z1: Complex64,
    mut z2: Complex64,
    separation: f64,
) -> Option<CollisionPair> {
    let value = |z: Complex64| f.jet(z).ok().map(|j| (j.v0, j.v1));
    let (mut f1, _) = value(z1)?;
    let (mut f2, _) = value(z2)?;

    for _ in 0..REFINE_MAX_ITERS {
        let gap = (f1 - f2).norm();
        if gap <= 1e-13 * (1.0 + f1.norm()) {
            break;
        }
        let mut improved = false;
        for coord in 0..2 {
            let (zc, fc, target) = if coord == 0 { (z1, f1, f2) } else { (z2, f2, f1) };
            let Some((_, der)) = value(zc) else { continue };
            if der.norm() < 1e-300 {
                continue;
            }
            let newton = (fc - target) / der;
            let mut sigma = 1.0;
            let err0 = (fc - target).norm();
            for _ in 0..REFINE_HALVINGS {
                let cand = clamp_disk(zc - newton * sigma);
                let sep_ok = if coord == 0 {
                    (cand - z2).norm() >= separation
                } else {
                    (z1 - cand).norm() >= separation
                };
                if sep_ok {
                    if let Some((fv, _)) = value(cand) {
                        if (fv - target).norm() < err0 {
                            if coord == 0 {
                                z1 = cand;
                                f1 = fv;
                            } else {
                                z2 = cand;
                                f2 = fv;
                            }
                            improved = true;
                            break;
                        }
                    }
                }
                sigma *= 0.5;
            }
        }
        if !improved {
            break;
        }
    }

    let gap = (f1 - f2).norm();
    ((z1 - z2).norm() >= separation).then_some(CollisionPair { z1, z2, image_gap: gap })
}
