//! Membership predicates for the spirallike, Robertson and convex classes.
//!
//! Each predicate sweeps its defining Re-functional over a polar grid and
//! returns a [`MembershipReport`]. A failing sweep certifies
//! non-membership; a passing sweep is evidence only, since the conditions
//! quantify over the whole open disk.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use num_complex::Complex64;

use crate::analytic::{alpha_primitive_profile, FunctionSpec};
use crate::error::{Error, Result};
use crate::report::{GridSpec, MembershipReport, Sample, SweepAccumulator};

/// Margin below zero tolerated by exact-jet sweeps.
pub const DEFAULT_MARGIN_TOL: f64 = 1e-9;
/// Looser margin for finite-difference sweeps.
pub const DEFAULT_FD_TOL: f64 = 1e-6;

/// Unwrapping gives up when a single angular step moves the raw argument
/// by more than this; the true jump is then indistinguishable from an
/// aliased one.
const UNWRAP_LIMIT: f64 = 0.95 * PI;

/// Finite-difference step for the numerically differentiated primitive.
const PRIMITIVE_FD_STEP: f64 = 1e-3;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

fn check_lambda(lambda: f64) -> Result<()> {
    if !lambda.is_finite() || lambda.abs() >= FRAC_PI_2 {
        return Err(Error::Domain(format!("lambda = {lambda} outside (-pi/2, pi/2)")));
    }
    Ok(())
}

/// Reduce an angle to the principal interval `(-pi, pi]`.
pub fn wrap_angle(x: f64) -> f64 {
    let y = x.rem_euclid(TAU);
    if y > PI {
        y - TAU
    } else {
        y
    }
}

/// The lambda-argument: the rotation angle `theta` placing `w` on the
/// rotated lambda-spiral `e^{i theta} gamma_lambda(R)`.
///
/// Writing `w = e^{i theta} e^{t e^{i lambda}}` gives `ln|w| = t cos lambda`
/// and `arg w = theta + t sin lambda`, hence
/// `theta = arg w - tan(lambda) ln|w|` (mod 2 pi); the principal value in
/// `(-pi, pi]` is returned.
pub fn lambda_arg(w: Complex64, lambda: f64) -> Result<f64> {
    check_lambda(lambda)?;
    if w == ZERO {
        return Err(Error::Domain("lambda-argument of 0".into()));
    }
    Ok(wrap_angle(w.arg() - lambda.tan() * w.norm().ln()))
}

/// `Re e^{-i lambda} (1 + z f''/f')` swept over the grid; the defining
/// functional of the lambda-Robertson class.
pub fn robertson_report(
    f: &FunctionSpec,
    lambda: f64,
    grid: &GridSpec,
    tol: f64,
) -> Result<MembershipReport> {
    check_lambda(lambda)?;
    let rot = Complex64::from_polar(1.0, -lambda);
    let mut acc = SweepAccumulator::new();
    for z in grid.points() {
        let j = f.jet(z)?;
        let sample = if j.v1 == ZERO {
            Sample::Degenerate
        } else {
            Sample::Value((rot * (ONE + z * j.v2 / j.v1)).re)
        };
        acc.add(z, sample);
    }
    Ok(acc.finish("robertson", grid, tol, false))
}

/// `Re e^{-i lambda} (z f'/f)` swept over the grid; the defining functional
/// of the lambda-spirallike class. At `z = 0` the functional continues
/// analytically to `cos lambda`.
pub fn spirallike_report(
    f: &FunctionSpec,
    lambda: f64,
    grid: &GridSpec,
    tol: f64,
) -> Result<MembershipReport> {
    check_lambda(lambda)?;
    let rot = Complex64::from_polar(1.0, -lambda);
    let mut acc = SweepAccumulator::new();
    for z in grid.points() {
        let j = f.jet(z)?;
        let sample = if z == ZERO {
            Sample::Value(lambda.cos())
        } else if j.v0 == ZERO {
            Sample::Degenerate
        } else {
            Sample::Value((rot * (z * j.v1 / j.v0)).re)
        };
        acc.add(z, sample);
    }
    Ok(acc.finish("spirallike", grid, tol, false))
}

/// The three routes of the equivalence chain, evaluated on the same grid.
#[derive(Debug, Clone)]
pub struct EquivalenceChecks {
    /// `f` in `R(lambda)` via the Robertson functional.
    pub robertson: MembershipReport,
    /// `z f'` in `SP(lambda)` via the spirallike functional of `z f'`.
    pub shifted_spirallike: MembershipReport,
    /// The alpha-primitive in the convex class, differentiated numerically.
    pub primitive_convexity: MembershipReport,
}

impl EquivalenceChecks {
    /// All three routes must agree for the chain to be verified.
    pub fn verdicts_agree(&self) -> bool {
        let a = self.robertson.verdict.passed();
        a == self.shifted_spirallike.verdict.passed()
            && a == self.primitive_convexity.verdict.passed()
    }
}

/// Verify the equivalence chain:
/// `f in R(lambda)  <=>  z f' in SP(lambda)  <=>  int f'^alpha in K`.
///
/// Route (b) evaluates `z (z f')' / (z f')` from the jets of `f`; route (c)
/// integrates `f'^alpha` radially and differentiates the primitive by
/// central differences, so it exercises the quadrature path rather than the
/// algebraic identity.
pub fn equivalence_check(
    f: &FunctionSpec,
    lambda: f64,
    grid: &GridSpec,
    tol: f64,
) -> Result<EquivalenceChecks> {
    check_lambda(lambda)?;
    let robertson = robertson_report(f, lambda, grid, tol)?;

    // (b): g = z f', spirallike functional z g'/g = (f' + z f'')/f'
    let rot = Complex64::from_polar(1.0, -lambda);
    let mut acc = SweepAccumulator::new();
    for z in grid.points() {
        let j = f.jet(z)?;
        let g0 = z * j.v1;
        let sample = if g0 == ZERO {
            Sample::Degenerate
        } else {
            let g1 = j.v1 + z * j.v2;
            Sample::Value((rot * (z * g1 / g0)).re)
        };
        acc.add(z, sample);
    }
    let shifted_spirallike = acc.finish("zfprime_spirallike", grid, tol, false);

    let primitive_convexity = primitive_convexity_report(f, lambda, grid, tol)?;

    Ok(EquivalenceChecks { robertson, shifted_spirallike, primitive_convexity })
}

/// Convexity sweep `Re(1 + z g''/g')` of the alpha-primitive `g`, with `g'`
/// and `g''` obtained from radial central differences of the primitive
/// itself (one cumulative integration per ray).
fn primitive_convexity_report(
    f: &FunctionSpec,
    lambda: f64,
    grid: &GridSpec,
    tol: f64,
) -> Result<MembershipReport> {
    let r_min = grid.r_values[0];
    let h = PRIMITIVE_FD_STEP.min(0.5 * r_min);
    // interleaved radii r_k - h, r_k, r_k + h; sorted once, slots remembered
    let mut tagged: Vec<(f64, usize)> = Vec::with_capacity(3 * grid.r_values.len());
    for (k, &r) in grid.r_values.iter().enumerate() {
        tagged.push((r - h, 3 * k));
        tagged.push((r, 3 * k + 1));
        tagged.push((r + h, 3 * k + 2));
    }
    tagged.sort_by(|a, b| a.0.total_cmp(&b.0));
    let radii: Vec<f64> = tagged.iter().map(|t| t.0).collect();

    let mut acc = SweepAccumulator::new();
    for jt in 0..grid.n_theta {
        let theta = grid.theta(jt);
        let dir = Complex64::from_polar(1.0, theta);
        let profile = alpha_primitive_profile(f, lambda, theta, &radii)?;
        let mut slots = vec![ZERO; radii.len()];
        for (pos, &(_, slot)) in tagged.iter().enumerate() {
            slots[slot] = profile[pos];
        }
        for (k, &r) in grid.r_values.iter().enumerate() {
            let z = dir * r;
            let gm = slots[3 * k];
            let g0 = slots[3 * k + 1];
            let gp = slots[3 * k + 2];
            let d1 = (gp - gm) / (2.0 * h * dir);
            let d2 = (gp - 2.0 * g0 + gm) / (h * h * dir * dir);
            let sample = if d1.norm() == 0.0 {
                Sample::Degenerate
            } else {
                Sample::Value((ONE + z * d2 / d1).re)
            };
            acc.add(z, sample);
        }
    }
    Ok(acc.finish("alpha_primitive_convexity", grid, tol, false))
}

/// Which form of the lambda-argument monotonicity to test.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArgVariant {
    /// `d/d theta arg_lambda f(r e^{i theta}) > 0` (spirallike form).
    Direct,
    /// `d/d theta arg_lambda (d/d theta f(r e^{i theta})) > 0` (Robertson form).
    Derivative,
}

/// Estimate `d/d theta` of the unwrapped lambda-argument by central
/// differences along each grid circle and report the minimum.
///
/// Only `arg w` carries a branch ambiguity; it is continued
/// nearest-branch along the circle and the spiral correction
/// `tan(lambda) ln|w|` is added afterwards. A raw argument step larger
/// than [`UNWRAP_LIMIT`] aborts with a grid-too-coarse error.
pub fn monotone_lambda_arg_check(
    f: &FunctionSpec,
    lambda: f64,
    grid: &GridSpec,
    variant: ArgVariant,
    tol: f64,
) -> Result<MembershipReport> {
    check_lambda(lambda)?;
    let n = grid.n_theta;
    let d_theta = TAU / n as f64;
    let tan_l = lambda.tan();
    let mut acc = SweepAccumulator::new();

    for &r in &grid.r_values {
        let mut w = Vec::with_capacity(n);
        let mut degenerate = None;
        for j in 0..n {
            let z = Complex64::from_polar(r, grid.theta(j));
            let jet = f.jet(z)?;
            let wj = match variant {
                ArgVariant::Direct => jet.v0,
                // d/d theta f(r e^{i theta}) = i z f'(z)
                ArgVariant::Derivative => Complex64::new(0.0, 1.0) * z * jet.v1,
            };
            if wj == ZERO {
                degenerate = Some(z);
                break;
            }
            w.push(wj);
        }
        if let Some(z) = degenerate {
            acc.add(z, Sample::Degenerate);
            continue;
        }

        // unwrap arg w around the circle, indices taken mod n
        let mut args = Vec::with_capacity(n + 1);
        args.push(w[0].arg());
        for j in 1..=n {
            let raw = w[j % n].arg();
            let prev_raw = w[(j - 1) % n].arg();
            let delta = wrap_angle(raw - prev_raw);
            if delta.abs() > UNWRAP_LIMIT {
                return Err(Error::GridTooCoarse { jump: delta.abs(), index: j });
            }
            args.push(args[j - 1] + delta);
        }
        let closure = args[n] - args[0]; // 2 pi times the winding number

        let h_at = |j: isize| -> f64 {
            // lambda-argument on the continued branch; winding offset past the seam
            let (idx, offset) = if j < 0 {
                ((j + n as isize) as usize, -closure)
            } else if j >= n as isize {
                ((j - n as isize) as usize, closure)
            } else {
                (j as usize, 0.0)
            };
            args[idx] + offset - tan_l * w[idx].norm().ln()
        };

        for j in 0..n {
            let deriv = (h_at(j as isize + 1) - h_at(j as isize - 1)) / (2.0 * d_theta);
            let z = Complex64::from_polar(r, grid.theta(j));
            acc.add(z, Sample::Value(deriv));
        }
    }

    let name = match variant {
        ArgVariant::Direct => "monotone_lambda_arg",
        ArgVariant::Derivative => "monotone_lambda_arg_derivative",
    };
    Ok(acc.finish(name, grid, tol, false))
}
