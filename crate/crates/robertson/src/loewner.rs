//! The explicit chain `f_t(z) = f(e^{-t} z) - e^{-2 i lambda} (e^t - e^{-t}) z f'(e^{-t} z)`
//! with exact time and space derivatives, its transition function
//! `p_t = df/dt / (z df/dz)`, the associated univalence inequality, and the
//! Herglotz-type disk checks used to control `p_t`.

use std::f64::consts::FRAC_PI_2;

use num_complex::Complex64;

use crate::analytic::FunctionSpec;
use crate::error::{Error, Result};
use crate::fmt::sig17;
use crate::report::{GridSpec, MembershipReport, Sample, SweepAccumulator};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Default time grid; the inequality is tightest at small `t`.
pub const DEFAULT_T_VALUES: [f64; 7] = [0.0, 0.1, 0.25, 0.5, 1.0, 2.0, 5.0];

fn check_lambda(lambda: f64) -> Result<()> {
    if !lambda.is_finite() || lambda.abs() >= FRAC_PI_2 {
        return Err(Error::Domain(format!("lambda = {lambda} outside (-pi/2, pi/2)")));
    }
    Ok(())
}

/// One evaluated chain sample. `p = df_dt / (z df_dz)` away from the
/// origin; at `z = 0`, `p` is the analytic limit (constant term of
/// `df_dt / z` over `df_dz(0)`).
#[derive(Debug, Clone, Copy)]
pub struct ChainSample {
    pub t: f64,
    pub z: Complex64,
    pub f_t: Complex64,
    pub df_dt: Complex64,
    pub df_dz: Complex64,
    pub p: Complex64,
}

/// Evaluate the chain and its exact derivatives at `(t, z)`.
///
/// All three derivatives come from differentiating the chain formula in
/// closed form; nothing on this path is numerical. The domain is
/// `|e^{-t} z| < 1`, which contains the unit disk for every `t >= 0` and
/// lets the plane extension evaluate boundary samples directly.
pub fn chain_eval(f: &FunctionSpec, lambda: f64, t: f64, z: Complex64) -> Result<ChainSample> {
    check_lambda(lambda)?;
    if !(t >= 0.0) {
        return Err(Error::Domain(format!("t = {t} must be >= 0")));
    }
    let em = (-t).exp();
    let ep = t.exp();
    let u = z * em;
    let jet = f.jet(u)?;
    let rot = Complex64::from_polar(1.0, -2.0 * lambda);
    let sh2 = ep - em; // e^t - e^{-t}
    let ch2 = ep + em;

    let f_t = jet.v0 - rot * sh2 * z * jet.v1;
    let df_dt = -u * jet.v1 - rot * (ch2 * z * jet.v1 - sh2 * z * u * jet.v2);
    let df_dz = em * jet.v1 - rot * sh2 * (jet.v1 + em * z * jet.v2);

    let p = if z == ZERO {
        // constant term of df_dt / z over df_dz(0); uses f'(0) = 1
        let denom = Complex64::new(em, 0.0) - rot * sh2;
        if denom == ZERO {
            return Err(Error::DegenerateChain { t, z });
        }
        (-Complex64::new(em, 0.0) - rot * ch2) / denom
    } else {
        let denom = z * df_dz;
        if denom == ZERO {
            return Err(Error::DegenerateChain { t, z });
        }
        df_dt / denom
    };

    Ok(ChainSample { t, z, f_t, df_dt, df_dz, p })
}

/// Sweep `Re p_t(z)` over `t_values x grid` (plus the origin at each `t`).
///
/// The verdict is boundary-aware: a minimum within tolerance of zero is
/// reported as `PassBoundary` rather than `Pass`, which is the honest
/// answer at `cos lambda = 1/2` where `p_0` is purely imaginary.
pub fn chain_positivity_report(
    f: &FunctionSpec,
    lambda: f64,
    t_values: &[f64],
    grid: &GridSpec,
    tol: f64,
) -> Result<MembershipReport> {
    check_lambda(lambda)?;
    let mut acc = SweepAccumulator::new();
    for &t in t_values {
        for z in std::iter::once(ZERO).chain(grid.points()) {
            match chain_eval(f, lambda, t, z) {
                Ok(s) => acc.add(z, Sample::Value(s.p.re)),
                Err(Error::DegenerateChain { .. }) => acc.add(z, Sample::Degenerate),
                Err(e) => return Err(e),
            }
        }
    }
    Ok(acc.finish("chain_positivity", grid, tol, true))
}

/// Left side of the univalence inequality:
/// `|e^{-2t} e^{2 i lambda} + 1 - (1 - e^{-2t})(1 + u f''(u)/f'(u))|` with
/// `u = e^{-t} z`. Values below 1 certify `Re p_t > 0` at the sample.
pub fn eq43_lhs(f: &FunctionSpec, lambda: f64, t: f64, z: Complex64) -> Result<f64> {
    check_lambda(lambda)?;
    if !(t >= 0.0) {
        return Err(Error::Domain(format!("t = {t} must be >= 0")));
    }
    let u = z * (-t).exp();
    let jet = f.jet(u)?;
    if jet.v1 == ZERO {
        return Err(Error::DegenerateChain { t, z });
    }
    let e2t = (-2.0 * t).exp();
    let rot2 = Complex64::from_polar(1.0, 2.0 * lambda);
    let val = rot2 * e2t + ONE - (ONE - Complex64::new(e2t, 0.0)) * (ONE + u * jet.v2 / jet.v1);
    Ok(val.norm())
}

/// Analytic test functions `p` with `p(0) = 1` for the disk lemmas.
#[derive(Debug, Clone, PartialEq)]
pub enum HerglotzSpec {
    /// `p == 1`.
    Constant,
    /// `(1 + e^{2 i lambda} phi z^n) / (1 - phi z^n)`, `|phi| <= 1`; the
    /// extremal family of the disk lemma.
    Mobius { lambda: f64, phi: Complex64, power: u32 },
    /// `1 + c_1 z + c_2 z^2 + ...`.
    Taylor { coeffs: Vec<Complex64> },
}

impl HerglotzSpec {
    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        if z.norm() >= 1.0 {
            return Err(Error::Domain(format!("|z| = {} >= 1", z.norm())));
        }
        Ok(match self {
            Self::Constant => ONE,
            Self::Mobius { lambda, phi, power } => {
                let w = phi * z.powu(*power);
                (ONE + Complex64::from_polar(1.0, 2.0 * lambda) * w) / (ONE - w)
            }
            Self::Taylor { coeffs } => {
                let mut v = ZERO;
                for &c in coeffs.iter().rev() {
                    v = v * z + c;
                }
                v * z + ONE
            }
        })
    }

    /// Index of the first Taylor coefficient after the constant that can be
    /// nonzero; `p = 1 + a_n z^n + ...` has order `n`.
    pub fn vanishing_order(&self) -> usize {
        match self {
            Self::Constant => usize::MAX,
            Self::Mobius { power, .. } => *power as usize,
            Self::Taylor { coeffs } => {
                coeffs
                    .iter()
                    .position(|c| *c != ZERO)
                    .map(|i| i + 1)
                    .unwrap_or(usize::MAX)
            }
        }
    }
}

/// Disk containment for Herglotz-type functions with
/// `Re e^{-i lambda} p > 0`: the margin
/// `radius(r) - |p(z) - center(r)|` with
/// `center = (1 + r^2 e^{2 i lambda})/(1 - r^2)` and
/// `radius = 2 r cos(lambda)/(1 - r^2)` must be nonnegative; the extremal
/// Mobius family achieves zero margin identically.
pub fn herglotz_disk_check(
    p: &HerglotzSpec,
    lambda: f64,
    grid: &GridSpec,
    tol: f64,
) -> Result<MembershipReport> {
    check_lambda(lambda)?;
    let rot2 = Complex64::from_polar(1.0, 2.0 * lambda);
    let mut acc = SweepAccumulator::new();
    for z in grid.points() {
        let r2 = z.norm_sqr();
        let center = (ONE + rot2 * r2) / (1.0 - r2);
        let radius = 2.0 * z.norm() * lambda.cos() / (1.0 - r2);
        let margin = radius - (p.eval(z)? - center).norm();
        acc.add(z, Sample::Value(margin));
    }
    Ok(acc.finish("herglotz_disk_margin", grid, tol, false))
}

/// Coefficient-gap bound for `p = 1 + a_n z^n + ...` with `Re p > 0`:
/// `p(z)` lies in the disk with center `1 + 2|z|^{2n}/(1 - |z|^{2n})` and
/// radius `2|z|^n/(1 - |z|^{2n})` (the classical Herglotz disk in the
/// variable `w = z^n`, by subordination); the margin radius minus distance
/// to center must be nonnegative. The `n = 1` real-axis reduction
/// `|2r/(1-r) - 2r^2/(1-r^2)| = 2r/(1-r^2)` pins the radius exponent.
pub fn lemma_b_check(
    p: &HerglotzSpec,
    n: u32,
    grid: &GridSpec,
    tol: f64,
) -> Result<MembershipReport> {
    if n == 0 {
        return Err(Error::Precondition("n must be positive".into()));
    }
    if p.vanishing_order() < n as usize {
        return Err(Error::Precondition(format!(
            "p has a nonzero coefficient below z^{n}"
        )));
    }
    let mut acc = SweepAccumulator::new();
    for z in grid.points() {
        let rn = z.norm().powi(n as i32);
        let center_shift = 2.0 * rn * rn / (1.0 - rn * rn);
        let radius = 2.0 * rn / (1.0 - rn * rn);
        let margin = radius - (p.eval(z)? - ONE - Complex64::new(center_shift, 0.0)).norm();
        acc.add(z, Sample::Value(margin));
    }
    Ok(acc.finish("coefficient_gap_margin", grid, tol, false))
}

/// CSV export of chain samples with the univalence inequality value:
/// `t,re z,im z,re f_t,im f_t,re p,im p,eq43_lhs`.
pub fn chain_samples_to_csv(rows: &[(ChainSample, f64)]) -> String {
    let mut out = String::from("t,re_z,im_z,re_f_t,im_f_t,re_p,im_p,eq43_lhs\n");
    for (s, lhs) in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{}\n",
            sig17(s.t),
            sig17(s.z.re),
            sig17(s.z.im),
            sig17(s.f_t.re),
            sig17(s.f_t.im),
            sig17(s.p.re),
            sig17(s.p.im),
            sig17(*lhs)
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::report::Verdict;
    use approx::assert_relative_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::{FRAC_PI_3, PI};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn grid() -> GridSpec {
        GridSpec::geometric(10, 0.99, 48).unwrap()
    }

    #[test]
    fn chain_starts_at_f() {
        let f = FunctionSpec::robertson_extremal(1.2).unwrap();
        for z in [c(0.3, 0.2), c(-0.9, 0.05), c(0.0, 0.7)] {
            let s = chain_eval(&f, 1.2, 0.0, z).unwrap();
            let v = f.jet(z).unwrap().v0;
            assert!((s.f_t - v).norm() <= 1e-14 * (1.0 + v.norm()));
        }
    }

    #[test]
    fn transition_function_at_t_zero_is_constant() {
        // p_0 = -1 - 2 e^{-2 i lambda}, independent of f and z
        let f = FunctionSpec::spirallike_extremal(0.3).unwrap();
        for lam in [0.4 * PI, FRAC_PI_3, 0.2 * PI] {
            let expect = -ONE - 2.0 * Complex64::from_polar(1.0, -2.0 * lam);
            for z in [ZERO, c(0.5, 0.1), c(-0.2, 0.8)] {
                let s = chain_eval(&f, lam, 0.0, z).unwrap();
                assert!((s.p - expect).norm() < 1e-12, "lam = {lam}, z = {z}");
            }
        }
        // golden-ratio check of the 0.4 pi case
        let s = chain_eval(&f, 0.4 * PI, 0.0, c(0.5, 0.0)).unwrap();
        assert_relative_eq!(s.p.re, 0.6180339887498949, max_relative = 1e-12);
        // boundary case cos lambda = 1/2: p_0 = i sqrt(3)
        let s = chain_eval(&f, FRAC_PI_3, 0.0, c(0.5, 0.0)).unwrap();
        assert!((s.p - c(0.0, 3f64.sqrt())).norm() < 1e-12);
    }

    #[test]
    fn identity_chain_closed_form() {
        let lam = 0.9;
        let rot = Complex64::from_polar(1.0, -2.0 * lam);
        for t in [0.0, 0.3, 2.0] {
            let z = c(0.4, -0.5);
            let s = chain_eval(&FunctionSpec::Identity, lam, t, z).unwrap();
            let em = (-t as f64).exp();
            let ep = (t as f64).exp();
            let expect_f = em * z - rot * (ep - em) * z;
            let expect_dt = -em * z - rot * (ep + em) * z;
            assert!((s.f_t - expect_f).norm() < 1e-13 * (1.0 + expect_f.norm()));
            assert!((s.df_dt - expect_dt).norm() < 1e-13 * (1.0 + expect_dt.norm()));
        }
    }

    #[test]
    fn pde_residual_vanishes() {
        // df_dt = z df_dz p by construction of p; the residual is pure roundoff
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let specs = [
            FunctionSpec::robertson_extremal(1.3).unwrap(),
            FunctionSpec::spirallike_extremal(-1.1).unwrap(),
            FunctionSpec::HalfPlane,
        ];
        for _ in 0..200 {
            let f = &specs[rng.gen_range(0..specs.len())];
            let lam = rng.gen_range(-1.4..1.4);
            let t = rng.gen_range(0.0..5.0);
            let r = rng.gen_range(0.05..0.99);
            let th = rng.gen_range(0.0..2.0 * PI);
            let z = Complex64::from_polar(r, th);
            let s = chain_eval(f, lam, t, z).unwrap();
            let residual = (s.df_dt - z * s.df_dz * s.p).norm();
            assert!(residual <= 1e-12 * (1.0 + s.df_dt.norm()), "residual {residual}");
        }
    }

    #[test]
    fn exact_derivatives_match_finite_differences() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let f = FunctionSpec::robertson_extremal(1.25).unwrap();
        let h = 1e-6;
        for _ in 0..60 {
            let lam = rng.gen_range(-1.3..1.3);
            let t = rng.gen_range(0.05..4.0);
            let z = Complex64::from_polar(rng.gen_range(0.1..0.95), rng.gen_range(0.0..2.0 * PI));
            let s = chain_eval(&f, lam, t, z).unwrap();
            let fd_t = (chain_eval(&f, lam, t + h, z).unwrap().f_t
                - chain_eval(&f, lam, t - h, z).unwrap().f_t)
                / (2.0 * h);
            assert!(
                (s.df_dt - fd_t).norm() <= 1e-6 * (1.0 + s.df_dt.norm()),
                "df_dt mismatch"
            );
            let e = c(h, 0.0);
            let fd_z = (chain_eval(&f, lam, t, z + e).unwrap().f_t
                - chain_eval(&f, lam, t, z - e).unwrap().f_t)
                / (2.0 * h);
            assert!(
                (s.df_dz - fd_z).norm() <= 1e-6 * (1.0 + s.df_dz.norm()),
                "df_dz mismatch"
            );
        }
    }

    #[test]
    fn positivity_passes_in_hypothesis_range() {
        let lam = 0.4 * PI; // cos lambda ~ 0.309
        let f = FunctionSpec::robertson_extremal(lam).unwrap();
        let rep = chain_positivity_report(&f, lam, &DEFAULT_T_VALUES, &grid(), 1e-9).unwrap();
        assert_eq!(rep.verdict, Verdict::Pass);
    }

    #[test]
    fn positivity_boundary_at_cos_half() {
        let lam = FRAC_PI_3;
        let f = FunctionSpec::robertson_extremal(lam).unwrap();
        let rep = chain_positivity_report(&f, lam, &[0.0], &grid(), 1e-9).unwrap();
        assert_eq!(rep.verdict, Verdict::PassBoundary);
        assert!(rep.min_value.abs() <= 1e-9);
    }

    #[test]
    fn positivity_fails_outside_hypothesis() {
        let lam = 0.2 * PI; // cos lambda ~ 0.809 > 1/2
        let f = FunctionSpec::robertson_extremal(lam).unwrap();
        let rep = chain_positivity_report(&f, lam, &[0.0], &grid(), 1e-9).unwrap();
        assert_eq!(rep.verdict, Verdict::Fail);
        let expect = -1.0 - 2.0 * (2.0 * lam).cos();
        assert_relative_eq!(rep.min_value, expect, max_relative = 1e-12);
    }

    #[test]
    fn eq43_at_t_zero_is_two_cos_lambda() {
        for lam in [0.1, FRAC_PI_3, -1.2] {
            for f in [FunctionSpec::Identity, FunctionSpec::robertson_extremal(lam).unwrap()] {
                let v = eq43_lhs(&f, lam, 0.0, c(0.37, -0.61)).unwrap();
                assert_relative_eq!(v, 2.0 * lam.cos(), max_relative = 1e-12);
            }
        }
    }

    #[test]
    fn eq43_decays_for_large_t() {
        let lam = FRAC_PI_3;
        let f = FunctionSpec::robertson_extremal(lam).unwrap();
        let v = eq43_lhs(&f, lam, 20.0, c(0.5, 0.0)).unwrap();
        assert!(v < 1e-7, "v = {v}");
    }

    #[test]
    fn eq43_below_one_iff_re_p_positive() {
        // bi-implication on a sweep, samples within margin of either
        // boundary excluded
        let margin = 1e-9;
        let f = FunctionSpec::robertson_extremal(0.45 * PI).unwrap();
        for &t in &[0.0, 0.5, 2.0] {
            for z in grid().points() {
                let lhs = eq43_lhs(&f, 0.45 * PI, t, z).unwrap();
                let re_p = chain_eval(&f, 0.45 * PI, t, z).unwrap().p.re;
                if (lhs - 1.0).abs() <= margin || re_p.abs() <= margin {
                    continue;
                }
                assert_eq!(lhs < 1.0, re_p > 0.0, "t = {t}, z = {z}");
            }
        }
    }

    #[test]
    fn normal_family_ratio_stabilizes() {
        // |f_t(z)|/e^t converges as t grows (leading coefficient growth)
        let lam = 0.4 * PI;
        let f = FunctionSpec::robertson_extremal(lam).unwrap();
        let z = c(0.43, 0.29);
        let r10 = chain_eval(&f, lam, 10.0, z).unwrap().f_t.norm() / (10.0_f64).exp();
        let r20 = chain_eval(&f, lam, 20.0, z).unwrap().f_t.norm() / (20.0_f64).exp();
        assert!((r10 - r20).abs() / r20 < 1e-3);
    }

    #[test]
    fn herglotz_constant_inside_disk_for_moderate_lambda() {
        // |1 - center| <= radius iff r |sin l| <= cos l; with r_max = 0.99
        // any |lambda| < pi/4 qualifies
        let rep = herglotz_disk_check(&HerglotzSpec::Constant, 0.6, &grid(), 1e-9).unwrap();
        assert_eq!(rep.verdict, Verdict::Pass);
    }

    #[test]
    fn herglotz_extremal_family_achieves_equality() {
        for lam in [0.0, 0.25 * PI, 0.45 * PI] {
            for k in 0..8 {
                let phi = Complex64::from_polar(1.0, 2.0 * PI * k as f64 / 8.0);
                let p = HerglotzSpec::Mobius { lambda: lam, phi, power: 1 };
                let rep = herglotz_disk_check(&p, lam, &grid(), 1e-9).unwrap();
                assert_eq!(rep.verdict, Verdict::Pass);
                // zero margin everywhere: min is ~0, not just > -tol
                assert!(rep.min_value.abs() < 1e-9, "lam {lam} phi {phi}: {}", rep.min_value);
            }
        }
    }

    #[test]
    fn herglotz_classical_case_is_lambda_zero() {
        // p = (1+z)/(1-z): |p - (1+r^2)/(1-r^2)| = 2r/(1-r^2) at z = +-r
        let p = HerglotzSpec::Mobius { lambda: 0.0, phi: ONE, power: 1 };
        for r in [0.3, 0.9] {
            for z in [c(r, 0.0), c(-r, 0.0)] {
                let v = p.eval(z).unwrap();
                let center = (1.0 + r * r) / (1.0 - r * r);
                let radius = 2.0 * r / (1.0 - r * r);
                assert_relative_eq!((v - c(center, 0.0)).norm(), radius, max_relative = 1e-12);
            }
        }
    }

    #[test]
    fn lemma_b_equality_cases() {
        // p == 1: both sides vanish
        let rep = lemma_b_check(&HerglotzSpec::Constant, 3, &grid(), 1e-9).unwrap();
        assert_eq!(rep.verdict, Verdict::Pass);

        // n = 1 and n = 2 extremals achieve equality on the real axis;
        // spot-check the classical identity 2r/(1-r) - 2r^2/(1-r^2) = 2r/(1-r^2)
        for n in [1u32, 2] {
            let p = HerglotzSpec::Mobius { lambda: 0.0, phi: ONE, power: n };
            let rep = lemma_b_check(&p, n, &grid(), 1e-9).unwrap();
            assert_eq!(rep.verdict, Verdict::Pass);
            assert!(rep.min_value.abs() < 1e-9, "n = {n}: min {}", rep.min_value);
            for r in [0.2, 0.7, 0.95] {
                let z = c(r, 0.0);
                let rn = r.powi(n as i32);
                let center_shift = 2.0 * rn * rn / (1.0 - rn * rn);
                let radius = 2.0 * rn / (1.0 - rn * rn);
                let dist = (p.eval(z).unwrap() - ONE - c(center_shift, 0.0)).norm();
                assert!((dist - radius).abs() < 1e-9, "n = {n}, r = {r}");
            }
        }
        let p1 = HerglotzSpec::Mobius { lambda: 0.0, phi: ONE, power: 1 };
        let r = 0.6_f64;
        let dist = (p1.eval(c(r, 0.0)).unwrap() - ONE - c(2.0 * r * r / (1.0 - r * r), 0.0)).norm();
        assert_relative_eq!(dist, 2.0 * r / (1.0 - r * r), max_relative = 1e-12);
    }

    #[test]
    fn lemma_b_detects_violated_precondition() {
        let p = HerglotzSpec::Taylor { coeffs: vec![c(0.5, 0.0)] }; // 1 + 0.5 z
        let err = lemma_b_check(&p, 2, &grid(), 1e-9).unwrap_err();
        assert!(matches!(err, Error::Precondition(_)));
    }

    #[test]
    fn chain_csv_layout() {
        let f = FunctionSpec::Identity;
        let s = chain_eval(&f, 0.5, 1.0, c(0.5, 0.0)).unwrap();
        let lhs = eq43_lhs(&f, 0.5, 1.0, c(0.5, 0.0)).unwrap();
        let csv = chain_samples_to_csv(&[(s, lhs)]);
        assert!(csv.starts_with("t,re_z,im_z,re_f_t,im_f_t,re_p,im_p,eq43_lhs\n"));
        assert_eq!(csv.lines().count(), 2);
    }
}
