//! Property tests for the algebraic invariants.

use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use robertson::analytic::{principal_pow, FunctionSpec};
use robertson::classes::{equivalence_check, lambda_arg, wrap_angle, DEFAULT_MARGIN_TOL};
use robertson::report::GridSpec;

const ONE: Complex64 = Complex64::new(1.0, 0.0);

fn repeated_multiplication(w: Complex64, m: i32) -> Complex64 {
    let mut acc = ONE;
    for _ in 0..m.unsigned_abs() {
        acc *= w;
    }
    if m < 0 {
        ONE / acc
    } else {
        acc
    }
}

proptest! {
    #[test]
    fn integer_powers_match_repeated_multiplication(
        re in -3.0_f64..3.0,
        im in -3.0_f64..3.0,
        m in -4_i32..=4,
    ) {
        let w = Complex64::new(re, im);
        prop_assume!(w.norm() > 1e-3);
        let via_pow = principal_pow(w, Complex64::new(m as f64, 0.0)).unwrap();
        let via_mul = repeated_multiplication(w, m);
        let scale = via_mul.norm().max(1e-300);
        prop_assert!((via_pow - via_mul).norm() <= 1e-12 * scale);
    }

    #[test]
    fn lambda_arg_respects_rotations(
        re in -2.0_f64..2.0,
        im in -2.0_f64..2.0,
        phi in -3.0_f64..3.0,
        lambda in -1.4_f64..1.4,
    ) {
        let w = Complex64::new(re, im);
        prop_assume!(w.norm() > 1e-3);
        let rotated = lambda_arg(w * Complex64::from_polar(1.0, phi), lambda).unwrap();
        let base = lambda_arg(w, lambda).unwrap();
        prop_assert!(wrap_angle(rotated - base - phi).abs() < 1e-9);
    }

    #[test]
    fn function_spec_json_round_trips(
        lambda in -1.5_f64..1.5,
        re in -0.5_f64..0.5,
        im in -0.5_f64..0.5,
    ) {
        let specs = [
            FunctionSpec::robertson_extremal(lambda).unwrap(),
            FunctionSpec::spirallike_extremal(lambda).unwrap(),
            FunctionSpec::taylor(vec![ONE, Complex64::new(re, im)]).unwrap(),
        ];
        for f in &specs {
            let js = serde_json::to_string(f).unwrap();
            let back: FunctionSpec = serde_json::from_str(&js).unwrap();
            prop_assert_eq!(f, &back);
        }
    }
}

/// The three equivalence routes agree on random small-coefficient Taylor
/// specs (the minima sit far from zero, so finite-difference noise in the
/// primitive route cannot flip a verdict).
#[test]
fn equivalence_routes_agree_on_random_taylor_specs() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let grid = GridSpec::geometric(6, 0.9, 24).unwrap();
    for trial in 0..100 {
        let degree = rng.gen_range(1..=5);
        let mut coeffs = vec![ONE];
        for n in 2..=(degree + 1) {
            // small enough that |z f''/f'| stays below cos(lambda) on the grid
            let scale = 0.04 / (n * n) as f64;
            coeffs.push(Complex64::new(
                rng.gen_range(-scale..scale),
                rng.gen_range(-scale..scale),
            ));
        }
        let f = FunctionSpec::taylor(coeffs).unwrap();
        let lambda = rng.gen_range(-0.9..0.9);
        let eq = equivalence_check(&f, lambda, &grid, DEFAULT_MARGIN_TOL).unwrap();
        assert!(eq.verdicts_agree(), "trial {trial}: routes disagree");
        assert!(eq.robertson.verdict.passed(), "trial {trial}: small spec rejected");
    }
}

/// Builtin families also run through all three routes coherently.
#[test]
fn equivalence_routes_agree_on_builtins() {
    let grid = GridSpec::geometric(8, 0.9, 24).unwrap();
    let cases = [
        (FunctionSpec::robertson_extremal(0.9).unwrap(), 0.9),
        (FunctionSpec::robertson_extremal(-1.2).unwrap(), -1.2),
        (FunctionSpec::HalfPlane, 0.0),
        (FunctionSpec::Identity, 0.5),
    ];
    for (f, lambda) in &cases {
        let eq = equivalence_check(f, *lambda, &grid, DEFAULT_MARGIN_TOL).unwrap();
        assert!(eq.verdicts_agree(), "{f:?} at lambda = {lambda}");
    }
}
