//! Randomized structural properties of the exact-jet and polynomial layers.

use proptest::prelude::*;

use soliton_forge::profile_ode::dense::{poly_eval, poly_shift};
use soliton_forge::profile_ode::jet::{formal_residual, jet_at_pole, rat};
use soliton_forge::profile_ode::CurvatureProfile;
use soliton_forge::SignPair;

proptest! {
    #[test]
    fn pole_jets_are_formal_solutions(
        eps in prop_oneof![Just(1i8), Just(-1)],
        et in prop_oneof![Just(1i8), Just(-1)],
        num in 1i64..8,
        den in 1i64..4,
    ) {
        let signs = SignPair::new(eps, et).unwrap();
        let c = rat(num, den);
        // skip heads that the recurrence rejects as degenerate
        if let Ok(jet) = jet_at_pole(signs, c.clone(), 10, 0.0) {
            let profile = CurvatureProfile::rational_pole((0.0, f64::INFINITY), 0.0, c);
            let res = formal_residual(signs, &profile.h_sigma_series(10).unwrap(), &jet);
            prop_assert!(res.iter().all(num_traits::Zero::is_zero));
        }
    }

    #[test]
    fn shifted_polynomials_agree_pointwise(
        coeffs in prop::collection::vec(-3.0f64..3.0, 1..6),
        shift in -2.0f64..2.0,
        x in -2.0f64..2.0,
    ) {
        let shifted = poly_shift(&coeffs, shift);
        let direct = poly_eval(&coeffs, x + shift);
        let via = poly_eval(&shifted, x);
        prop_assert!((direct - via).abs() < 1e-9 * (1.0 + direct.abs()));
    }

    #[test]
    fn double_shift_composes(
        coeffs in prop::collection::vec(-3.0f64..3.0, 1..6),
        a in -1.5f64..1.5,
        b in -1.5f64..1.5,
        x in -1.0f64..1.0,
    ) {
        let once = poly_shift(&poly_shift(&coeffs, a), b);
        let joint = poly_shift(&coeffs, a + b);
        let lhs = poly_eval(&once, x);
        let rhs = poly_eval(&joint, x);
        prop_assert!((lhs - rhs).abs() < 1e-9 * (1.0 + lhs.abs()));
    }
}
