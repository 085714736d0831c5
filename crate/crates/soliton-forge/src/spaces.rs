//! Catalog of symmetric ambient spaces with their quotient data, plus
//! submersion lifts from base solitons to total-space solitons.

use crate::error::{Result, SolitonError};
use crate::profile_ode::jet::rat;
use crate::profile_ode::{CurvatureProfile, ProfileSolution, SignPair};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpaceKind {
    EuclideanRotational,
    MinkowskiRotational,
    DesitterRotational,
    HyperbolicRotational,
    BoostOmega1,
    BoostOmega2,
}

/// Chart for 3-dimensional visualizable cases.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EmbeddingChart {
    /// (s, theta) -> (s cos t, s sin t, f(s)) in flat R^3
    RevolutionEuclidean,
    /// same chart in L^3 = (R^3, dx^2 + dy^2 - dt^2)
    RevolutionMinkowski,
    /// graph over the Minkowski plane (x, y) with u from sqrt(|x^2 - y^2|)
    BoostPlane,
}

/// Pre-normalization quotient data for spaces defined in a raw coordinate.
pub struct RawQuotient {
    pub domain: (f64, f64),
    pub gradnorm2: Box<dyn Fn(f64) -> f64>,
    pub divergence: Box<dyn Fn(f64) -> f64>,
}

#[derive(Debug, Clone)]
pub struct SpaceDescriptor {
    pub name: String,
    pub kind: SpaceKind,
    pub dim_n: u32,
    pub epsilon_tilde: i8,
    /// Canonical choice of the vertical sign for this space's examples.
    pub canonical_epsilon: i8,
    pub profile: CurvatureProfile,
    pub quotient_interval: (f64, f64),
    pub embedding: Option<EmbeddingChart>,
    pub h_formula: String,
}

impl SpaceDescriptor {
    pub fn signs(&self, epsilon: i8) -> Result<SignPair> {
        SignPair::new(epsilon, self.epsilon_tilde)
    }
}

pub fn euclidean_rotational(n: u32) -> SpaceDescriptor {
    SpaceDescriptor {
        name: format!("euclidean:n={n}"),
        kind: SpaceKind::EuclideanRotational,
        dim_n: n,
        epsilon_tilde: 1,
        canonical_epsilon: 1,
        profile: CurvatureProfile::rational_pole((0.0, f64::INFINITY), 0.0, rat(n as i64 - 1, 1)),
        quotient_interval: (0.0, f64::INFINITY),
        embedding: (n == 2).then_some(EmbeddingChart::RevolutionEuclidean),
        h_formula: "(n-1)/s".into(),
    }
}

pub fn minkowski_rotational(n: u32) -> SpaceDescriptor {
    SpaceDescriptor {
        name: format!("minkowski:n={n}"),
        kind: SpaceKind::MinkowskiRotational,
        dim_n: n,
        epsilon_tilde: 1,
        canonical_epsilon: -1,
        profile: CurvatureProfile::rational_pole((0.0, f64::INFINITY), 0.0, rat(n as i64 - 1, 1)),
        quotient_interval: (0.0, f64::INFINITY),
        embedding: (n == 2).then_some(EmbeddingChart::RevolutionMinkowski),
        h_formula: "(n-1)/s".into(),
    }
}

pub fn desitter_rotational(n: u32) -> SpaceDescriptor {
    SpaceDescriptor {
        name: format!("desitter:n={n}"),
        kind: SpaceKind::DesitterRotational,
        dim_n: n,
        epsilon_tilde: -1,
        canonical_epsilon: 1,
        profile: CurvatureProfile::tanh_scaled(
            (f64::NEG_INFINITY, f64::INFINITY),
            -((n - 1) as f64),
        ),
        quotient_interval: (f64::NEG_INFINITY, f64::INFINITY),
        embedding: None,
        h_formula: "-(n-1)*tanh(s)".into(),
    }
}

pub fn hyperbolic_rotational(n: u32) -> SpaceDescriptor {
    SpaceDescriptor {
        name: format!("hyperbolic:n={n}"),
        kind: SpaceKind::HyperbolicRotational,
        dim_n: n,
        epsilon_tilde: 1,
        canonical_epsilon: 1,
        profile: CurvatureProfile::coth_scaled((0.0, f64::INFINITY), rat(n as i64 - 1, 1)),
        quotient_interval: (0.0, f64::INFINITY),
        embedding: None,
        h_formula: "(n-1)*coth(s)".into(),
    }
}

pub fn boost_omega1() -> SpaceDescriptor {
    SpaceDescriptor {
        name: "boost:omega1".into(),
        kind: SpaceKind::BoostOmega1,
        dim_n: 2,
        epsilon_tilde: 1,
        canonical_epsilon: 1,
        profile: CurvatureProfile::rational_pole((0.0, f64::INFINITY), 0.0, rat(1, 1)),
        quotient_interval: (0.0, f64::INFINITY),
        embedding: Some(EmbeddingChart::BoostPlane),
        h_formula: "1/s".into(),
    }
}

pub fn boost_omega2() -> SpaceDescriptor {
    SpaceDescriptor {
        name: "boost:omega2".into(),
        kind: SpaceKind::BoostOmega2,
        dim_n: 2,
        epsilon_tilde: -1,
        canonical_epsilon: 1,
        profile: CurvatureProfile::rational_pole((0.0, f64::INFINITY), 0.0, rat(-1, 1)),
        quotient_interval: (0.0, f64::INFINITY),
        embedding: Some(EmbeddingChart::BoostPlane),
        h_formula: "-1/s".into(),
    }
}

/// The built-in spaces, rotational families at their smallest dimension.
pub fn catalog() -> Vec<SpaceDescriptor> {
    vec![
        euclidean_rotational(2),
        minkowski_rotational(2),
        desitter_rotational(2),
        hyperbolic_rotational(2),
        boost_omega1(),
        boost_omega2(),
    ]
}

/// Look up a space by its stable string id, e.g. "euclidean:n=3" or "boost:omega2".
pub fn lookup(id: &str) -> Result<SpaceDescriptor> {
    let unknown = || SolitonError::UnknownSpace(id.to_string());
    let (family, arg) = id.split_once(':').ok_or_else(unknown)?;
    match family {
        "boost" => match arg {
            "omega1" => Ok(boost_omega1()),
            "omega2" => Ok(boost_omega2()),
            _ => Err(unknown()),
        },
        _ => {
            let n: u32 = arg
                .strip_prefix("n=")
                .and_then(|v| v.parse().ok())
                .filter(|n| *n >= 2)
                .ok_or_else(unknown)?;
            match family {
                "euclidean" => Ok(euclidean_rotational(n)),
                "minkowski" => Ok(minkowski_rotational(n)),
                "desitter" => Ok(desitter_rotational(n)),
                "hyperbolic" => Ok(hyperbolic_rotational(n)),
                _ => Err(unknown()),
            }
        }
    }
}

/// Pre-normalization fiber divergence div(grad tau) for spaces that carry one.
pub fn fiber_mean_curvature_raw(space: &SpaceDescriptor, tau: f64) -> Result<f64> {
    let n = space.dim_n as f64;
    match space.kind {
        SpaceKind::DesitterRotational => Ok(-n * tau),
        SpaceKind::HyperbolicRotational => Ok(n * tau),
        _ => Err(SolitonError::NoRawData(space.name.clone())),
    }
}

/// Raw quotient data (domain, |grad tau|^2, div grad tau) where defined.
pub fn raw_quotient(space: &SpaceDescriptor) -> Result<RawQuotient> {
    let n = space.dim_n as f64;
    match space.kind {
        SpaceKind::DesitterRotational => Ok(RawQuotient {
            domain: (f64::NEG_INFINITY, f64::INFINITY),
            gradnorm2: Box::new(|t: f64| -1.0 - t * t),
            divergence: Box::new(move |t: f64| -n * t),
        }),
        SpaceKind::HyperbolicRotational => Ok(RawQuotient {
            domain: (1.0, f64::INFINITY),
            gradnorm2: Box::new(|t: f64| t * t - 1.0),
            divergence: Box::new(move |t: f64| n * t),
        }),
        _ => Err(SolitonError::NoRawData(space.name.clone())),
    }
}

/// How a base soliton is transported to a total space.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LiftDescriptor {
    /// u(q, x) = f(x): product with an extra factor
    ProductExtend,
    /// The circle bundle H^3_1 -> RH^2 via pi(z1, z2) = (2 z1 conj(z2), |z1|^2 + |z2|^2)
    HopfH13,
    GenericHarmonic { fiber_dim: u32, harmonic: bool },
}

/// The quadratic Hopf-type projection to the Weierstrass model of RH^2.
/// Input complex numbers as (re, im); output (x1, x2, x3) with
/// x1^2 + x2^2 - x3^2 = -1 on the quadric -|z1|^2 + |z2|^2 = -1.
pub fn hopf_projection(z1: (f64, f64), z2: (f64, f64)) -> (f64, f64, f64) {
    let x1 = 2.0 * (z1.0 * z2.0 + z1.1 * z2.1);
    let x2 = 2.0 * (z1.1 * z2.0 - z1.0 * z2.1);
    let x3 = z1.0 * z1.0 + z1.1 * z1.1 + z2.0 * z2.0 + z2.1 * z2.1;
    (x1, x2, x3)
}

/// An evaluable function on the total space, u = f o v o pi.
pub struct LiftedFunction {
    descriptor: LiftDescriptor,
    base: ProfileSolution,
}

impl LiftedFunction {
    /// Product extension: the extra factor coordinate is ignored.
    pub fn eval_product(&self, base_abscissa: f64) -> f64 {
        self.base.eval_f(base_abscissa)
    }

    /// Evaluate at a point of H^3_1 (pairs are complex numbers as (re, im)).
    pub fn eval_hopf(&self, z1: (f64, f64), z2: (f64, f64)) -> f64 {
        let (_, _, x3) = hopf_projection(z1, z2);
        // x3 is the radial coordinate tau on RH^2; normalized abscissa acosh(tau)
        let s = x3.max(1.0).acosh();
        self.base.eval_f(s)
    }

    pub fn descriptor(&self) -> LiftDescriptor {
        self.descriptor
    }
}

pub fn lift(descriptor: LiftDescriptor, base: &ProfileSolution) -> Result<LiftedFunction> {
    if let LiftDescriptor::GenericHarmonic { harmonic, .. } = descriptor {
        if !harmonic {
            return Err(SolitonError::UnsupportedLift);
        }
    }
    Ok(LiftedFunction { descriptor, base: base.clone() })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalog_profile_values() {
        let e3 = euclidean_rotational(3);
        assert_eq!(e3.profile.value(2.0).unwrap(), 1.0);
        let ds = desitter_rotational(4);
        let s = 0.7;
        assert_eq!(ds.profile.value(s).unwrap(), -3.0 * s.tanh());
        let b2 = boost_omega2();
        assert_eq!(b2.epsilon_tilde, -1);
        assert_eq!(b2.profile.value(0.5).unwrap(), -2.0);
    }

    #[test]
    fn lookup_roundtrip_and_unknown() {
        assert_eq!(lookup("hyperbolic:n=4").unwrap().dim_n, 4);
        assert_eq!(lookup("boost:omega1").unwrap().kind, SpaceKind::BoostOmega1);
        assert!(matches!(lookup("euclidean:n=1"), Err(SolitonError::UnknownSpace(_))));
        assert!(matches!(lookup("nope"), Err(SolitonError::UnknownSpace(_))));
    }

    #[test]
    fn raw_fiber_curvature() {
        let ds = desitter_rotational(3);
        assert_eq!(fiber_mean_curvature_raw(&ds, 2.0).unwrap(), -6.0);
        let hy = hyperbolic_rotational(2);
        assert_eq!(fiber_mean_curvature_raw(&hy, 1.0).unwrap(), 2.0);
        assert_eq!(fiber_mean_curvature_raw(&ds, 0.0).unwrap(), 0.0);
        let eu = euclidean_rotational(2);
        assert!(matches!(
            fiber_mean_curvature_raw(&eu, 1.0),
            Err(SolitonError::NoRawData(_))
        ));
    }

    #[test]
    fn hopf_base_point() {
        // pi(1, 0) = (0, 1): the Weierstrass base point (0, 0, 1)
        let (x1, x2, x3) = hopf_projection((1.0, 0.0), (0.0, 0.0));
        assert_eq!((x1, x2, x3), (0.0, 0.0, 1.0));
    }

    #[test]
    fn hopf_lands_on_the_quadric() {
        // points with -|z1|^2 + |z2|^2 = -1
        let pts = [((1.2f64, 0.3), (0.5, 0.5291502622129181))];
        for (z1, z2) in pts {
            let n1 = z1.0 * z1.0 + z1.1 * z1.1;
            let n2 = z2.0 * z2.0 + z2.1 * z2.1;
            assert!((n1 - n2 - 1.0).abs() < 1e-12);
            let (x1, x2, x3) = hopf_projection(z1, z2);
            assert!((x1 * x1 + x2 * x2 - x3 * x3 + 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn catalog_profiles_reproduce_the_printed_equations_exactly() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let rhs = crate::profile_ode::rhs::<f64>;
        for _ in 0..100 {
            let s_pos: f64 = rng.gen_range(0.05..6.0);
            let s_any: f64 = rng.gen_range(-4.0..4.0);
            let w: f64 = rng.gen_range(-2.0..2.0);
            for n in [2u32, 3, 5] {
                let n1 = (n - 1) as f64;
                // rotational Euclidean, both vertical signs
                for ep in [1i8, -1] {
                    let space = euclidean_rotational(n);
                    let h = space.profile.value(s_pos).unwrap();
                    let hand = (1.0 + (ep as f64) * w * w) * (1.0 - w * (n1 / s_pos));
                    assert_eq!(rhs(space.signs(ep).unwrap(), h, w), hand);
                }
                // rotational in L^3 (canonical eps = -1)
                let mink = minkowski_rotational(n);
                let h = mink.profile.value(s_pos).unwrap();
                let hand = (1.0 - w * w) * (1.0 - w * (n1 / s_pos));
                assert_eq!(rhs(mink.signs(-1).unwrap(), h, w), hand);
                // de Sitter
                let ds = desitter_rotational(n);
                let h = ds.profile.value(s_any).unwrap();
                let hand = (-1.0 + w * w) * (1.0 + w * (n1 * s_any.tanh()));
                assert_eq!(rhs(ds.signs(1).unwrap(), h, w), hand);
                // hyperbolic space
                let hy = hyperbolic_rotational(n);
                let h = hy.profile.value(s_pos).unwrap();
                let hand = (1.0 + w * w) * (1.0 - w * (n1 / s_pos.tanh()));
                assert_eq!(rhs(hy.signs(1).unwrap(), h, w), hand);
            }
            // boost quadrant equations
            let b1 = boost_omega1();
            let h1 = b1.profile.value(s_pos).unwrap();
            assert_eq!(
                rhs(b1.signs(1).unwrap(), h1, w),
                (1.0 + w * w) * (1.0 - w * (1.0 / s_pos))
            );
            let b2 = boost_omega2();
            let h2 = b2.profile.value(s_pos).unwrap();
            assert_eq!(
                rhs(b2.signs(1).unwrap(), h2, w),
                (-1.0 + w * w) * (1.0 + w * (1.0 / s_pos))
            );
        }
    }

    #[test]
    fn normalization_round_trip_recovers_the_cataloged_h() {
        use crate::profile_ode::quadrature::normalize_projection;
        // de Sitter: raw tau over R, v = asinh(tau)
        for n in [2u32, 4] {
            let space = desitter_rotational(n);
            let raw = raw_quotient(&space).unwrap();
            let rep = normalize_projection(space.epsilon_tilde, raw.gradnorm2, (-5.0, 5.0)).unwrap();
            for tau in [-3.0f64, -1.0, 0.5, 2.0, 4.5] {
                let s = tau.asinh();
                let got = rep.transformed_fiber_curvature(&*raw.divergence, tau).unwrap();
                let want = space.profile.value(s).unwrap();
                assert!((got - want).abs() < 1e-8, "n={n} tau={tau}: {got} vs {want}");
            }
        }
        // hyperbolic: raw tau > 1, v = acosh(tau)
        for n in [2u32, 3] {
            let space = hyperbolic_rotational(n);
            let raw = raw_quotient(&space).unwrap();
            let rep =
                normalize_projection(space.epsilon_tilde, raw.gradnorm2, (1.0 + 1e-4, 10.0)).unwrap();
            for tau in [1.2, 2.0, 3.5, 8.0f64] {
                let s = tau.acosh();
                let got = rep.transformed_fiber_curvature(&*raw.divergence, tau).unwrap();
                let want = space.profile.value(s).unwrap();
                assert!((got - want).abs() < 1e-8, "n={n} tau={tau}: {got} vs {want}");
            }
        }
    }

    #[test]
    fn non_harmonic_generic_lift_is_rejected() {
        let sol = ProfileSolution {
            nodes: vec![crate::profile_ode::Node { s: 0.0, f: 0.0, fprime: 0.0 }],
            segments: vec![crate::profile_ode::dense::DenseSegment {
                s0: 0.0,
                s1: 1.0,
                f: vec![0.0],
                w: vec![0.0],
            }],
            causal_character: 1,
            termination: crate::profile_ode::Termination::ReachedEnd,
        };
        assert!(matches!(
            lift(LiftDescriptor::GenericHarmonic { fiber_dim: 1, harmonic: false }, &sol),
            Err(SolitonError::UnsupportedLift)
        ));
        assert!(lift(
            LiftDescriptor::GenericHarmonic { fiber_dim: 1, harmonic: true },
            &sol
        )
        .is_ok());
    }
}
