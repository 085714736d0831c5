use num_traits::{Float, FromPrimitive};

/// Floating-point scalar for the integrator core: f32 or f64.
///
/// The jet recurrences use exact rationals instead; see [`crate::profile_ode::jet`].
pub trait Scalar: Float + FromPrimitive + std::fmt::Debug + std::fmt::Display + 'static {
    fn of(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable in scalar type")
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}
