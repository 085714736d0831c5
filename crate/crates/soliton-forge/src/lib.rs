//! Numerical construction of graphical translating solitons of mean curvature
//! flow in semi-Riemannian products M x R.
//!
//! The core pipeline: pick a space from [`spaces`], integrate the reduced
//! profile equation with [`profile_ode`], assemble surfaces with [`assembly`],
//! and check the results against the independent oracles in [`verify`].

pub mod assembly;
pub mod error;
pub mod profile_ode;
pub mod scalar;
pub mod spaces;
pub mod verify;

pub use error::{Result, SolitonError};
pub use profile_ode::{
    integrate, integrate_range, CurvatureProfile, IntegrateOptions, ProfileSolution, SignPair,
    SolitonProblem, Termination, Tolerances,
};

/// The working scalar for the concrete pipeline.
pub type Real = f64;
/// Single-precision alias for callers that want the generic kernels at f32.
pub type Real32 = f32;
