//! Adaptive Simpson quadrature and the submersion reparametrization.

use crate::error::{Result, SolitonError};

pub const DEFAULT_QUAD_TOL: f64 = 1e-10;

fn simpson(_f: &dyn Fn(f64) -> f64, a: f64, fa: f64, b: f64, fb: f64, fm: f64) -> f64 {
    (b - a) / 6.0 * (fa + 4.0 * fm + fb)
}

fn adapt(
    f: &dyn Fn(f64) -> f64,
    a: f64,
    fa: f64,
    b: f64,
    fb: f64,
    fm: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = simpson(f, a, fa, m, fm, flm);
    let right = simpson(f, m, fm, b, fb, frm);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        left + right + delta / 15.0
    } else {
        adapt(f, a, fa, m, fm, flm, left, 0.5 * tol, depth - 1)
            + adapt(f, m, fm, b, fb, frm, right, 0.5 * tol, depth - 1)
    }
}

pub fn adaptive_simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = simpson(f, a, fa, b, fb, fm);
    adapt(f, a, fa, b, fb, fm, whole, tol, 48)
}

/// Arc-length style reparametrization v(t) = int dt / sqrt(eps_tilde * |grad pi|^2)
/// turning a raw quotient coordinate into a unit-speed abscissa.
pub struct Reparametrization {
    pub t_start: f64,
    pub eps_tilde: i8,
    gradnorm2: Box<dyn Fn(f64) -> f64>,
    tol: f64,
}

pub fn normalize_projection(
    eps_tilde: i8,
    gradnorm2: Box<dyn Fn(f64) -> f64>,
    interval: (f64, f64),
) -> Result<Reparametrization> {
    let (a, b) = interval;
    let n = 257;
    for i in 0..n {
        let t = a + (b - a) * i as f64 / (n - 1) as f64;
        if eps_tilde as f64 * gradnorm2(t) <= 0.0 {
            return Err(SolitonError::LightlikeGradient { t });
        }
    }
    Ok(Reparametrization {
        t_start: a,
        eps_tilde,
        gradnorm2,
        tol: DEFAULT_QUAD_TOL,
    })
}

impl Reparametrization {
    fn speed(&self, t: f64) -> f64 {
        (self.eps_tilde as f64 * (self.gradnorm2)(t)).sqrt()
    }

    /// v(t), measured from the interval start.
    pub fn eval(&self, t: f64) -> Result<f64> {
        let et = self.eps_tilde as f64;
        let g = &self.gradnorm2;
        let integrand = move |x: f64| 1.0 / (et * g(x)).sqrt();
        Ok(adaptive_simpson(&integrand, self.t_start, t, self.tol))
    }

    /// Fiber mean curvature in the normalized abscissa, from the raw
    /// divergence via the chain rule
    ///   div(grad v) = v'(t)*div(grad tau) + v''(t)*|grad tau|^2,
    /// which collapses to (div(grad tau) - (|grad tau|^2)'/2) / v'-speed.
    pub fn transformed_fiber_curvature(
        &self,
        div_raw: &dyn Fn(f64) -> f64,
        t: f64,
    ) -> Result<f64> {
        let d = 1e-6 * (1.0 + t.abs());
        let gn2_prime = ((self.gradnorm2)(t + d) - (self.gradnorm2)(t - d)) / (2.0 * d);
        let vp = self.speed(t);
        if !vp.is_finite() || vp == 0.0 {
            return Err(SolitonError::LightlikeGradient { t });
        }
        Ok((div_raw(t) - gn2_prime / 2.0) / vp)
    }
}
