//! Piecewise-polynomial dense output.
//!
//! Each accepted integrator step is stored as a quintic Hermite segment for
//! both f and f', built from ODE-exact derivatives at the step endpoints.
//! With the step cap in [`super::rk`] the interpolation error sits well below
//! the downstream residual gates.

/// Polynomial coefficients in the local variable t = s - s_left.
#[derive(Debug, Clone)]
pub struct DenseSegment {
    pub s0: f64,
    pub s1: f64,
    pub f: Vec<f64>,
    pub w: Vec<f64>,
}

pub fn poly_eval(c: &[f64], x: f64) -> f64 {
    let mut acc = 0.0;
    for v in c.iter().rev() {
        acc = acc * x + v;
    }
    acc
}

pub fn poly_deriv_eval(c: &[f64], x: f64) -> f64 {
    let mut acc = 0.0;
    for k in (1..c.len()).rev() {
        acc = acc * x + k as f64 * c[k];
    }
    acc
}

/// q(t) = p(t + shift), Taylor shift by synthetic division.
pub fn poly_shift(c: &[f64], shift: f64) -> Vec<f64> {
    let mut q = c.to_vec();
    let n = q.len();
    for i in 0..n {
        for j in (i..n - 1).rev() {
            let (next, cur) = (q[j + 1] * shift, q[j]);
            q[j] = cur + next;
        }
    }
    q
}

/// Quintic matching value/first/second derivative at both ends of [0, h].
fn quintic(h: f64, v0: f64, d0: f64, dd0: f64, v1: f64, d1: f64, dd1: f64) -> Vec<f64> {
    let a = v1 - v0 - d0 * h - dd0 * h * h / 2.0;
    let b = d1 - d0 - dd0 * h;
    let c = dd1 - dd0;
    let h2 = h * h;
    let h3 = h2 * h;
    let c3 = 10.0 * a / h3 - 4.0 * b / h2 + c / (2.0 * h);
    let c4 = -15.0 * a / (h2 * h2) + 7.0 * b / h3 - c / h2;
    let c5 = 6.0 * a / (h2 * h3) - 3.0 * b / (h2 * h2) + c / (2.0 * h3);
    vec![v0, d0, dd0 / 2.0, c3, c4, c5]
}

impl DenseSegment {
    /// Build from Hermite data (f, f', f'', f''') at the two endpoints.
    /// `sl < sr` is required; the data tuples are (f, w, w', w'').
    pub fn hermite(sl: f64, left: [f64; 4], sr: f64, right: [f64; 4]) -> Self {
        let h = sr - sl;
        let f = quintic(h, left[0], left[1], left[2], right[0], right[1], right[2]);
        let w = quintic(h, left[1], left[2], left[3], right[1], right[2], right[3]);
        DenseSegment { s0: sl, s1: sr, f, w }
    }

    pub fn contains(&self, s: f64) -> bool {
        s >= self.s0 && s <= self.s1
    }

    pub fn eval_f(&self, s: f64) -> f64 {
        poly_eval(&self.f, s - self.s0)
    }

    pub fn eval_w(&self, s: f64) -> f64 {
        poly_eval(&self.w, s - self.s0)
    }

    /// d(f')/ds from the dense polynomial (used by the analytic-derivative oracles).
    pub fn eval_w_deriv(&self, s: f64) -> f64 {
        poly_deriv_eval(&self.w, s - self.s0)
    }

    pub fn eval_f_deriv(&self, s: f64) -> f64 {
        poly_deriv_eval(&self.f, s - self.s0)
    }
}
