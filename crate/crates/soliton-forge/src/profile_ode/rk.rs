//! Embedded Dormand-Prince 5(4) stepper with PI step-size control.
//!
//! Generic over the floating scalar; the caller drives the stepper one
//! accepted step at a time so it can watch for events and cut the solution.

use crate::scalar::Scalar;

pub const DEFAULT_ABS_TOL: f64 = 1e-10;
pub const DEFAULT_REL_TOL: f64 = 1e-8;
/// Step cap keeping the quintic Hermite dense output well below the
/// residual gates downstream.
pub const DEFAULT_MAX_STEP: f64 = 0.05;

#[derive(Debug, Clone, Copy)]
pub struct RkOptions<S> {
    pub abs_tol: S,
    pub rel_tol: S,
    pub max_step: S,
    pub max_steps: usize,
}

impl<S: Scalar> Default for RkOptions<S> {
    fn default() -> Self {
        RkOptions {
            abs_tol: S::of(DEFAULT_ABS_TOL),
            rel_tol: S::of(DEFAULT_REL_TOL),
            max_step: S::of(DEFAULT_MAX_STEP),
            max_steps: 10_000_000,
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub enum RkError<S> {
    StepSizeUnderflow { s: S },
    MaxStepsExceeded { s: S },
}

/// One accepted step, endpoint data only.
#[derive(Debug, Clone, Copy)]
pub struct AcceptedStep<S> {
    pub s0: S,
    pub y0: [S; 2],
    pub s1: S,
    pub y1: [S; 2],
}

pub struct Dopri5<'a, S: Scalar> {
    f: &'a dyn Fn(S, [S; 2]) -> [S; 2],
    s: S,
    y: [S; 2],
    k1: [S; 2],
    h: S,
    dir: S,
    target: S,
    opts: RkOptions<S>,
    err_old: S,
    steps: usize,
    finished: bool,
}

impl<'a, S: Scalar> Dopri5<'a, S> {
    pub fn new(
        f: &'a dyn Fn(S, [S; 2]) -> [S; 2],
        s0: S,
        y0: [S; 2],
        target: S,
        opts: RkOptions<S>,
    ) -> Self {
        let dir = if target >= s0 { S::one() } else { -S::one() };
        let k1 = f(s0, y0);
        let span = (target - s0).abs();
        // crude initial step; the controller corrects within a step or two
        let scale = k1[0].abs().max(k1[1].abs()) + S::of(1e-8);
        let h0 = (opts.abs_tol / scale)
            .powf(S::of(0.2))
            .min(opts.max_step)
            .min(span)
            .max(S::of(1e-10));
        Dopri5 {
            f,
            s: s0,
            y: y0,
            k1,
            h: h0,
            dir,
            target,
            opts,
            err_old: S::of(1e-4),
            steps: 0,
            finished: span == S::zero(),
        }
    }

    pub fn finished(&self) -> bool {
        self.finished
    }

    pub fn state(&self) -> (S, [S; 2]) {
        (self.s, self.y)
    }

    /// Force termination (caller located an event and cut the solution).
    pub fn stop(&mut self) {
        self.finished = true;
    }

    /// Take one accepted step toward the target.
    pub fn advance(&mut self) -> Result<AcceptedStep<S>, RkError<S>> {
        let two = S::of(2.0);
        let safe = S::of(0.9);
        let beta = S::of(0.04);
        let alpha = S::of(0.2) - beta * S::of(0.75);
        loop {
            self.steps += 1;
            if self.steps > self.opts.max_steps {
                return Err(RkError::MaxStepsExceeded { s: self.s });
            }
            let remaining = (self.target - self.s).abs();
            let h = self.h.min(self.opts.max_step).min(remaining);
            let min_step = S::of(1e-14) * (self.s.abs() + S::one());
            if h < min_step {
                return Err(RkError::StepSizeUnderflow { s: self.s });
            }
            let hs = h * self.dir;
            let (y1, y_err, k7) = self.dormand_prince(hs);

            // weighted rms error norm
            let mut err = S::zero();
            for i in 0..2 {
                let sc = self.opts.abs_tol
                    + self.opts.rel_tol * self.y[i].abs().max(y1[i].abs());
                let e = y_err[i] / sc;
                err = err + e * e;
            }
            err = (err / two).sqrt();

            if err <= S::one() {
                let step = AcceptedStep {
                    s0: self.s,
                    y0: self.y,
                    s1: self.s + hs,
                    y1,
                };
                self.s = step.s1;
                self.y = y1;
                self.k1 = k7; // FSAL
                let err_cl = err.max(S::of(1e-10));
                let fac = safe * err_cl.powf(-alpha) * self.err_old.powf(beta);
                let fac = fac.min(S::of(5.0)).max(S::of(0.2));
                self.h = h * fac;
                self.err_old = err_cl;
                if (self.target - self.s).abs() <= S::of(1e-14) * (self.s.abs() + S::one()) {
                    self.finished = true;
                }
                return Ok(step);
            }
            let fac = (safe * err.powf(-S::of(0.2))).max(S::of(0.1));
            self.h = h * fac;
        }
    }

    fn dormand_prince(&self, h: S) -> ([S; 2], [S; 2], [S; 2]) {
        let f = self.f;
        let s = self.s;
        let y = self.y;
        let k1 = self.k1;

        let c = |x: f64| S::of(x);
        let ax = |y: [S; 2], ks: &[([S; 2], S)]| -> [S; 2] {
            let mut out = y;
            for (k, w) in ks {
                out[0] = out[0] + h * *w * k[0];
                out[1] = out[1] + h * *w * k[1];
            }
            out
        };

        let k2 = f(s + c(0.2) * h, ax(y, &[(k1, c(0.2))]));
        let k3 = f(
            s + c(0.3) * h,
            ax(y, &[(k1, c(3.0 / 40.0)), (k2, c(9.0 / 40.0))]),
        );
        let k4 = f(
            s + c(0.8) * h,
            ax(
                y,
                &[
                    (k1, c(44.0 / 45.0)),
                    (k2, c(-56.0 / 15.0)),
                    (k3, c(32.0 / 9.0)),
                ],
            ),
        );
        let k5 = f(
            s + c(8.0 / 9.0) * h,
            ax(
                y,
                &[
                    (k1, c(19372.0 / 6561.0)),
                    (k2, c(-25360.0 / 2187.0)),
                    (k3, c(64448.0 / 6561.0)),
                    (k4, c(-212.0 / 729.0)),
                ],
            ),
        );
        let k6 = f(
            s + h,
            ax(
                y,
                &[
                    (k1, c(9017.0 / 3168.0)),
                    (k2, c(-355.0 / 33.0)),
                    (k3, c(46732.0 / 5247.0)),
                    (k4, c(49.0 / 176.0)),
                    (k5, c(-5103.0 / 18656.0)),
                ],
            ),
        );
        let y1 = ax(
            y,
            &[
                (k1, c(35.0 / 384.0)),
                (k3, c(500.0 / 1113.0)),
                (k4, c(125.0 / 192.0)),
                (k5, c(-2187.0 / 6784.0)),
                (k6, c(11.0 / 84.0)),
            ],
        );
        let k7 = f(s + h, y1);

        // difference between 5th and embedded 4th order result
        let e = [
            c(71.0 / 57600.0),
            c(0.0),
            c(-71.0 / 16695.0),
            c(71.0 / 1920.0),
            c(-17253.0 / 339200.0),
            c(22.0 / 525.0),
            c(-1.0 / 40.0),
        ];
        let mut y_err = [S::zero(); 2];
        let ks = [k1, k2, k3, k4, k5, k6, k7];
        for i in 0..2 {
            let mut acc = S::zero();
            for (j, k) in ks.iter().enumerate() {
                acc = acc + e[j] * k[i];
            }
            y_err[i] = h * acc;
        }
        (y1, y_err, k7)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponential_decay_matches_closed_form() {
        let f = |_s: f64, y: [f64; 2]| [-y[0], -y[1]];
        let mut rk = Dopri5::new(&f, 0.0, [1.0, 2.0], 3.0, RkOptions::default());
        let mut last = (0.0, [1.0, 2.0]);
        while !rk.finished() {
            let st = rk.advance().unwrap();
            last = (st.s1, st.y1);
        }
        assert!((last.0 - 3.0).abs() < 1e-12);
        assert!((last.1[0] - (-3.0f64).exp()).abs() < 1e-9);
        assert!((last.1[1] - 2.0 * (-3.0f64).exp()).abs() < 1e-9);
    }

    #[test]
    fn backwards_integration_works() {
        let f = |s: f64, _y: [f64; 2]| [s.cos(), 0.0];
        let mut rk = Dopri5::new(&f, 0.0, [0.0, 0.0], -2.0, RkOptions::default());
        let mut last = [0.0, 0.0];
        while !rk.finished() {
            last = rk.advance().unwrap().y1;
        }
        assert!((last[0] - (-2.0f64).sin()).abs() < 1e-9);
    }

    #[test]
    fn works_in_f32_too() {
        let f = |_s: f32, y: [f32; 2]| [y[1], -y[0]];
        let opts = RkOptions::<f32> {
            abs_tol: 1e-6,
            rel_tol: 1e-5,
            ..Default::default()
        };
        let mut rk = Dopri5::new(&f, 0.0f32, [0.0, 1.0], 1.0, opts);
        let mut last = [0.0f32, 1.0];
        while !rk.finished() {
            last = rk.advance().unwrap().y1;
        }
        assert!((last[0] - 1.0f32.sin()).abs() < 1e-4);
    }
}
