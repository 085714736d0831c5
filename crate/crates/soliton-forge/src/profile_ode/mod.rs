//! The reduced soliton ODE  f'' = (eps_tilde + eps f'^2)(1 - f' h(s)), its
//! singular starts, barrier structure and inverse-branch form.

pub mod dense;
pub mod jet;
pub mod quadrature;
pub mod rk;

use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Result, SolitonError};
use crate::scalar::Scalar;
use dense::DenseSegment;
use jet::{Rat, TaylorJet};
use rk::{Dopri5, RkError, RkOptions};

pub const DEGENERACY_MARGIN: f64 = 1e-8;
pub const BLOWUP_CAP: f64 = 1e6;
pub const EVENT_LOCATION_TOL: f64 = 1e-12;
pub const DEFAULT_JET_ORDER: usize = 10;
/// Margin kept between the integration target and a pole of h.
pub const POLE_MARGIN: f64 = 1e-6;
/// coth evaluation is refused closer to the pole than this.
pub const COTH_REFUSAL: f64 = 1e-8;

/// The signature flags: eps for the vertical dt^2 factor, eps_tilde for the
/// quotient interval metric.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SignPair {
    pub epsilon: i8,
    pub epsilon_tilde: i8,
}

impl SignPair {
    pub fn new(epsilon: i8, epsilon_tilde: i8) -> Result<Self> {
        if !matches!(epsilon, -1 | 1) || !matches!(epsilon_tilde, -1 | 1) {
            return Err(SolitonError::InvalidProblem(
                "signature flags must be -1 or +1".into(),
            ));
        }
        Ok(SignPair { epsilon, epsilon_tilde })
    }

    pub fn eps(&self) -> f64 {
        self.epsilon as f64
    }

    pub fn eps_tilde(&self) -> f64 {
        self.epsilon_tilde as f64
    }

    /// Barrier solutions w = +-1 exist exactly when eps * eps_tilde = -1.
    pub fn has_barrier(&self) -> bool {
        self.epsilon * self.epsilon_tilde == -1
    }
}

/// Right-hand side of the reduced equation for f''.
pub fn rhs<S: Scalar>(signs: SignPair, h_value: S, fprime: S) -> S {
    let et = S::of(signs.epsilon_tilde as f64);
    let ep = S::of(signs.epsilon as f64);
    (et + ep * fprime * fprime) * (S::one() - fprime * h_value)
}

/// Closed-form rule for the fiber mean-curvature function h.
#[derive(Debug, Clone)]
pub enum ProfileForm {
    /// h(s) = c / (s - s_star)
    RationalPole { s_star: f64, c: Rat },
    /// h(s) = c * tanh(s)
    TanhScaled { c: f64 },
    /// h(s) = c * coth(s); pole at 0 with coefficient c
    CothScaled { c: Rat },
    Constant { c: f64 },
    /// Monotone-cubic interpolation of samples; no poles representable.
    Tabulated { s: Vec<f64>, h: Vec<f64>, slopes: Vec<f64> },
}

/// The fiber mean-curvature function h: I -> R with pole metadata.
#[derive(Debug, Clone)]
pub struct CurvatureProfile {
    pub domain: (f64, f64),
    pub form: ProfileForm,
}

/// Fritsch-Carlson monotone slopes for a cubic Hermite interpolant.
fn pchip_slopes(s: &[f64], h: &[f64]) -> Vec<f64> {
    let n = s.len();
    let mut d = vec![0.0; n - 1];
    for i in 0..n - 1 {
        d[i] = (h[i + 1] - h[i]) / (s[i + 1] - s[i]);
    }
    let mut m = vec![0.0; n];
    m[0] = d[0];
    m[n - 1] = d[n - 2];
    for i in 1..n - 1 {
        if d[i - 1] * d[i] <= 0.0 {
            m[i] = 0.0;
        } else {
            let w1 = 2.0 * (s[i + 1] - s[i]) + (s[i] - s[i - 1]);
            let w2 = (s[i + 1] - s[i]) + 2.0 * (s[i] - s[i - 1]);
            m[i] = (w1 + w2) / (w1 / d[i - 1] + w2 / d[i]);
        }
    }
    m
}

impl CurvatureProfile {
    pub fn rational_pole(domain: (f64, f64), s_star: f64, c: Rat) -> Self {
        CurvatureProfile { domain, form: ProfileForm::RationalPole { s_star, c } }
    }

    pub fn tanh_scaled(domain: (f64, f64), c: f64) -> Self {
        CurvatureProfile { domain, form: ProfileForm::TanhScaled { c } }
    }

    pub fn coth_scaled(domain: (f64, f64), c: Rat) -> Self {
        CurvatureProfile { domain, form: ProfileForm::CothScaled { c } }
    }

    pub fn constant(domain: (f64, f64), c: f64) -> Self {
        CurvatureProfile { domain, form: ProfileForm::Constant { c } }
    }

    pub fn tabulated(s: Vec<f64>, h: Vec<f64>) -> Result<Self> {
        if s.len() < 2 || s.len() != h.len() {
            return Err(SolitonError::InvalidProblem(
                "tabulated profile needs matching sample lists of length >= 2".into(),
            ));
        }
        if s.windows(2).any(|w| w[1] <= w[0]) {
            return Err(SolitonError::InvalidProblem(
                "tabulated abscissas must be strictly increasing".into(),
            ));
        }
        let slopes = pchip_slopes(&s, &h);
        let domain = (s[0], *s.last().unwrap());
        Ok(CurvatureProfile { domain, form: ProfileForm::Tabulated { s, h, slopes } })
    }

    pub fn pole(&self) -> Option<(f64, Rat)> {
        match &self.form {
            ProfileForm::RationalPole { s_star, c } => Some((*s_star, c.clone())),
            ProfileForm::CothScaled { c } => Some((0.0, c.clone())),
            _ => None,
        }
    }

    pub fn value(&self, s: f64) -> Result<f64> {
        match &self.form {
            ProfileForm::RationalPole { s_star, c } => {
                let dx = s - s_star;
                if dx == 0.0 {
                    return Err(SolitonError::ProfileEvaluation {
                        s,
                        reason: "pole of h".into(),
                    });
                }
                Ok(c.to_f64().unwrap() / dx)
            }
            ProfileForm::TanhScaled { c } => Ok(c * s.tanh()),
            ProfileForm::CothScaled { c } => {
                if s.abs() < COTH_REFUSAL {
                    return Err(SolitonError::ProfileEvaluation {
                        s,
                        reason: "coth evaluation refused near the pole; use the jet machinery".into(),
                    });
                }
                Ok(c.to_f64().unwrap() / s.tanh())
            }
            ProfileForm::Constant { c } => Ok(*c),
            ProfileForm::Tabulated { s: xs, h, slopes } => {
                let i = match xs.binary_search_by(|x| x.partial_cmp(&s).unwrap()) {
                    Ok(i) => i.min(xs.len() - 2),
                    Err(0) => 0,
                    Err(i) if i >= xs.len() => xs.len() - 2,
                    Err(i) => i - 1,
                };
                let dx = xs[i + 1] - xs[i];
                let t = (s - xs[i]) / dx;
                let (h0, h1, m0, m1) = (h[i], h[i + 1], slopes[i] * dx, slopes[i + 1] * dx);
                let t2 = t * t;
                let t3 = t2 * t;
                Ok(h0 * (2.0 * t3 - 3.0 * t2 + 1.0)
                    + m0 * (t3 - 2.0 * t2 + t)
                    + h1 * (-2.0 * t3 + 3.0 * t2)
                    + m1 * (t3 - t2))
            }
        }
    }

    pub fn derivative(&self, s: f64) -> Result<f64> {
        match &self.form {
            ProfileForm::RationalPole { s_star, c } => {
                let dx = s - s_star;
                if dx == 0.0 {
                    return Err(SolitonError::ProfileEvaluation { s, reason: "pole of h".into() });
                }
                Ok(-c.to_f64().unwrap() / (dx * dx))
            }
            ProfileForm::TanhScaled { c } => {
                let sech = 1.0 / s.cosh();
                Ok(c * sech * sech)
            }
            ProfileForm::CothScaled { c } => {
                if s.abs() < COTH_REFUSAL {
                    return Err(SolitonError::ProfileEvaluation {
                        s,
                        reason: "coth evaluation refused near the pole".into(),
                    });
                }
                let csch = 1.0 / s.sinh();
                Ok(-c.to_f64().unwrap() * csch * csch)
            }
            ProfileForm::Constant { .. } => Ok(0.0),
            ProfileForm::Tabulated { .. } => {
                // derivative of the Hermite cubic via a tight central difference
                let d = 1e-7 * (1.0 + s.abs());
                Ok((self.value(s + d)? - self.value(s - d)?) / (2.0 * d))
            }
        }
    }

    /// Taylor coefficients of H(sigma) = sigma * h(s_star + sigma) for profiles
    /// with a pole; None for pole-free forms.
    pub fn h_sigma_series(&self, order: usize) -> Option<Vec<Rat>> {
        match &self.form {
            ProfileForm::RationalPole { c, .. } => Some(vec![c.clone()]),
            ProfileForm::CothScaled { c } => Some(
                jet::s_coth_series(order)
                    .into_iter()
                    .map(|q| q * c)
                    .collect(),
            ),
            _ => None,
        }
    }
}

/// Initial value problem for the reduced equation.
#[derive(Debug, Clone)]
pub struct SolitonProblem {
    pub signs: SignPair,
    pub profile: CurvatureProfile,
    pub s0: f64,
    pub f0: f64,
    pub f1: f64,
    pub singular_start: bool,
}

impl SolitonProblem {
    pub fn validate(&self) -> Result<()> {
        let (a, b) = self.profile.domain;
        if !(self.s0 >= a && self.s0 <= b) {
            return Err(SolitonError::InvalidProblem(format!(
                "s0 = {} outside the closure of the profile domain [{}, {}]",
                self.s0, a, b
            )));
        }
        if self.singular_start {
            match self.profile.pole() {
                Some((p, _)) if p == self.s0 => {}
                _ => {
                    return Err(SolitonError::InvalidProblem(
                        "singular start requires s0 at a pole of h".into(),
                    ))
                }
            }
            if self.f1 != 0.0 {
                return Err(SolitonError::InvalidProblem(
                    "singular start forces f'(s0) = 0".into(),
                ));
            }
        }
        let d = self.signs.eps() + self.signs.eps_tilde() * self.f1 * self.f1;
        if d.abs() < DEGENERACY_MARGIN {
            return Err(SolitonError::InvalidProblem(
                "degenerate start: eps + eps_tilde * f1^2 = 0".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Termination {
    ReachedEnd,
    DegeneracyEvent(f64),
    BlowUpEvent(f64),
    PoleEvent(f64),
}

#[derive(Debug, Clone, Copy)]
pub struct Node {
    pub s: f64,
    pub f: f64,
    pub fprime: f64,
}

/// Dense-output numeric solution of the reduced ODE.
#[derive(Debug, Clone)]
pub struct ProfileSolution {
    pub nodes: Vec<Node>,
    pub segments: Vec<DenseSegment>,
    pub causal_character: i8,
    pub termination: Termination,
}

impl ProfileSolution {
    pub fn s_min(&self) -> f64 {
        self.nodes.first().unwrap().s
    }

    pub fn s_max(&self) -> f64 {
        self.nodes.last().unwrap().s
    }

    fn segment_for(&self, s: f64) -> &DenseSegment {
        let i = self
            .segments
            .partition_point(|seg| seg.s1 < s)
            .min(self.segments.len() - 1);
        &self.segments[i]
    }

    pub fn eval_f(&self, s: f64) -> f64 {
        self.segment_for(s).eval_f(s)
    }

    pub fn eval_fprime(&self, s: f64) -> f64 {
        self.segment_for(s).eval_w(s)
    }

    /// f'' from the dense polynomial for f' (independent of the ODE rhs).
    pub fn eval_fsecond_dense(&self, s: f64) -> f64 {
        self.segment_for(s).eval_w_deriv(s)
    }

    /// Internal consistency: strictly increasing nodes, dense output matching
    /// nodes, constant causal character.
    pub fn validate(&self, tol: f64) -> Result<()> {
        if self.nodes.windows(2).any(|w| w[1].s <= w[0].s) {
            return Err(SolitonError::InvalidProblem(
                "solution nodes not strictly increasing".into(),
            ));
        }
        for n in &self.nodes {
            if (self.eval_f(n.s) - n.f).abs() > tol || (self.eval_fprime(n.s) - n.fprime).abs() > tol {
                return Err(SolitonError::InvalidProblem(format!(
                    "dense output fails to reproduce node at s = {}",
                    n.s
                )));
            }
        }
        Ok(())
    }
}

/// First-order reduction w = f'; returns the field (s, w) -> w'.
pub fn reduce_to_first_order<'a>(
    signs: SignPair,
    profile: &'a CurvatureProfile,
) -> impl Fn(f64, f64) -> Result<f64> + 'a {
    move |s, w| Ok(rhs(signs, profile.value(s)?, w))
}

/// A second-order scalar ODE x'' = F(s, x, x') with enough derivative data to
/// build quintic Hermite segments.
trait SecondOrderField {
    fn accel(&self, s: f64, y: [f64; 2]) -> f64;
    /// d(accel)/ds along the flow.
    fn jerk(&self, s: f64, y: [f64; 2]) -> f64;
}

struct ReducedField<'a> {
    signs: SignPair,
    profile: &'a CurvatureProfile,
}

impl SecondOrderField for ReducedField<'_> {
    fn accel(&self, s: f64, y: [f64; 2]) -> f64 {
        let h = self.profile.value(s).expect("profile evaluated in safe region");
        rhs(self.signs, h, y[1])
    }

    fn jerk(&self, s: f64, y: [f64; 2]) -> f64 {
        let w = y[1];
        let h = self.profile.value(s).expect("profile evaluated in safe region");
        let hp = self.profile.derivative(s).expect("profile evaluated in safe region");
        let et = self.signs.eps_tilde();
        let ep = self.signs.eps();
        let f2 = (et + ep * w * w) * (1.0 - w * h);
        let df_ds = (et + ep * w * w) * (-w * hp);
        let df_dw = 2.0 * ep * w * (1.0 - w * h) - (et + ep * w * w) * h;
        df_ds + df_dw * f2
    }
}

/// Inverse-branch equation alpha'' = (eps_tilde + eps alpha'^2)(h(alpha) - alpha').
struct InverseBranchField<'a> {
    signs: SignPair,
    profile: &'a CurvatureProfile,
}

impl SecondOrderField for InverseBranchField<'_> {
    fn accel(&self, _y: f64, st: [f64; 2]) -> f64 {
        let (alpha, p) = (st[0], st[1]);
        let h = self.profile.value(alpha).expect("profile evaluated in safe region");
        let et = self.signs.eps_tilde();
        let ep = self.signs.eps();
        (et + ep * p * p) * (h - p)
    }

    fn jerk(&self, _y: f64, st: [f64; 2]) -> f64 {
        let (alpha, p) = (st[0], st[1]);
        let h = self.profile.value(alpha).expect("profile evaluated in safe region");
        let hp = self.profile.derivative(alpha).expect("profile evaluated in safe region");
        let et = self.signs.eps_tilde();
        let ep = self.signs.eps();
        let acc = (et + ep * p * p) * (h - p);
        let df_dalpha = (et + ep * p * p) * hp;
        let df_dp = 2.0 * ep * p * (h - p) - (et + ep * p * p);
        df_dalpha * p + df_dp * acc
    }
}

struct StopRule<'a> {
    /// Positive while integration may continue; crossing to <= 0 is an event.
    guard: Box<dyn Fn(f64, [f64; 2]) -> f64 + 'a>,
    tag: Box<dyn Fn(f64) -> Termination + 'a>,
}

#[derive(Debug, Clone, Copy)]
pub struct Tolerances {
    pub abs: f64,
    pub rel: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances { abs: rk::DEFAULT_ABS_TOL, rel: rk::DEFAULT_REL_TOL }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct IntegrateOptions {
    pub tolerances: Tolerances,
    pub jet_order: usize,
    pub max_step: f64,
}

impl Default for IntegrateOptions {
    fn default() -> Self {
        IntegrateOptions {
            tolerances: Tolerances::default(),
            jet_order: DEFAULT_JET_ORDER,
            max_step: rk::DEFAULT_MAX_STEP,
        }
    }
}

fn rk_options(opts: &IntegrateOptions) -> RkOptions<f64> {
    RkOptions {
        abs_tol: opts.tolerances.abs,
        rel_tol: opts.tolerances.rel,
        max_step: opts.max_step,
        max_steps: 10_000_000,
    }
}

fn build_segment(field: &dyn SecondOrderField, sa: f64, ya: [f64; 2], sb: f64, yb: [f64; 2]) -> DenseSegment {
    let da = [ya[0], ya[1], field.accel(sa, ya), field.jerk(sa, ya)];
    let db = [yb[0], yb[1], field.accel(sb, yb), field.jerk(sb, yb)];
    if sa <= sb {
        DenseSegment::hermite(sa, da, sb, db)
    } else {
        DenseSegment::hermite(sb, db, sa, da)
    }
}

/// Bisect the earliest guard crossing inside an accepted step.
fn locate_event(
    seg: &DenseSegment,
    s_from: f64,
    s_to: f64,
    guard: &dyn Fn(f64, [f64; 2]) -> f64,
) -> f64 {
    let mut lo = s_from;
    let mut hi = s_to;
    while (hi - lo).abs() > EVENT_LOCATION_TOL {
        let mid = 0.5 * (lo + hi);
        let y = [seg.eval_f(mid), seg.eval_w(mid)];
        if guard(mid, y) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Drive the stepper from (s0, y0) to target, recording Hermite dense output
/// and honoring stop rules. Nodes are recorded in traversal order.
fn drive(
    field: &dyn SecondOrderField,
    s0: f64,
    y0: [f64; 2],
    target: f64,
    opts: &IntegrateOptions,
    stops: &[StopRule],
    reached_tag: Termination,
    nodes: &mut Vec<Node>,
    segments: &mut Vec<DenseSegment>,
) -> Result<Termination> {
    let f = |s: f64, y: [f64; 2]| [y[1], field.accel(s, y)];
    let mut rk = Dopri5::new(&f, s0, y0, target, rk_options(opts));
    while !rk.finished() {
        let step = rk.advance().map_err(|e| match e {
            RkError::StepSizeUnderflow { s } => SolitonError::StepSizeUnderflow { s },
            RkError::MaxStepsExceeded { s } => SolitonError::StepSizeUnderflow { s },
        })?;
        let mut seg = build_segment(field, step.s0, step.y0, step.s1, step.y1);

        // earliest event inside this step, if any rule fires at the far end
        let mut hit: Option<(f64, Termination)> = None;
        for rule in stops {
            if (rule.guard)(step.s1, step.y1) <= 0.0 {
                let s_ev = locate_event(&seg, step.s0, step.s1, rule.guard.as_ref());
                let earlier = match &hit {
                    None => true,
                    Some((s_prev, _)) => (s_ev - step.s0).abs() < (s_prev - step.s0).abs(),
                };
                if earlier {
                    hit = Some((s_ev, (rule.tag)(s_ev)));
                }
            }
        }
        if let Some((s_ev, tag)) = hit {
            let y_ev = [seg.eval_f(s_ev), seg.eval_w(s_ev)];
            if s_ev >= seg.s0 {
                if step.s1 >= step.s0 {
                    seg.s1 = s_ev;
                } else {
                    seg.s0 = s_ev;
                }
            }
            segments.push(seg);
            nodes.push(Node { s: s_ev, f: y_ev[0], fprime: y_ev[1] });
            return Ok(tag);
        }
        segments.push(seg);
        nodes.push(Node { s: step.s1, f: step.y1[0], fprime: step.y1[1] });
    }
    Ok(reached_tag)
}

fn standard_stops<'a>(signs: SignPair) -> Vec<StopRule<'a>> {
    let ep = signs.eps();
    let et = signs.eps_tilde();
    vec![
        StopRule {
            guard: Box::new(move |_s, y| (ep + et * y[1] * y[1]).abs() - DEGENERACY_MARGIN),
            tag: Box::new(Termination::DegeneracyEvent),
        },
        StopRule {
            guard: Box::new(move |_s, y| BLOWUP_CAP - y[1].abs()),
            tag: Box::new(Termination::BlowUpEvent),
        },
    ]
}

/// Clamp a requested endpoint away from poles of h; returns the effective
/// target and the termination tag to use when it is reached.
fn clamp_target(profile: &CurvatureProfile, s0: f64, s_end: f64) -> (f64, Termination) {
    let dir = if s_end >= s0 { 1.0 } else { -1.0 };
    if let Some((p, _)) = profile.pole() {
        if p != s0 && (p - s0) * dir > 0.0 && (s_end - p) * dir >= 0.0 {
            return (p - dir * POLE_MARGIN, Termination::PoleEvent(p));
        }
    }
    let (a, b) = profile.domain;
    let boundary = if dir > 0.0 { b } else { a };
    if boundary.is_finite() && (s_end - boundary) * dir >= 0.0 {
        return (boundary - dir * POLE_MARGIN, Termination::PoleEvent(boundary));
    }
    (s_end, Termination::ReachedEnd)
}

fn finalize(
    signs: SignPair,
    mut nodes: Vec<Node>,
    mut segments: Vec<DenseSegment>,
    termination: Termination,
) -> Result<ProfileSolution> {
    if nodes.len() >= 2 && nodes[0].s > nodes[nodes.len() - 1].s {
        nodes.reverse();
        segments.reverse();
    }
    let ep = signs.eps();
    let et = signs.eps_tilde();
    let mut character = 0i8;
    for n in &nodes {
        let c = (ep + et * n.fprime * n.fprime).signum() as i8;
        if character == 0 {
            character = c;
        } else if c != character {
            return Err(SolitonError::InvalidProblem(format!(
                "causal character flipped at s = {} without a degeneracy event",
                n.s
            )));
        }
    }
    Ok(ProfileSolution { nodes, segments, causal_character: character, termination })
}

/// Build the jet for a singular start and return (jet, handoff offset).
pub fn singular_start_jet(problem: &SolitonProblem, opts: &IntegrateOptions, span: f64) -> Result<(TaylorJet, f64)> {
    let series = problem
        .profile
        .h_sigma_series(opts.jet_order)
        .ok_or_else(|| SolitonError::JetFailure("profile has no pole series".into()))?;
    let jet = jet::jet_from_h_series(
        problem.signs,
        &series,
        BigRational::zero(),
        opts.jet_order,
        problem.s0,
    )?;
    let m = jet.order();
    let am = jet.coeff_f64(m).abs().max(1e-300);
    let delta = (opts.tolerances.abs / am)
        .powf(1.0 / m as f64)
        .min(1e-2 * span)
        .max(1e-6);
    Ok((jet, delta))
}

/// Integrate the reduced equation from the problem's initial data to s_end.
pub fn integrate(problem: &SolitonProblem, s_end: f64, opts: &IntegrateOptions) -> Result<ProfileSolution> {
    problem.validate()?;
    let (target, reached_tag) = clamp_target(&problem.profile, problem.s0, s_end);
    let dir = if target >= problem.s0 { 1.0 } else { -1.0 };
    let field = ReducedField { signs: problem.signs, profile: &problem.profile };
    let stops = standard_stops(problem.signs);

    let mut nodes = Vec::new();
    let mut segments = Vec::new();
    let (start_s, start_y);

    if problem.singular_start {
        let span = (target - problem.s0).abs().max(1e-6);
        let (jet, delta) = singular_start_jet(problem, opts, span)?;
        let x = dir * delta;
        let f_h = problem.f0 + jet.eval(x);
        let w_h = jet.eval_deriv(x);

        // the jet polynomial is itself the dense output on the first piece
        let mut fpoly = jet.poly_f64();
        fpoly[0] += problem.f0;
        let wpoly = jet.deriv_poly_f64();
        let left = problem.s0.min(problem.s0 + x);
        let shift = left - problem.s0;
        segments.push(DenseSegment {
            s0: left,
            s1: problem.s0.max(problem.s0 + x),
            f: dense::poly_shift(&fpoly, shift),
            w: dense::poly_shift(&wpoly, shift),
        });
        nodes.push(Node { s: problem.s0, f: problem.f0, fprime: 0.0 });
        nodes.push(Node { s: problem.s0 + x, f: f_h, fprime: w_h });
        start_s = problem.s0 + x;
        start_y = [f_h, w_h];
    } else {
        nodes.push(Node { s: problem.s0, f: problem.f0, fprime: problem.f1 });
        start_s = problem.s0;
        start_y = [problem.f0, problem.f1];
    }

    let termination = drive(
        &field, start_s, start_y, target, opts, &stops, reached_tag, &mut nodes, &mut segments,
    )?;
    finalize(problem.signs, nodes, segments, termination)
}

/// Integrate over [s_begin, s_end] splitting at the problem's s0.
pub fn integrate_range(
    problem: &SolitonProblem,
    s_begin: f64,
    s_end: f64,
    opts: &IntegrateOptions,
) -> Result<ProfileSolution> {
    if s_begin >= s_end {
        return Err(SolitonError::InvalidProblem("empty range".into()));
    }
    if problem.s0 <= s_begin {
        return integrate(problem, s_end, opts);
    }
    if problem.s0 >= s_end {
        return integrate(problem, s_begin, opts);
    }
    let right = integrate(problem, s_end, opts)?;
    let left = integrate(problem, s_begin, opts)?;
    let mut nodes = left.nodes;
    nodes.extend(right.nodes.iter().skip(1).copied());
    let mut segments = left.segments;
    segments.extend(right.segments.iter().cloned());
    let termination = if left.termination == Termination::ReachedEnd {
        right.termination
    } else {
        left.termination
    };
    finalize(problem.signs, nodes, segments, termination)
}

/// Integrate the inverse-branch equation in the height variable y, starting
/// at a neck (alpha(y0) = s_neck, alpha'(y0) = 0).
pub fn branch_equation_integrate(
    signs: SignPair,
    profile: &CurvatureProfile,
    y0: f64,
    s_neck: f64,
    y_end: f64,
    opts: &IntegrateOptions,
) -> Result<ProfileSolution> {
    let h_neck = profile.value(s_neck)?;
    if h_neck == 0.0 {
        return Err(SolitonError::NeckDegenerate);
    }
    let field = InverseBranchField { signs, profile };
    let ep = signs.eps();
    let et = signs.eps_tilde();
    let (dom_a, dom_b) = profile.domain;
    let pole = profile.pole().map(|(p, _)| p);

    let mut stops: Vec<StopRule> = vec![
        StopRule {
            guard: Box::new(move |_y, st| (et + ep * st[1] * st[1]).abs() - DEGENERACY_MARGIN),
            tag: Box::new(Termination::DegeneracyEvent),
        },
        StopRule {
            guard: Box::new(move |_y, st| BLOWUP_CAP - st[1].abs()),
            tag: Box::new(Termination::BlowUpEvent),
        },
    ];
    // keep alpha inside the profile domain / away from the pole
    let lower = pole
        .filter(|p| *p <= s_neck)
        .map(|p| p + POLE_MARGIN)
        .or(if dom_a.is_finite() { Some(dom_a + POLE_MARGIN) } else { None });
    if let Some(lo) = lower {
        stops.push(StopRule {
            guard: Box::new(move |_y, st| st[0] - lo),
            tag: Box::new(move |_| Termination::PoleEvent(lo)),
        });
    }
    if dom_b.is_finite() {
        let hi = dom_b - POLE_MARGIN;
        stops.push(StopRule {
            guard: Box::new(move |_y, st| hi - st[0]),
            tag: Box::new(move |_| Termination::PoleEvent(hi)),
        });
    }

    let mut nodes = vec![Node { s: y0, f: s_neck, fprime: 0.0 }];
    let mut segments = Vec::new();
    let termination = drive(
        &field,
        y0,
        [s_neck, 0.0],
        y_end,
        opts,
        &stops,
        Termination::ReachedEnd,
        &mut nodes,
        &mut segments,
    )?;

    // causal character of the underlying graph: sign(eps*alpha'^2 + eps_tilde)
    if nodes.len() >= 2 && nodes[0].s > nodes[nodes.len() - 1].s {
        nodes.reverse();
        segments.reverse();
    }
    let mut character = 0i8;
    for n in &nodes {
        let c = (ep * n.fprime * n.fprime + et).signum() as i8;
        if character == 0 {
            character = c;
        } else if c != character {
            return Err(SolitonError::InvalidProblem(
                "causal character flipped along the inverse branch".into(),
            ));
        }
    }
    Ok(ProfileSolution { nodes, segments, causal_character: character, termination })
}
