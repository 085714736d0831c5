//! Assembly of complete solitons from profile pieces: the four-quadrant
//! boost-invariant gluing with smoothness certification, two-branch
//! catenoids, and mesh/CSV export for the 3-dimensional cases.

use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Result, SolitonError};
use crate::profile_ode::jet::{rat, Rat, TaylorJet};
use crate::profile_ode::{
    branch_equation_integrate, integrate, CurvatureProfile, IntegrateOptions, ProfileSolution,
    SignPair, SolitonProblem, DEGENERACY_MARGIN,
};
use crate::spaces::{EmbeddingChart, SpaceDescriptor};

/// Points closer to the light cone than this evaluate to the shared constant,
/// sidestepping catastrophic cancellation in the square root.
pub const CONE_BAND: f64 = 1e-14;
/// Gluing certification order checked by default.
pub const DEFAULT_GLUE_ORDER: usize = 12;
/// Cross-cone finite-difference agreement gate.
pub const CROSS_CONE_TOL: f64 = 1e-6;
/// Catenoid branches are trimmed where |alpha'| falls below this, i.e. where
/// the graph slope |f'| would exceed its reciprocal.
const TRIM_ALPHA_SLOPE: f64 = 0.5;
/// Newton polish tolerance for branch inversion.
const INVERSION_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AssemblyRule {
    QuadrantGlue,
    TwoBranch,
    SingleGraph,
    Lifted,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChartTag {
    ProfileInterval,
    BoostQuadrant,
    LightCone,
    HeightInterval,
}

/// Borrowed view of one assembled piece.
pub enum PieceRef<'a> {
    Solution(&'a ProfileSolution),
    Jet(&'a TaylorJet),
}

#[derive(Debug, Clone)]
pub struct SmoothnessCheck {
    pub order: usize,
    pub relation: String,
    pub pass: bool,
    /// |violation| as f64; exactly 0 for passing exact checks.
    pub magnitude: f64,
}

#[derive(Debug, Clone)]
pub struct SmoothnessReport {
    pub order: usize,
    pub checks: Vec<SmoothnessCheck>,
    pub cross_cone_max: f64,
}

impl SmoothnessReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass) && self.cross_cone_max < CROSS_CONE_TOL
    }
}

impl std::fmt::Display for SmoothnessReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for c in &self.checks {
            writeln!(
                f,
                "order={} relation={} {} magnitude={:e}",
                c.order,
                c.relation,
                if c.pass { "PASS" } else { "FAIL" },
                c.magnitude
            )?;
        }
        write!(
            f,
            "cross_cone_max={:e} {}",
            self.cross_cone_max,
            if self.cross_cone_max < CROSS_CONE_TOL { "PASS" } else { "FAIL" }
        )
    }
}

/// The boost-invariant soliton glued across the light cone:
/// u = a + f1(sqrt(x^2-y^2)) where |x| > |y|, a on the cone, and
/// u = a + f2(sqrt(y^2-x^2)) where |y| > |x|.
#[derive(Debug, Clone)]
pub struct GluedBoost {
    pub a: f64,
    pub jet1: TaylorJet,
    pub jet2: TaylorJet,
    pub sol1: ProfileSolution,
    pub sol2: ProfileSolution,
    /// Enabled quadrants in cyclic order Omega_1 (x>|y|), Omega_2 (y>|x|),
    /// Omega_3 (-x>|y|), Omega_4 (-y>|x|).
    pub quadrants: [bool; 4],
}

impl GluedBoost {
    fn quadrant_of(x: f64, y: f64, q: f64) -> usize {
        if q > 0.0 {
            if x > 0.0 { 0 } else { 2 }
        } else if y > 0.0 {
            1
        } else {
            3
        }
    }

    /// None outside the assembled quadrants or past the integrated range.
    pub fn eval(&self, x: f64, y: f64) -> Option<f64> {
        let q = x * x - y * y;
        if q.abs() < CONE_BAND {
            return Some(self.a);
        }
        let idx = Self::quadrant_of(x, y, q);
        if !self.quadrants[idx] {
            return None;
        }
        let (sol, s) = if q > 0.0 { (&self.sol1, q.sqrt()) } else { (&self.sol2, (-q).sqrt()) };
        if s > sol.s_max() {
            return None;
        }
        Some(sol.eval_f(s))
    }
}

/// Two graphs joined at a neck where the inverse branch has a turning point.
#[derive(Debug, Clone)]
pub struct TwoBranch {
    pub space: SpaceDescriptor,
    pub epsilon: i8,
    /// Inverse-branch solution alpha(y) through the neck (abscissa is y).
    pub alpha: ProfileSolution,
    pub y_neck: f64,
    pub s_neck: f64,
    /// alpha''(y_neck) read off the dense output; equals eps_tilde * h(s_neck).
    pub neck_curvature: f64,
    /// Graph with f' < 0 near the neck (y < y_neck side).
    pub lower: ProfileSolution,
    /// Graph with f' > 0 near the neck.
    pub upper: ProfileSolution,
}

#[derive(Debug, Clone)]
pub struct SingleGraph {
    pub space: SpaceDescriptor,
    pub epsilon: i8,
    pub solution: ProfileSolution,
}

#[derive(Debug, Clone)]
pub enum SurfaceKind {
    SingleGraph(SingleGraph),
    QuadrantGlue(GluedBoost),
    TwoBranch(TwoBranch),
}

#[derive(Debug, Clone)]
pub struct SolitonSurface {
    pub rule: AssemblyRule,
    pub kind: SurfaceKind,
    pub smoothness: Option<SmoothnessReport>,
}

impl SolitonSurface {
    pub fn single_graph(space: SpaceDescriptor, epsilon: i8, solution: ProfileSolution) -> Self {
        SolitonSurface {
            rule: AssemblyRule::SingleGraph,
            kind: SurfaceKind::SingleGraph(SingleGraph { space, epsilon, solution }),
            smoothness: None,
        }
    }

    /// Region tags with their charts and backing data.
    pub fn pieces(&self) -> Vec<(String, ChartTag, PieceRef<'_>)> {
        match &self.kind {
            SurfaceKind::SingleGraph(g) => vec![(
                g.space.name.clone(),
                ChartTag::ProfileInterval,
                PieceRef::Solution(&g.solution),
            )],
            SurfaceKind::QuadrantGlue(g) => {
                let names = ["omega1", "omega2", "omega3", "omega4"];
                let mut out: Vec<(String, ChartTag, PieceRef<'_>)> = Vec::new();
                for (i, name) in names.iter().enumerate() {
                    if g.quadrants[i] {
                        let sol = if i % 2 == 0 { &g.sol1 } else { &g.sol2 };
                        out.push((name.to_string(), ChartTag::BoostQuadrant, PieceRef::Solution(sol)));
                    }
                }
                out.push(("cone".into(), ChartTag::LightCone, PieceRef::Jet(&g.jet1)));
                out
            }
            SurfaceKind::TwoBranch(t) => vec![
                ("lower".into(), ChartTag::ProfileInterval, PieceRef::Solution(&t.lower)),
                ("upper".into(), ChartTag::ProfileInterval, PieceRef::Solution(&t.upper)),
                ("neck".into(), ChartTag::HeightInterval, PieceRef::Solution(&t.alpha)),
            ],
        }
    }
}

// ---------------------------------------------------------------------------
// exact gluing certification
// ---------------------------------------------------------------------------

/// Fornberg weights for the m-th derivative at x0 from the given nodes,
/// computed in exact rational arithmetic.
fn fornberg_weights(nodes: &[Rat], x0: &Rat, m: usize) -> Vec<Rat> {
    let n = nodes.len();
    let mut c = vec![vec![Rat::zero(); m + 1]; n];
    c[0][0] = Rat::one();
    let mut c1 = Rat::one();
    let mut c4 = &nodes[0] - x0;
    for i in 1..n {
        let mn = i.min(m);
        let mut c2 = Rat::one();
        let c5 = c4.clone();
        c4 = &nodes[i] - x0;
        for j in 0..i {
            let c3 = &nodes[i] - &nodes[j];
            c2 *= &c3;
            if j == i - 1 {
                for k in (1..=mn).rev() {
                    let kr = Rat::from_integer(num_bigint::BigInt::from(k as i64));
                    c[i][k] = &c1 * (kr * &c[i - 1][k - 1] - &c5 * &c[i - 1][k]) / &c2;
                }
                c[i][0] = -&c1 * &c5 * &c[i - 1][0] / &c2;
            }
            for k in (1..=mn).rev() {
                let kr = Rat::from_integer(num_bigint::BigInt::from(k as i64));
                c[j][k] = (&c4 * &c[j][k] - kr * &c[j][k - 1]) / &c3;
            }
            c[j][0] = &c4 * &c[j][0] / &c3;
        }
        c1 = c2;
    }
    (0..n).map(|i| c[i][m].clone()).collect()
}

fn poly_mul_trunc(a: &[Rat], b: &[Rat], len: usize) -> Vec<Rat> {
    let mut out = vec![Rat::zero(); len];
    for (i, ai) in a.iter().enumerate().take(len) {
        if ai.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            if i + j >= len {
                break;
            }
            out[i + j] += ai * bj;
        }
    }
    out
}

fn poly_eval_rat(c: &[Rat], x: &Rat) -> Rat {
    let mut acc = Rat::zero();
    for v in c.iter().rev() {
        acc = acc * x + v;
    }
    acc
}

/// Series in t of f(sqrt(q)) with q = sign*(2t + t^2), using the jet's even
/// coefficients (the odd ones are certified zero separately).
fn cone_transversal_series(jet: &TaylorJet, negate: bool) -> Vec<Rat> {
    let len = jet.coeffs.len();
    let q = if negate { vec![Rat::zero(), rat(-2, 1), rat(-1, 1)] } else { vec![Rat::zero(), rat(2, 1), rat(1, 1)] };
    let mut qpow = vec![Rat::one()];
    let mut out = vec![Rat::zero(); len];
    let jmax = (len - 1) / 2;
    for j in 0..=jmax {
        if j > 0 {
            qpow = poly_mul_trunc(&qpow, &q, len);
        }
        let a2j = &jet.coeffs[2 * j];
        if !a2j.is_zero() {
            for (i, qc) in qpow.iter().enumerate().take(len) {
                out[i] += a2j * qc;
            }
        }
    }
    out
}

/// One-sided derivatives of orders 0..=4 of u along the transversal
/// (1+t, 1) through the cone point (1,1), from both sides, in exact
/// arithmetic at grid spacing h. Returns the maximum disagreement.
fn cross_cone_fd(jet1: &TaylorJet, jet2: &TaylorJet, h: Rat) -> f64 {
    let right = cone_transversal_series(jet1, false);
    let left = cone_transversal_series(jet2, true);
    let mut max_diff = 0.0f64;
    for m in 0..=4usize {
        let npts = m + 5; // accuracy order 5
        let r_nodes: Vec<Rat> = (0..npts)
            .map(|k| Rat::from_integer(num_bigint::BigInt::from(k as i64)) * &h)
            .collect();
        let l_nodes: Vec<Rat> = r_nodes.iter().map(|x| -x).collect();
        let zero = Rat::zero();
        let rw = fornberg_weights(&r_nodes, &zero, m);
        let lw = fornberg_weights(&l_nodes, &zero, m);
        let mut dr = Rat::zero();
        let mut dl = Rat::zero();
        for k in 0..npts {
            dr += &rw[k] * poly_eval_rat(&right, &r_nodes[k]);
            dl += &lw[k] * poly_eval_rat(&left, &l_nodes[k]);
        }
        let diff = (dr - dl).to_f64().unwrap().abs();
        max_diff = max_diff.max(diff);
    }
    max_diff
}

fn exact_checks(jet1: &TaylorJet, jet2: &TaylorJet, order: usize) -> Result<Vec<SmoothnessCheck>> {
    let mut checks = Vec::new();
    let mut push = |order: usize, relation: String, residual: Rat| -> Result<()> {
        let pass = residual.is_zero();
        let magnitude = residual.to_f64().unwrap_or(f64::NAN).abs();
        if !pass {
            return Err(SolitonError::GlueMismatch {
                order,
                detail: format!("{relation} violated by {magnitude:e}"),
            });
        }
        checks.push(SmoothnessCheck { order, relation, pass, magnitude });
        Ok(())
    };
    for k in 1..=order {
        if k % 2 == 1 {
            push(k, format!("a{k}(f1)=0"), jet1.coeffs[k].clone())?;
            push(k, format!("a{k}(f2)=0"), jet2.coeffs[k].clone())?;
        } else if k % 4 == 0 {
            push(k, format!("a{k}(f1)=a{k}(f2)"), &jet1.coeffs[k] - &jet2.coeffs[k])?;
        } else {
            push(k, format!("a{k}(f1)=-a{k}(f2)"), &jet1.coeffs[k] + &jet2.coeffs[k])?;
        }
    }
    Ok(checks)
}

fn quadrants_contiguous(flags: [bool; 4]) -> bool {
    let n = flags.iter().filter(|f| **f).count();
    if n == 0 {
        return false;
    }
    if n == 4 {
        return true;
    }
    // a single cyclic run of `true`
    let runs = (0..4).filter(|i| flags[*i] && !flags[(*i + 3) % 4]).count();
    runs == 1
}

/// Glue quadrant solutions across the light cone and certify smoothness by
/// the exact coefficient relations through the jets' common order.
pub fn glue_boost(
    jet1: &TaylorJet,
    jet2: &TaylorJet,
    sol1: &ProfileSolution,
    sol2: &ProfileSolution,
) -> Result<SolitonSurface> {
    glue_boost_partial(jet1, jet2, sol1, sol2, [true; 4])
}

/// Same as [`glue_boost`] but assembling only a contiguous subset of the
/// four quadrants.
pub fn glue_boost_partial(
    jet1: &TaylorJet,
    jet2: &TaylorJet,
    sol1: &ProfileSolution,
    sol2: &ProfileSolution,
    quadrants: [bool; 4],
) -> Result<SolitonSurface> {
    if jet1.center != 0.0 || jet2.center != 0.0 {
        return Err(SolitonError::InvalidProblem("gluing jets must be centered at 0".into()));
    }
    if !quadrants_contiguous(quadrants) {
        return Err(SolitonError::InvalidProblem(
            "glued quadrants must form a nonempty contiguous arc".into(),
        ));
    }
    let a = sol1.nodes[0].f;
    if (sol2.nodes[0].f - a).abs() > 1e-12 {
        return Err(SolitonError::GlueMismatch {
            order: 0,
            detail: "quadrant solutions disagree on the cone value".into(),
        });
    }
    let order = DEFAULT_GLUE_ORDER.min(jet1.order()).min(jet2.order());
    let mut checks = exact_checks(jet1, jet2, order)?;
    let cross = cross_cone_fd(jet1, jet2, rat(1, 1000));
    if cross >= CROSS_CONE_TOL {
        return Err(SolitonError::GlueMismatch {
            order: 0,
            detail: format!("cross-cone finite-difference disagreement {cross:e}"),
        });
    }
    checks.push(SmoothnessCheck {
        order: 0,
        relation: "value shared on the light cone".into(),
        pass: true,
        magnitude: (sol2.nodes[0].f - a).abs(),
    });
    let report = SmoothnessReport { order, checks, cross_cone_max: cross };
    Ok(SolitonSurface {
        rule: AssemblyRule::QuadrantGlue,
        kind: SurfaceKind::QuadrantGlue(GluedBoost {
            a,
            jet1: jet1.clone(),
            jet2: jet2.clone(),
            sol1: sol1.clone(),
            sol2: sol2.clone(),
            quadrants,
        }),
        smoothness: Some(report),
    })
}

// ---------------------------------------------------------------------------
// two-branch catenoids
// ---------------------------------------------------------------------------

/// Invert a strictly monotone inverse-branch solution: find y with
/// alpha(y) = s, by bracketing on the nodes and Newton polishing.
pub fn invert_branch(alpha: &ProfileSolution, s: f64) -> Result<f64> {
    let nodes = &alpha.nodes;
    let mut bracket = None;
    for w in nodes.windows(2) {
        let (fa, fb) = (w[0].f, w[1].f);
        if (s - fa) * (s - fb) <= 0.0 {
            bracket = Some((w[0].s, w[1].s));
            break;
        }
    }
    let (mut lo, mut hi) = bracket.ok_or(SolitonError::InversionFailure { y: nodes[0].s })?;
    let mut y = 0.5 * (lo + hi);
    for _ in 0..100 {
        let val = alpha.eval_f(y) - s;
        let slope = alpha.eval_fprime(y);
        if val == 0.0 {
            return Ok(y);
        }
        if (alpha.eval_f(lo) - s) * val <= 0.0 {
            hi = y;
        } else {
            lo = y;
        }
        let newton = if slope != 0.0 { y - val / slope } else { f64::NAN };
        y = if newton.is_finite() && newton > lo.min(hi) && newton < lo.max(hi) {
            newton
        } else {
            0.5 * (lo + hi)
        };
        if (hi - lo).abs() < INVERSION_TOL || (val / slope.max(1e-300)).abs() < INVERSION_TOL {
            return Ok(y);
        }
    }
    Ok(y)
}

/// Locate the trim point on one side of the neck: the first y (moving away
/// from the neck) where |alpha'| reaches the trim slope.
fn trim_point(alpha: &ProfileSolution, from_end: bool) -> Option<f64> {
    let nodes: Vec<_> = if from_end {
        alpha.nodes.iter().rev().cloned().collect()
    } else {
        alpha.nodes.to_vec()
    };
    // nodes[0] is the neck side
    for w in nodes.windows(2) {
        if w[1].fprime.abs() >= TRIM_ALPHA_SLOPE {
            let (mut lo, mut hi) = (w[0].s, w[1].s);
            for _ in 0..80 {
                let mid = 0.5 * (lo + hi);
                if alpha.eval_fprime(mid).abs() < TRIM_ALPHA_SLOPE {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            return Some(0.5 * (lo + hi));
        }
    }
    None
}

fn branch_from_alpha(
    signs: SignPair,
    profile: &CurvatureProfile,
    alpha: &ProfileSolution,
    neck_at_end: bool,
    opts: &IntegrateOptions,
) -> Result<ProfileSolution> {
    // strict monotonicity of alpha in y on this side
    for w in alpha.nodes.windows(2) {
        if (w[1].f - w[0].f) * (alpha.nodes.last().unwrap().f - alpha.nodes[0].f) <= 0.0 {
            return Err(SolitonError::InversionFailure { y: w[1].s });
        }
    }
    let y_trim = trim_point(alpha, neck_at_end)
        .ok_or(SolitonError::InversionFailure { y: alpha.nodes[0].s })?;
    // seed at the far end, backing off any terminal degeneracy
    let far_nodes: Vec<_> = if neck_at_end {
        alpha.nodes.to_vec()
    } else {
        alpha.nodes.iter().rev().cloned().collect()
    };
    let seed = far_nodes
        .iter()
        .find(|n| {
            (signs.eps_tilde() + signs.eps() * n.fprime * n.fprime).abs() > 1e2 * DEGENERACY_MARGIN
                && n.fprime.abs() >= TRIM_ALPHA_SLOPE
        })
        .ok_or(SolitonError::InversionFailure { y: far_nodes[0].s })?;
    let s_trim = alpha.eval_f(y_trim);
    let problem = SolitonProblem {
        signs,
        profile: profile.clone(),
        s0: seed.f,
        f0: seed.s,
        f1: 1.0 / seed.fprime,
        singular_start: false,
    };
    integrate(&problem, s_trim, opts)
}

/// Build the two-branch catenoid of a space around a neck at s_neck,
/// integrating the inverse-branch equation to height +-extent.
pub fn make_catenoid(
    space: &SpaceDescriptor,
    s_neck: f64,
    extent: f64,
    opts: &IntegrateOptions,
) -> Result<SolitonSurface> {
    let signs = SignPair::new(space.canonical_epsilon, space.epsilon_tilde)?;
    let (a, b) = space.quotient_interval;
    if !(s_neck > a && s_neck < b) || extent <= 0.0 {
        return Err(SolitonError::InvalidProblem(
            "neck must be interior to the quotient interval and extent positive".into(),
        ));
    }
    let up = branch_equation_integrate(signs, &space.profile, 0.0, s_neck, extent, opts)?;
    let down = branch_equation_integrate(signs, &space.profile, 0.0, s_neck, -extent, opts)?;
    let neck_curvature = up.segments[0].eval_w_deriv(0.0);

    // `down` comes back in ascending y, so its neck is the last node
    let upper = branch_from_alpha(signs, &space.profile, &up, false, opts)?;
    let lower = branch_from_alpha(signs, &space.profile, &down, true, opts)?;

    Ok(SolitonSurface {
        rule: AssemblyRule::TwoBranch,
        kind: SurfaceKind::TwoBranch(TwoBranch {
            space: space.clone(),
            epsilon: space.canonical_epsilon,
            alpha: up,
            y_neck: 0.0,
            s_neck,
            neck_curvature,
            lower,
            upper,
        }),
        smoothness: None,
    })
}

// ---------------------------------------------------------------------------
// export
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MeshFormat {
    Obj,
    Csv,
}

#[derive(Debug, Clone, Copy)]
pub struct MeshResolution {
    pub angular: usize,
    pub radial: usize,
}

/// 12 significant digits, reproducible.
pub fn sig12(v: f64) -> String {
    format!("{v:.11e}")
}

fn profile_rows(sol: &ProfileSolution, n: usize, out: &mut String) {
    let (s0, s1) = (sol.s_min(), sol.s_max());
    for i in 0..n {
        let s = s0 + (s1 - s0) * i as f64 / (n - 1).max(1) as f64;
        out.push_str(&format!(
            "{},{},{}\n",
            sig12(s),
            sig12(sol.eval_f(s)),
            sig12(sol.eval_fprime(s))
        ));
    }
}

/// CSV for a profile solution: header "s,f,fprime", 12 significant digits.
pub fn profile_csv(sol: &ProfileSolution, n: usize) -> String {
    let mut out = String::from("s,f,fprime\n");
    profile_rows(sol, n, &mut out);
    out
}

/// Parse rows written by [`profile_csv`].
pub fn parse_profile_csv(text: &str) -> Result<Vec<(f64, f64, f64)>> {
    let mut lines = text.lines();
    let header = lines.next().unwrap_or("");
    if header != "s,f,fprime" {
        return Err(SolitonError::Config(format!("unexpected CSV header `{header}`")));
    }
    let mut rows = Vec::new();
    for (i, line) in lines.enumerate() {
        if line.is_empty() {
            continue;
        }
        let cols: Vec<_> = line.split(',').collect();
        if cols.len() != 3 {
            return Err(SolitonError::Config(format!("bad CSV row {}", i + 2)));
        }
        let parse = |c: &str| {
            c.parse::<f64>()
                .map_err(|e| SolitonError::Config(format!("row {}: {e}", i + 2)))
        };
        rows.push((parse(cols[0])?, parse(cols[1])?, parse(cols[2])?));
    }
    Ok(rows)
}

fn revolution_obj(sol: &ProfileSolution, res: MeshResolution, out: &mut String) {
    let (s0, s1) = (sol.s_min(), sol.s_max());
    // band index major: radial bands, angular samples within each band
    for i in 0..res.radial {
        let s = s0 + (s1 - s0) * i as f64 / (res.radial - 1).max(1) as f64;
        let z = sol.eval_f(s);
        for j in 0..res.angular {
            let th = 2.0 * std::f64::consts::PI * j as f64 / res.angular as f64;
            out.push_str(&format!(
                "v {} {} {}\n",
                sig12(s * th.cos()),
                sig12(s * th.sin()),
                sig12(z)
            ));
        }
    }
    // quads split into two triangles, outward orientation per the upward normal
    let idx = |i: usize, j: usize| (i * res.angular + j % res.angular + 1) as i64;
    for i in 0..res.radial.saturating_sub(1) {
        for j in 0..res.angular {
            out.push_str(&format!("f {} {} {}\n", idx(i, j), idx(i, j + 1), idx(i + 1, j + 1)));
            out.push_str(&format!("f {} {} {}\n", idx(i, j), idx(i + 1, j + 1), idx(i + 1, j)));
        }
    }
}

fn boost_grid_extent(g: &GluedBoost) -> f64 {
    0.95 * g.sol1.s_max().min(g.sol2.s_max())
}

/// Serialize a surface. OBJ needs an embedding chart; CSV emits "s,f,fprime"
/// profile rows or "x,y,u" planar rows depending on the assembly.
pub fn export_mesh(surface: &SolitonSurface, format: MeshFormat, res: MeshResolution) -> Result<Vec<u8>> {
    let mut out = String::new();
    match (&surface.kind, format) {
        (SurfaceKind::SingleGraph(g), MeshFormat::Csv) => {
            out.push_str("s,f,fprime\n");
            profile_rows(&g.solution, res.radial, &mut out);
        }
        (SurfaceKind::SingleGraph(g), MeshFormat::Obj) => {
            match g.space.embedding {
                Some(EmbeddingChart::RevolutionEuclidean) | Some(EmbeddingChart::RevolutionMinkowski) => {
                    revolution_obj(&g.solution, res, &mut out)
                }
                _ => return Err(SolitonError::NoEmbedding),
            }
        }
        (SurfaceKind::TwoBranch(t), MeshFormat::Csv) => {
            out.push_str("s,f,fprime\n");
            profile_rows(&t.lower, res.radial, &mut out);
            profile_rows(&t.upper, res.radial, &mut out);
        }
        (SurfaceKind::TwoBranch(t), MeshFormat::Obj) => {
            if t.space.embedding.is_none() {
                return Err(SolitonError::NoEmbedding);
            }
            revolution_obj(&t.lower, res, &mut out);
            // second branch gets its own vertex block; indices continue
            let base = res.radial * res.angular;
            let mut block = String::new();
            revolution_obj(&t.upper, res, &mut block);
            for line in block.lines() {
                if let Some(rest) = line.strip_prefix("f ") {
                    let shifted: Vec<String> = rest
                        .split_whitespace()
                        .map(|t| (t.parse::<i64>().unwrap() + base as i64).to_string())
                        .collect();
                    out.push_str(&format!("f {}\n", shifted.join(" ")));
                } else {
                    out.push_str(line);
                    out.push('\n');
                }
            }
        }
        (SurfaceKind::QuadrantGlue(g), MeshFormat::Csv) => {
            out.push_str("x,y,u\n");
            let ext = boost_grid_extent(g) / std::f64::consts::SQRT_2;
            let n = res.radial.max(2);
            for i in 0..n {
                let x = -ext + 2.0 * ext * i as f64 / (n - 1) as f64;
                for j in 0..n {
                    let y = -ext + 2.0 * ext * j as f64 / (n - 1) as f64;
                    if let Some(u) = g.eval(x, y) {
                        out.push_str(&format!("{},{},{}\n", sig12(x), sig12(y), sig12(u)));
                    }
                }
            }
        }
        (SurfaceKind::QuadrantGlue(g), MeshFormat::Obj) => {
            let ext = boost_grid_extent(g) / std::f64::consts::SQRT_2;
            let n = res.radial.max(2);
            let mut index = vec![vec![0i64; n]; n];
            let mut next = 1i64;
            for i in 0..n {
                let x = -ext + 2.0 * ext * i as f64 / (n - 1) as f64;
                for j in 0..n {
                    let y = -ext + 2.0 * ext * j as f64 / (n - 1) as f64;
                    if let Some(u) = g.eval(x, y) {
                        out.push_str(&format!("v {} {} {}\n", sig12(x), sig12(y), sig12(u)));
                        index[i][j] = next;
                        next += 1;
                    }
                }
            }
            for i in 0..n - 1 {
                for j in 0..n - 1 {
                    let (a, b, c, d) = (index[i][j], index[i + 1][j], index[i + 1][j + 1], index[i][j + 1]);
                    if a > 0 && b > 0 && c > 0 && d > 0 {
                        out.push_str(&format!("f {a} {b} {c}\n"));
                        out.push_str(&format!("f {a} {c} {d}\n"));
                    }
                }
            }
        }
    }
    Ok(out.into_bytes())
}

// ---------------------------------------------------------------------------
// canonical boost assembly used by the CLI and tests
// ---------------------------------------------------------------------------

/// Solve both quadrant problems from their singular starts and glue them.
pub fn standard_boost_surface(a: f64, s_max: f64, opts: &IntegrateOptions) -> Result<SolitonSurface> {
    let omega1 = crate::spaces::boost_omega1();
    let omega2 = crate::spaces::boost_omega2();
    let p1 = SolitonProblem {
        signs: SignPair::new(1, 1)?,
        profile: omega1.profile.clone(),
        s0: 0.0,
        f0: a,
        f1: 0.0,
        singular_start: true,
    };
    let p2 = SolitonProblem {
        signs: SignPair::new(1, -1)?,
        profile: omega2.profile.clone(),
        s0: 0.0,
        f0: a,
        f1: 0.0,
        singular_start: true,
    };
    let sol1 = integrate(&p1, s_max, opts)?;
    let sol2 = integrate(&p2, s_max, opts)?;
    let order = opts.jet_order.max(DEFAULT_GLUE_ORDER);
    let jet1 = crate::profile_ode::jet::jet_at_pole(p1.signs, rat(1, 1), order, 0.0)?;
    let jet2 = crate::profile_ode::jet::jet_at_pole(p2.signs, rat(-1, 1), order, 0.0)?;
    glue_boost(&jet1, &jet2, &sol1, &sol2)
}
