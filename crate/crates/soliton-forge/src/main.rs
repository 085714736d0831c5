//! Command-line front end: solve profiles, build catenoids and glued
//! surfaces, run verification oracles, export data and meshes.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use soliton_forge::assembly::{
    self, export_mesh, make_catenoid, profile_csv, standard_boost_surface, MeshFormat,
    MeshResolution, SolitonSurface, SurfaceKind,
};
use soliton_forge::profile_ode::{integrate_range, IntegrateOptions, Termination, Tolerances};
use soliton_forge::spaces;
use soliton_forge::verify::{self, ode_residual};
use soliton_forge::{SignPair, SolitonError, SolitonProblem};

const EXIT_CONFIG: u8 = 2;
const EXIT_EVENT: u8 = 3;
const EXIT_GATE: u8 = 4;
const DEFAULT_GATE: f64 = 1e-6;

#[derive(Parser)]
#[command(name = "soliton-forge", about = "translating soliton profile toolkit", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List the space catalog.
    List,
    /// Integrate a profile and write it as CSV.
    Solve(RunArgs),
    /// Build a two-branch catenoid around a neck.
    Catenoid(RunArgs),
    /// Assemble and certify the boost-invariant glued soliton.
    Glue(RunArgs),
    /// Run a verification oracle on an exported profile CSV.
    Verify(RunArgs),
    /// Export a solved surface as OBJ or CSV.
    Export(RunArgs),
}

#[derive(Args, Default, Clone)]
struct RunArgs {
    /// key=value config file; command-line flags win over file entries
    #[arg(long)]
    config: Option<PathBuf>,
    /// space id, e.g. euclidean:n=2 or boost:omega1
    #[arg(long)]
    space: Option<String>,
    /// vertical signature sign (+1 or -1); defaults to the space's canonical choice
    #[arg(long, allow_hyphen_values = true)]
    epsilon: Option<i8>,
    #[arg(long, allow_hyphen_values = true)]
    s0: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    f0: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    f1: Option<f64>,
    /// singular start at the profile pole with f(pole) = a
    #[arg(long, value_name = "A", allow_hyphen_values = true)]
    singular: Option<f64>,
    /// integration range "begin,end"
    #[arg(long, allow_hyphen_values = true)]
    range: Option<String>,
    #[arg(long)]
    tol_abs: Option<f64>,
    #[arg(long)]
    tol_rel: Option<f64>,
    #[arg(long)]
    jet_order: Option<usize>,
    /// neck abscissa for catenoid
    #[arg(long)]
    s_neck: Option<f64>,
    /// catenoid height extent
    #[arg(long)]
    extent: Option<f64>,
    /// cone value for glue
    #[arg(long, allow_hyphen_values = true)]
    a: Option<f64>,
    /// input CSV for verify/export
    #[arg(long)]
    input: Option<PathBuf>,
    /// oracle for verify: ode | hperturbed
    #[arg(long)]
    oracle: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// export format: obj | csv
    #[arg(long)]
    format: Option<String>,
    /// worker threads (output is identical for any value)
    #[arg(long)]
    threads: Option<usize>,
}

/// Flat key=value run configuration; mirrors the flags.
#[derive(Debug, Clone, Default)]
struct RunConfig {
    space: Option<String>,
    epsilon: Option<i8>,
    s0: Option<f64>,
    f0: Option<f64>,
    f1: Option<f64>,
    singular: Option<f64>,
    range: Option<(f64, f64)>,
    tol_abs: Option<f64>,
    tol_rel: Option<f64>,
    jet_order: Option<usize>,
    s_neck: Option<f64>,
    extent: Option<f64>,
    a: Option<f64>,
    input: Option<PathBuf>,
    oracle: Option<String>,
    out: Option<PathBuf>,
    format: Option<String>,
}

fn parse_range(text: &str) -> Result<(f64, f64), SolitonError> {
    let bad = || SolitonError::Config(format!("bad range `{text}`, expected begin,end"));
    let (a, b) = text.split_once(',').ok_or_else(bad)?;
    let lo: f64 = a.trim().parse().map_err(|_| bad())?;
    let hi: f64 = b.trim().parse().map_err(|_| bad())?;
    Ok((lo, hi))
}

impl RunConfig {
    fn from_file(path: &PathBuf) -> Result<Self, SolitonError> {
        let text = std::fs::read_to_string(path)?;
        let mut cfg = RunConfig::default();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                SolitonError::Config(format!("line {}: expected key=value", lineno + 1))
            })?;
            let (key, value) = (key.trim(), value.trim());
            let num = |v: &str| {
                v.parse::<f64>()
                    .map_err(|e| SolitonError::Config(format!("line {}: {e}", lineno + 1)))
            };
            match key {
                "space" => cfg.space = Some(value.to_string()),
                "epsilon" => {
                    cfg.epsilon = Some(value.parse().map_err(|e| {
                        SolitonError::Config(format!("line {}: {e}", lineno + 1))
                    })?)
                }
                "s0" => cfg.s0 = Some(num(value)?),
                "f0" => cfg.f0 = Some(num(value)?),
                "f1" => cfg.f1 = Some(num(value)?),
                "singular" => cfg.singular = Some(num(value)?),
                "range" => cfg.range = Some(parse_range(value)?),
                "tol_abs" => cfg.tol_abs = Some(num(value)?),
                "tol_rel" => cfg.tol_rel = Some(num(value)?),
                "jet_order" => {
                    cfg.jet_order = Some(value.parse().map_err(|e| {
                        SolitonError::Config(format!("line {}: {e}", lineno + 1))
                    })?)
                }
                "s_neck" => cfg.s_neck = Some(num(value)?),
                "extent" => cfg.extent = Some(num(value)?),
                "a" => cfg.a = Some(num(value)?),
                "input" => cfg.input = Some(PathBuf::from(value)),
                "oracle" => cfg.oracle = Some(value.to_string()),
                "out" => cfg.out = Some(PathBuf::from(value)),
                "format" => cfg.format = Some(value.to_string()),
                other => {
                    return Err(SolitonError::Config(format!(
                        "line {}: unknown key `{other}`",
                        lineno + 1
                    )))
                }
            }
        }
        Ok(cfg)
    }

    fn merge_flags(mut self, args: &RunArgs) -> Result<Self, SolitonError> {
        if args.space.is_some() {
            self.space = args.space.clone();
        }
        if args.epsilon.is_some() {
            self.epsilon = args.epsilon;
        }
        if args.s0.is_some() {
            self.s0 = args.s0;
        }
        if args.f0.is_some() {
            self.f0 = args.f0;
        }
        if args.f1.is_some() {
            self.f1 = args.f1;
        }
        if args.singular.is_some() {
            self.singular = args.singular;
        }
        if let Some(r) = &args.range {
            self.range = Some(parse_range(r)?);
        }
        if args.tol_abs.is_some() {
            self.tol_abs = args.tol_abs;
        }
        if args.tol_rel.is_some() {
            self.tol_rel = args.tol_rel;
        }
        if args.jet_order.is_some() {
            self.jet_order = args.jet_order;
        }
        if args.s_neck.is_some() {
            self.s_neck = args.s_neck;
        }
        if args.extent.is_some() {
            self.extent = args.extent;
        }
        if args.a.is_some() {
            self.a = args.a;
        }
        if args.input.is_some() {
            self.input = args.input.clone();
        }
        if args.oracle.is_some() {
            self.oracle = args.oracle.clone();
        }
        if args.out.is_some() {
            self.out = args.out.clone();
        }
        if args.format.is_some() {
            self.format = args.format.clone();
        }
        Ok(self)
    }

    fn resolve(args: &RunArgs) -> Result<Self, SolitonError> {
        let base = match &args.config {
            Some(path) => RunConfig::from_file(path)?,
            None => RunConfig::default(),
        };
        base.merge_flags(args)
    }

    fn options(&self) -> IntegrateOptions {
        let mut opts = IntegrateOptions::default();
        if let Some(a) = self.tol_abs {
            opts.tolerances = Tolerances { abs: a, ..opts.tolerances };
        }
        if let Some(r) = self.tol_rel {
            opts.tolerances = Tolerances { rel: r, ..opts.tolerances };
        }
        if let Some(j) = self.jet_order {
            opts.jet_order = j;
        }
        opts
    }
}

fn gate() -> f64 {
    std::env::var("SOLITON_FORGE_TOL")
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(DEFAULT_GATE)
}

fn sig12(v: f64) -> String {
    assembly::sig12(v)
}

fn cmd_list() -> Result<u8, SolitonError> {
    for space in spaces::catalog() {
        let (a, b) = space.quotient_interval;
        println!(
            "{}\teps_tilde={:+}\th={}\tinterval=({}, {})",
            space.name, space.epsilon_tilde, space.h_formula, a, b
        );
    }
    Ok(0)
}

fn solve_solution(
    cfg: &RunConfig,
) -> Result<(soliton_forge::ProfileSolution, SignPair, soliton_forge::CurvatureProfile), SolitonError> {
    let id = cfg.space.as_deref().ok_or_else(|| SolitonError::Config("missing space".into()))?;
    let space = spaces::lookup(id)?;
    let epsilon = cfg.epsilon.unwrap_or(space.canonical_epsilon);
    let signs = SignPair::new(epsilon, space.epsilon_tilde)?;
    let (begin, end) = cfg.range.ok_or_else(|| SolitonError::Config("missing range".into()))?;
    let problem = if let Some(a) = cfg.singular {
        let (pole, _) = space
            .profile
            .pole()
            .ok_or_else(|| SolitonError::Config(format!("{id} has no pole for a singular start")))?;
        SolitonProblem {
            signs,
            profile: space.profile.clone(),
            s0: pole,
            f0: a,
            f1: 0.0,
            singular_start: true,
        }
    } else {
        SolitonProblem {
            signs,
            profile: space.profile.clone(),
            s0: cfg.s0.ok_or_else(|| SolitonError::Config("missing s0 (or use singular=a)".into()))?,
            f0: cfg.f0.unwrap_or(0.0),
            f1: cfg.f1.unwrap_or(0.0),
            singular_start: false,
        }
    };
    let sol = integrate_range(&problem, begin, end, &cfg.options())?;
    Ok((sol, signs, problem.profile))
}

fn cmd_solve(cfg: &RunConfig) -> Result<u8, SolitonError> {
    let (sol, signs, profile) = solve_solution(cfg)?;
    if let Some(out) = &cfg.out {
        std::fs::write(out, profile_csv(&sol, 801))?;
    }
    let report = ode_residual(&sol, signs, &profile)?;
    println!("{report}");
    if sol.termination != Termination::ReachedEnd {
        eprintln!("integration event before range end: {:?}", sol.termination);
        return Ok(EXIT_EVENT);
    }
    if report.max_abs >= gate() {
        eprintln!("residual gate failed: max_abs={:e} >= {:e}", report.max_abs, gate());
        return Ok(EXIT_GATE);
    }
    Ok(0)
}

fn cmd_catenoid(cfg: &RunConfig) -> Result<u8, SolitonError> {
    let id = cfg.space.as_deref().unwrap_or("euclidean:n=2");
    let space = spaces::lookup(id)?;
    let s_neck = cfg.s_neck.ok_or_else(|| SolitonError::Config("missing s_neck".into()))?;
    let extent = cfg.extent.unwrap_or(3.0);
    let surface = make_catenoid(&space, s_neck, extent, &cfg.options())?;
    let t = match &surface.kind {
        SurfaceKind::TwoBranch(t) => t,
        _ => unreachable!(),
    };
    println!("y0={}", sig12(t.y_neck));
    println!("s_neck={}", sig12(t.s_neck));
    println!("alpha_second_at_neck={}", sig12(t.neck_curvature));
    if let Some(out) = &cfg.out {
        let lower = out.with_extension("lower.csv");
        let upper = out.with_extension("upper.csv");
        std::fs::write(&lower, profile_csv(&t.lower, 401))?;
        std::fs::write(&upper, profile_csv(&t.upper, 401))?;
        println!("wrote {} and {}", lower.display(), upper.display());
    }
    let signs = SignPair::new(t.epsilon, t.space.epsilon_tilde)?;
    for (tag, branch) in [("lower", &t.lower), ("upper", &t.upper)] {
        let rep = ode_residual(branch, signs, &t.space.profile)?;
        println!("branch={tag} max_abs={:e}", rep.max_abs);
        if rep.max_abs >= gate() {
            eprintln!("branch {tag} failed the residual gate");
            return Ok(EXIT_GATE);
        }
    }
    Ok(0)
}

fn cmd_glue(cfg: &RunConfig) -> Result<u8, SolitonError> {
    let a = cfg.a.unwrap_or(0.0);
    let (_, end) = cfg.range.unwrap_or((0.0, 10.0));
    let mut opts = cfg.options();
    opts.jet_order = opts.jet_order.max(cfg.jet_order.unwrap_or(12));
    let surface = standard_boost_surface(a, end, &opts)?;
    let report = surface.smoothness.as_ref().expect("glue always certifies");
    println!("{report}");
    if let Some(out) = &cfg.out {
        let fmt = export_format(cfg)?;
        let bytes = export_mesh(&surface, fmt, MeshResolution { angular: 64, radial: 129 })?;
        std::fs::write(out, bytes)?;
    }
    if report.all_pass() {
        Ok(0)
    } else {
        Ok(EXIT_GATE)
    }
}

fn cmd_verify(cfg: &RunConfig) -> Result<u8, SolitonError> {
    let input = cfg.input.as_ref().ok_or_else(|| SolitonError::Config("missing input".into()))?;
    let id = cfg.space.as_deref().ok_or_else(|| SolitonError::Config("missing space".into()))?;
    let space = spaces::lookup(id)?;
    let epsilon = cfg.epsilon.unwrap_or(space.canonical_epsilon);
    let signs = SignPair::new(epsilon, space.epsilon_tilde)?;
    let rows = assembly::parse_profile_csv(&std::fs::read_to_string(input)?)?;
    if rows.len() < 8 {
        return Err(SolitonError::TooFewNodes(rows.len()));
    }
    let oracle = cfg.oracle.as_deref().unwrap_or("ode");
    let report = verify_csv_rows(&rows, signs, &space, oracle)?;
    println!("{report}");
    if report.max_abs >= gate() {
        eprintln!("verification gate failed: max_abs={:e}", report.max_abs);
        return Ok(EXIT_GATE);
    }
    Ok(0)
}

/// ODE / H-perturbed residual straight from uniformly spaced CSV rows,
/// using 4th-order differences of the tabulated f' column.
fn verify_csv_rows(
    rows: &[(f64, f64, f64)],
    signs: SignPair,
    space: &spaces::SpaceDescriptor,
    oracle: &str,
) -> Result<verify::ResidualReport, SolitonError> {
    let h = rows[1].0 - rows[0].0;
    for w in rows.windows(2) {
        if ((w[1].0 - w[0].0) - h).abs() > 1e-9 * h.abs().max(1.0) {
            return Err(SolitonError::Config("CSV abscissas are not uniformly spaced".into()));
        }
    }
    let ep = signs.eps();
    let et = signs.eps_tilde();
    let mut max_abs = 0.0f64;
    let mut at = String::from("-");
    let mut sq = 0.0;
    let mut n = 0usize;
    for i in 2..rows.len() - 2 {
        let s = rows[i].0;
        let wm2 = rows[i - 2].2;
        let wm1 = rows[i - 1].2;
        let wc = rows[i].2;
        let wp1 = rows[i + 1].2;
        let wp2 = rows[i + 2].2;
        let fsecond = (-wp2 + 8.0 * wp1 - 8.0 * wm1 + wm2) / (12.0 * h);
        let hval = space.profile.value(s)?;
        let r = match oracle {
            "ode" => fsecond - soliton_forge::profile_ode::rhs(signs, hval, wc),
            "hperturbed" => {
                let wsq = |w: f64| ep + et * w * w;
                let epsp = wsq(wc).signum();
                let wfun = |w: f64| -> Result<f64, SolitonError> {
                    let q = epsp * wsq(w);
                    if q <= 0.0 {
                        return Err(SolitonError::DegenerateW { at: format!("{s}") });
                    }
                    Ok(q.sqrt())
                };
                let g2 = wm2 / wfun(wm2)?;
                let g1 = wm1 / wfun(wm1)?;
                let gp1 = wp1 / wfun(wp1)?;
                let gp2 = wp2 / wfun(wp2)?;
                let dg = (-gp2 + 8.0 * gp1 - 8.0 * g1 + g2) / (12.0 * h);
                let wc_w = wfun(wc)?;
                et * dg - 1.0 / wc_w + wc * hval / wc_w
            }
            other => return Err(SolitonError::Config(format!("unknown oracle `{other}`"))),
        };
        sq += r * r;
        n += 1;
        if r.abs() >= max_abs {
            max_abs = r.abs();
            at = format!("{s}");
        }
    }
    Ok(verify::ResidualReport {
        max_abs,
        rms: (sq / n.max(1) as f64).sqrt(),
        n,
        h_grid: Some(h),
        at,
    })
}

fn export_format(cfg: &RunConfig) -> Result<MeshFormat, SolitonError> {
    match cfg.format.as_deref().unwrap_or("csv") {
        "obj" => Ok(MeshFormat::Obj),
        "csv" => Ok(MeshFormat::Csv),
        other => Err(SolitonError::Config(format!("unknown format `{other}`"))),
    }
}

fn cmd_export(cfg: &RunConfig) -> Result<u8, SolitonError> {
    let (sol, _signs, _) = solve_solution(cfg)?;
    let id = cfg.space.as_deref().unwrap();
    let space = spaces::lookup(id)?;
    let epsilon = cfg.epsilon.unwrap_or(space.canonical_epsilon);
    let surface = SolitonSurface::single_graph(space, epsilon, sol);
    let bytes = export_mesh(&surface, export_format(cfg)?, MeshResolution { angular: 64, radial: 129 })?;
    match &cfg.out {
        Some(out) => std::fs::write(out, bytes)?,
        None => print!("{}", String::from_utf8_lossy(&bytes)),
    }
    Ok(0)
}

fn exit_code_for(err: &SolitonError) -> u8 {
    match err {
        SolitonError::Config(_) | SolitonError::UnknownSpace(_) | SolitonError::Io(_) => EXIT_CONFIG,
        SolitonError::InvalidProblem(_) => EXIT_CONFIG,
        SolitonError::StepSizeUnderflow { .. } => EXIT_EVENT,
        _ => EXIT_EVENT,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let run = |args: &RunArgs, f: fn(&RunConfig) -> Result<u8, SolitonError>| -> u8 {
        match RunConfig::resolve(args).and_then(|cfg| f(&cfg)) {
            Ok(code) => code,
            Err(e) => {
                eprintln!("{e}");
                exit_code_for(&e)
            }
        }
    };
    let code = match &cli.command {
        Command::List => match cmd_list() {
            Ok(c) => c,
            Err(e) => {
                eprintln!("{e}");
                EXIT_CONFIG
            }
        },
        Command::Solve(args) => run(args, cmd_solve),
        Command::Catenoid(args) => run(args, cmd_catenoid),
        Command::Glue(args) => run(args, cmd_glue),
        Command::Verify(args) => run(args, cmd_verify),
        Command::Export(args) => run(args, cmd_export),
    };
    ExitCode::from(code)
}
