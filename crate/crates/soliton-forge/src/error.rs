use thiserror::Error;

/// Errors surfaced by the solver, catalog, assembly and verification layers.
#[derive(Debug, Error)]
pub enum SolitonError {
    #[error("degenerate jet: 1 + eps_tilde*c = 0 or a recurrence denominator vanished at order {order}")]
    DegenerateJet { order: usize },

    #[error("jet construction failed: {0}")]
    JetFailure(String),

    #[error("step size underflow at s = {s}")]
    StepSizeUnderflow { s: f64 },

    #[error("neck is degenerate: h(s_neck) = 0")]
    NeckDegenerate,

    #[error("gradient of the projection is lightlike at t = {t}")]
    LightlikeGradient { t: f64 },

    #[error("unknown space id `{0}`")]
    UnknownSpace(String),

    #[error("space `{0}` has no pre-normalization quotient data")]
    NoRawData(String),

    #[error("unsupported lift: only harmonic generic lifts are implemented")]
    UnsupportedLift,

    #[error("exact gluing relation failed at order {order}: {detail}")]
    GlueMismatch { order: usize, detail: String },

    #[error("branch is not strictly monotone near y = {y}")]
    InversionFailure { y: f64 },

    #[error("surface has no embedding chart")]
    NoEmbedding,

    #[error("too few nodes for residual sampling (need at least 8, got {0})")]
    TooFewNodes(usize),

    #[error("W^2 = eps'(eps + |grad u|^2) is nonpositive at {at}")]
    DegenerateW { at: String },

    #[error("induced metric is degenerate (lightlike) at s = {s}")]
    DegenerateMetric { s: f64 },

    #[error("profile evaluation refused at s = {s}: {reason}")]
    ProfileEvaluation { s: f64, reason: String },

    #[error("invalid problem: {0}")]
    InvalidProblem(String),

    #[error("config error: {0}")]
    Config(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, SolitonError>;
