use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("context mismatch: {0}")]
    ContextMismatch(String),
    #[error("non-invertible supernumber: body is zero")]
    NonInvertible,
    #[error("domain error for {tag}: {reason}")]
    DomainError { tag: &'static str, reason: String },
    #[error("{tag} is not available for {kind} scalars")]
    AnalyticUnsupported { tag: &'static str, kind: &'static str },
    #[error("parity violation: {0}")]
    ParityViolation(String),
    #[error("grading violation: {0}")]
    GradingViolation(String),
    #[error("determinant is not one (residual {residual:e})")]
    DeterminantNotOne { residual: f64 },
    #[error("OSp invariant violated: {0}")]
    InvariantViolation(String),
    #[error("matrix does not have quadratic-form shape: {0}")]
    ShapeError(String),
    #[error("point is not on the super hyperbolic plane (residual {residual:e})")]
    NotOnIh { residual: f64 },
    #[error("vector is not on the positive light cone (residual {residual:e})")]
    NotLightlike { residual: f64 },
    #[error("endpoint pairing cannot be normalized: {0}")]
    ScaleMismatch(String),
    #[error("points have coincident bodies; the tangent direction is singular")]
    CoincidentBodies,
    #[error("point lies on the geodesic")]
    PointOnLine,
    #[error("degenerate triangle: {0}")]
    DegenerateTriangle(String),
    #[error("sampler gave up after {0} attempts")]
    SamplerExhausted(u32),
    #[error("configuration is non-generic: {0}")]
    NonGeneric(String),
    #[error("ill-conditioned pair coefficients: {0}")]
    IllConditioned(String),
    #[error("geodesics do not intersect")]
    NotIntersecting,
    #[error("decomposition residual too large ({0:e})")]
    ResidualTooLarge(f64),
    #[error("degenerate frame: {0}")]
    DegenerateFrame(String),
    #[error("geodesics are not parallel: {0}")]
    NotParallel(String),
    #[error("no common perpendicular: {0}")]
    UltraparallelNoPerpendicular(String),
    #[error("condition residual ambiguous near the tolerance boundary: {0}")]
    ConditionResidualAmbiguous(String),
    #[error("parse error at byte {pos}: {msg}")]
    ParseError { pos: usize, msg: String },
    #[error("invalid JSON input: {0}")]
    JsonError(String),
    #[error("invalid option: {0}")]
    OptionError(String),
}

impl Error {
    /// Stable machine-readable code, used by the CLI error stream and the C API.
    pub fn code(&self) -> &'static str {
        use Error::*;
        match self {
            ContextMismatch(_) => "context_mismatch",
            NonInvertible => "non_invertible",
            DomainError { .. } => "domain_error",
            AnalyticUnsupported { .. } => "analytic_unsupported",
            ParityViolation(_) => "parity_violation",
            GradingViolation(_) => "grading_violation",
            DeterminantNotOne { .. } => "determinant_not_one",
            InvariantViolation(_) => "invariant_violation",
            ShapeError(_) => "shape_error",
            NotOnIh { .. } => "not_on_ih",
            NotLightlike { .. } => "not_lightlike",
            ScaleMismatch(_) => "scale_mismatch",
            CoincidentBodies => "coincident_bodies",
            PointOnLine => "point_on_line",
            DegenerateTriangle(_) => "degenerate_triangle",
            SamplerExhausted(_) => "sampler_exhausted",
            NonGeneric(_) => "non_generic",
            IllConditioned(_) => "ill_conditioned",
            NotIntersecting => "not_intersecting",
            ResidualTooLarge(_) => "residual_too_large",
            DegenerateFrame(_) => "degenerate_frame",
            NotParallel(_) => "not_parallel",
            UltraparallelNoPerpendicular(_) => "ultraparallel_no_perpendicular",
            ConditionResidualAmbiguous(_) => "condition_residual_ambiguous",
            ParseError { .. } => "parse_error",
            JsonError(_) => "json_error",
            OptionError(_) => "option_error",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
