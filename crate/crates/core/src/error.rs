use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("half-space normal must be nonzero")]
    ZeroNormal,

    #[error("polytope is unbounded (recession direction {direction:?})")]
    UnboundedPolytope { direction: Vec<String> },

    #[error("polytope is empty")]
    EmptyPolytope,

    #[error("invalid polytope: {0}")]
    InvalidPolytope(String),

    #[error("invalid surface: {0}")]
    InvalidSurface(String),

    #[error("h = {h} is outside component {component}")]
    OutsideComponent { component: usize, h: f64 },

    #[error("component index {0} out of range")]
    NoSuchComponent(usize),

    #[error("root refinement did not converge for component {component} at level {level} (residual {residual:e})")]
    NonconvergedBisection {
        component: usize,
        level: i64,
        residual: f64,
    },

    #[error("cut {index} has a nonzero modular coordinate and would meet the critical hypersurface")]
    CutHitsZ { index: usize },

    #[error("signed dimension did not stabilize: {counts:?} at windows starting {start}")]
    NotStabilized { start: u32, counts: Vec<i64> },

    #[error("manifold is not a surface")]
    NotASurface,

    #[error("oracle box of half-width {bound} is too small (vertex coordinate {coordinate})")]
    BoxTooSmall { bound: i64, coordinate: String },

    #[error("sampling grid too coarse for component {component} at level {level}")]
    GridTooCoarse { component: usize, level: i64 },

    #[error("invalid oracle configuration: {0}")]
    InvalidOracleConfig(String),

    #[error("could not parse rational {0:?}")]
    ParseRational(String),

    #[error("manifest: {0}")]
    Manifest(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
