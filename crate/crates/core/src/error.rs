use thiserror::Error;

/// Everything that can go wrong in the library, grouped by what the caller
/// can do about it.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("region boundary is not closed: gap {gap:e} after segment {segment}")]
    RegionMalformed { segment: usize, gap: f64 },
    #[error("region segment {0} passes through the origin")]
    DegenerateRegion(usize),
    #[error("arc is invalid: {0}")]
    InvalidArc(String),
    #[error("unsupported topology: {0}")]
    UnsupportedTopology(String),
    #[error("angle out of domain: {0}")]
    Domain(String),
    #[error("point lies on the polyline")]
    OnBoundary,
    #[error("symmetry broken: asymmetry {asymmetry:e} exceeds {threshold:e}")]
    SymmetryBroken { asymmetry: f64, threshold: f64 },
    #[error("degenerate tangent at vertex {0}")]
    DegenerateTangent(usize),
    #[error("vertex {0} is within 1e-12 of the origin")]
    NearOrigin(usize),
    #[error("time step underflow: dt = {0:e}")]
    ResolutionExhausted(f64),
    #[error("root finding failed: {0}")]
    RootFailure(String),
    #[error("profile does not close: gap {0:e}")]
    OpenArc(f64),
    #[error("surgery failed: {0}")]
    SurgeryFailed(String),
    #[error("renormalization failed: {0}")]
    RenormalizationFailed(String),
    #[error("invariant violated: {0}")]
    InvariantViolation(String),
    #[error("shrink time is infinite for a monotone input")]
    InfiniteTime,
    #[error("generator: {0}")]
    Generator(String),
    #[error("config: {0}")]
    Config(String),
    #[error("io: {0}")]
    Io(String),
    #[error("parse: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
