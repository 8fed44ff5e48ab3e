use thiserror::Error;

/// Errors produced by the geometry, tracer and experiment layers.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid point: {0}")]
    InvalidPoint(String),
    #[error("invalid map: {0}")]
    InvalidMap(String),
    #[error("degenerate geodesic: endpoints coincide")]
    DegenerateGeodesic,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("orbit ball radius {0} exceeds the enumeration limit of 3")]
    SizeLimit(f64),
    #[error("unknown orbifold model `{0}`")]
    UnknownModel(String),
    #[error("radius {radius} violates the embedding bound R = {max_radius}")]
    EmbeddingViolated { radius: f64, max_radius: f64 },
    #[error("geodesic passes through the cone point (d = {0:e}); resample")]
    ConePointHit(f64),
    #[error("overlapping excursions at t = {0} although r < R")]
    OverlappingExcursions(f64),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Io(e.to_string())
    }
}
