use thiserror::Error;

/// Failure modes shared by every module.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid geometry: {0}")]
    InvalidGeometry(String),
    #[error("point on boundary: {0}")]
    OnBoundary(String),
    #[error("geometry conflict: {0}")]
    GeometryConflict(String),
    #[error("containment violated: {0}")]
    Containment(String),
    #[error("singular point: {0}")]
    SingularPoint(String),
    #[error("target too close to boundary: {0}")]
    NearBoundary(String),
    #[error("ill-posed system: {0}")]
    IllPosed(String),
    #[error("degenerate contour: {0}")]
    DegenerateContour(String),
    #[error("insufficient resolution: {0}")]
    Resolution(String),
    #[error("validity guard: {0}")]
    Validity(String),
    #[error("degree error: {0}")]
    Degree(String),
    #[error("zero function: {0}")]
    ZeroFunction(String),
    #[error("not harmonic: {0}")]
    NotHarmonic(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("complexity guard: {0}")]
    Complexity(String),
    #[error("data error: {0}")]
    Data(String),
}

impl Error {
    /// Short machine-readable code.
    pub fn code(&self) -> &'static str {
        match self {
            Error::InvalidGeometry(_) => "invalid-geometry",
            Error::OnBoundary(_) => "on-boundary",
            Error::GeometryConflict(_) => "geometry-conflict",
            Error::Containment(_) => "containment",
            Error::SingularPoint(_) => "singular-point",
            Error::NearBoundary(_) => "near-boundary",
            Error::IllPosed(_) => "ill-posed",
            Error::DegenerateContour(_) => "degenerate-contour",
            Error::Resolution(_) => "resolution",
            Error::Validity(_) => "validity",
            Error::Degree(_) => "degree",
            Error::ZeroFunction(_) => "zero-function",
            Error::NotHarmonic(_) => "not-harmonic",
            Error::Domain(_) => "domain",
            Error::Complexity(_) => "complexity-guard",
            Error::Data(_) => "data",
        }
    }

    pub fn is_geometry(&self) -> bool {
        matches!(
            self,
            Error::InvalidGeometry(_)
                | Error::OnBoundary(_)
                | Error::GeometryConflict(_)
                | Error::Containment(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
