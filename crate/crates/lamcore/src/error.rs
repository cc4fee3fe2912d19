use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("genus must be at least 2, got {0}")]
    InvalidGenus(usize),
    #[error("expected {expected} coordinates, got {found}")]
    WrongLength { expected: usize, found: usize },
    #[error("triangle {0} violates parity")]
    ViolatedParity(usize),
    #[error("triangle {0} violates the triangle inequality")]
    ViolatedTriangleInequality(usize),
    #[error("normal curve has an inessential component")]
    TrivialComponent,
    #[error("curves are not disjoint")]
    NotDisjoint,
    #[error("curve is not a single simple component")]
    NotSimple,
    #[error("surfaces differ")]
    SurfaceMismatch,
    #[error("bad triangulation: {0}")]
    BadTriangulation(String),
    #[error("support is not contained in the piece")]
    SupportOutsidePiece,
    #[error("scale must be positive")]
    NonPositiveScale,
    #[error("weights must be positive")]
    NonPositiveWeight,
    #[error("components intersect or repeat")]
    BadComponents,
    #[error("lamination is zero")]
    ZeroLamination,
    #[error("vector lamination is empty")]
    EmptyLamination,
    #[error("both laminations are zero")]
    BothZero,
    #[error("curve is inessential")]
    InessentialCurve,
    #[error("norm is not less than one")]
    NormNotLessThanOne,
    #[error("direction is zero")]
    ZeroDirection,
    #[error("samples must be positive and increasing")]
    InvalidSamples,
    #[error("malformed piece: {0}")]
    MalformedPiece(String),
    #[error("budget exceeded")]
    BudgetExceeded,
    #[error("vector length {found} does not match {expected}")]
    Dimension { expected: usize, found: usize },
    #[error("unknown curve {0}")]
    UnknownCurve(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
