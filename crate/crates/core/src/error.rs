use thiserror::Error;

/// Which structural check rejected a candidate solution.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StructureCheck {
    ShapeValidity,
    AngleCondition,
    Orientation,
}

impl std::fmt::Display for StructureCheck {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            StructureCheck::ShapeValidity => "shape-validity",
            StructureCheck::AngleCondition => "angle-condition",
            StructureCheck::Orientation => "orientation",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("operands carry different algebra tags (q = {0} vs q = {1})")]
    TagMismatch(f64, f64),
    #[error("element {re} + {im}k (q = {q}) is a zero divisor")]
    NonInvertible { re: f64, im: f64, q: f64 },
    #[error("operation not defined for q = {0}")]
    UnsupportedRegime(f64),
    #[error("homogeneous pair does not define a point of the projective line")]
    DegeneratePoint,
    #[error("points do not span an ideal triangle")]
    NoIdealTriangle,
    #[error("cross-ratio undefined: a required inverse is a zero divisor")]
    UndefinedCrossRatio,
    #[error("cross-ratio lies outside the affine chart")]
    OutsideChart,
    #[error("degenerate shape parameter")]
    DegenerateShape,
    #[error("matrix is not Anosov (trace {0})")]
    NotAnosov(i64),
    #[error("invalid matrix: determinant {0} is not 1")]
    InvalidMatrix(i64),
    #[error("invalid word: {0}")]
    InvalidWord(String),
    #[error("monomial not evaluable at tetrahedron {tet}, slot {slot}")]
    Evaluation { tet: usize, slot: char },
    #[error("shape of tetrahedron {0} sits at a singular value")]
    SingularPoint(usize),
    #[error("kernel dimension is not 1 (singular values {smallest:e}, {second:e})")]
    Rank { smallest: f64, second: f64 },
    #[error("continuation stalled at H = {reached} before reaching {target}")]
    ContinuationBudget { reached: f64, target: f64 },
    #[error("Newton iteration did not converge (residual {0:e})")]
    NoConvergence(f64),
    #[error("solution fails the {check} check at index {index}")]
    InvalidStructure { check: StructureCheck, index: usize },
    #[error("mass {0} >= 0 would reverse orientation")]
    OrientationImpossible(f64),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

impl Error {
    /// Stable machine-readable identifier.
    pub fn code(&self) -> &'static str {
        match self {
            Error::TagMismatch(..) => "tag-mismatch",
            Error::NonInvertible { .. } => "non-invertible",
            Error::UnsupportedRegime(_) => "unsupported-regime",
            Error::DegeneratePoint => "degenerate-point",
            Error::NoIdealTriangle => "no-ideal-triangle",
            Error::UndefinedCrossRatio => "undefined-cross-ratio",
            Error::OutsideChart => "outside-chart",
            Error::DegenerateShape => "degenerate-shape",
            Error::NotAnosov(_) => "not-anosov",
            Error::InvalidMatrix(_) => "invalid-matrix",
            Error::InvalidWord(_) => "invalid-word",
            Error::Evaluation { .. } => "evaluation",
            Error::SingularPoint(_) => "singular-point",
            Error::Rank { .. } => "rank",
            Error::ContinuationBudget { .. } => "continuation-budget",
            Error::NoConvergence(_) => "no-convergence",
            Error::InvalidStructure { .. } => "invalid-structure",
            Error::OrientationImpossible(_) => "orientation-impossible",
            Error::InvalidInput(_) => "invalid-input",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
