use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },

    #[error("unknown variable `{name}` at byte {offset}")]
    UnknownVariable { name: String, offset: usize },

    /// p(0,0) = 0, so the polynomial cannot be normalized to p(0) = 1.
    #[error("the origin lies on the curve (p(0,0) = 0)")]
    OriginOnCurve,

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("polynomials have degree zero")]
    DegreeZero,

    /// The eliminant vanishes identically: the inputs share a common factor.
    #[error("resultant vanishes identically (common factor involving x1)")]
    IdenticallyZero,

    #[error("determinant is not proportional to p: coefficient of {monomial} is {found}, expected {expected}")]
    Mismatch {
        monomial: String,
        expected: f64,
        found: f64,
    },

    #[error("cubic is singular at ({x0}:{x1}:{x2}); use the rational parametrization route")]
    SingularCubic { x0: f64, x1: f64, x2: f64 },

    #[error("no real homotopy parameter makes the Hessian pencil proportional to p")]
    NoRealSolution,

    #[error("unknown fixture `{0}`")]
    UnknownFixture(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("numerical failure: {0}")]
    Numerical(String),
}

impl Error {
    /// True for errors caused by malformed or unsuitable input, as opposed
    /// to failures of the numerical machinery.
    pub fn is_input_error(&self) -> bool {
        !matches!(self, Error::Numerical(_))
    }
}
