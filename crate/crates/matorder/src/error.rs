//! Crate-wide error type.

use alloc::string::String;
use core::fmt;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Two matrices were expected to have identical shapes.
    ShapeMismatch {
        expected: (usize, usize),
        found: (usize, usize),
    },
    /// A square matrix was required.
    NonSquare { rows: usize, cols: usize },
    /// A dimension argument was zero or otherwise unusable.
    BadDimension { what: &'static str },
    /// Input to a Hermitian-only routine deviates from `A = A*`.
    NotHermitian { deviation: f64 },
    /// Embedding target is smaller than the source.
    TargetTooSmall { dim: usize, target: usize },
    /// Declared basis is numerically linearly dependent.
    DependentBasis { min_singular_value: f64 },
    /// A space declared `star_closed` has a basis element whose adjoint
    /// leaves the span.
    StarClosureViolated { residual: f64 },
    /// An element does not lie in the span of the space basis.
    OutsideSpan { residual: f64 },
    /// Operation requires the domain to be a full matrix algebra.
    UnsupportedDomain,
    /// Matrix level of an argument does not match the operation.
    LevelMismatch { expected: usize, found: usize },
    /// An element required to be in the matrix cone is not; carries the
    /// witnessing minimal eigenvalue.
    ConeViolation { min_eig: f64 },
    /// A generatively described convex set has no generators.
    EmptyGenerators,
    /// The Bonsall-type hypothesis failed on a sampled cone element.
    HypothesisViolated { level: usize, excess: f64 },
    /// The LP master problem has no feasible point; carries the most
    /// violated row at the best point found.
    LpInfeasible { row: usize, violation: f64 },
    /// The simplex iteration limit was hit (should not occur with Bland
    /// pivoting on well-posed instances).
    LpStalled,
    /// A functional expected to be self-adjoint on Hermitian inputs is not.
    NotSelfAdjoint { deviation: f64 },
    /// Rejection sampling could not produce a requested element.
    SamplingExhausted { what: &'static str },
    /// Free-form argument validation failure.
    BadArgument { what: String },
    /// Unrecognized harness suite name.
    UnknownSuite { name: String },
}

pub type Result<T> = core::result::Result<T, Error>;

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::ShapeMismatch { expected, found } => write!(
                f,
                "shape mismatch: expected {}x{}, found {}x{}",
                expected.0, expected.1, found.0, found.1
            ),
            Error::NonSquare { rows, cols } => {
                write!(f, "square matrix required, found {rows}x{cols}")
            }
            Error::BadDimension { what } => write!(f, "bad dimension: {what}"),
            Error::NotHermitian { deviation } => {
                write!(f, "matrix is not Hermitian (deviation {deviation:e})")
            }
            Error::TargetTooSmall { dim, target } => {
                write!(f, "embedding target {target} smaller than source {dim}")
            }
            Error::DependentBasis { min_singular_value } => write!(
                f,
                "basis is linearly dependent (min singular value {min_singular_value:e})"
            ),
            Error::StarClosureViolated { residual } => write!(
                f,
                "adjoint of a basis element leaves the span (residual {residual:e})"
            ),
            Error::OutsideSpan { residual } => {
                write!(f, "element outside the space span (residual {residual:e})")
            }
            Error::UnsupportedDomain => {
                write!(f, "operation requires a full matrix algebra domain")
            }
            Error::LevelMismatch { expected, found } => {
                write!(f, "matrix level mismatch: expected {expected}, found {found}")
            }
            Error::ConeViolation { min_eig } => {
                write!(f, "element is not in the matrix cone (min eigenvalue {min_eig:e})")
            }
            Error::EmptyGenerators => write!(f, "matrix convex set has no generators"),
            Error::HypothesisViolated { level, excess } => write!(
                f,
                "gauge-domination hypothesis fails at level {level} (excess {excess:e})"
            ),
            Error::LpInfeasible { row, violation } => {
                write!(f, "LP infeasible: row {row} violated by {violation:e}")
            }
            Error::LpStalled => write!(f, "simplex iteration limit exceeded"),
            Error::NotSelfAdjoint { deviation } => {
                write!(f, "functional is not self-adjoint (deviation {deviation:e})")
            }
            Error::SamplingExhausted { what } => {
                write!(f, "sampling exhausted while generating {what}")
            }
            Error::BadArgument { what } => write!(f, "bad argument: {what}"),
            Error::UnknownSuite { name } => write!(f, "unknown suite name: {name}"),
        }
    }
}
