use thiserror::Error;

/// Errors raised by the exact core.
///
/// The variants split into precondition failures (bad mathematical input)
/// and invariant breaches (`Invariant`), which indicate a bug.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolarError {
    #[error("zero polynomial where a nonzero one is required")]
    ZeroPolynomial,
    #[error("zero differential")]
    ZeroDifferential,
    #[error("pole of order {order} at {at}; only first-order poles are allowed")]
    HigherOrderPole { order: i64, at: String },
    #[error("cannot add scalars carrying (2πi)^{left} and (2πi)^{right}")]
    TauMismatch { left: i32, right: i32 },
    #[error("values live in different number fields")]
    FieldMismatch,
    #[error("invalid curve: {0}")]
    InvalidCurve(String),
    #[error("point is not on the curve: {0}")]
    NotOnCurve(String),
    #[error("polynomial is not irreducible: {0}")]
    Reducible(String),
    #[error("expression has a pole at a root of the conjugacy polynomial")]
    PoleAtRoot,
    #[error("both polynomials are constant in the eliminated variable")]
    ConstantInEliminated,
    #[error("the two points must be distinct")]
    SamePoint,
    #[error("unsupported Weierstrass input: {0}")]
    Weierstrass(String),
    #[error("support point lies on a puncture: {0}")]
    PunctureInSupport(String),
    #[error("non-transverse intersection at {0}")]
    NonTransverse(String),
    #[error("singular point encountered: {0}")]
    Singular(String),
    #[error("pole divisor is not normal crossing: {0}")]
    NotNormalCrossing(String),
    #[error("line is not a pole line of the form")]
    NotAPoleLine,
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("homology did not stabilize within {cap} support points")]
    NonStabilization { cap: usize },
    #[error("quadrature failed: {0}")]
    Quadrature(String),
    #[error("unsupported input: {0}")]
    Unsupported(String),
    #[error("series precision exhausted")]
    InsufficientPrecision,
    #[error("internal invariant breached: {0}")]
    Invariant(String),
}

impl PolarError {
    /// True for errors that signal a bug rather than bad input.
    pub fn is_internal(&self) -> bool {
        matches!(self, PolarError::Invariant(_) | PolarError::InsufficientPrecision)
    }
}

pub type Result<T> = std::result::Result<T, PolarError>;
