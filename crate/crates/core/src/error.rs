use alloc::string::String;

/// Errors raised by the symbolic and numeric layers.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("{0} of zero form")]
    ZeroForm(&'static str),
    #[error("degree {degree} exceeds jet order {order}")]
    DegreeAboveOrder { degree: u32, order: u32 },
    #[error("map component has a nonzero constant term")]
    ConstantTerm,
    #[error("linear map is singular")]
    SingularLinearMap,
    #[error("map is not purely linear")]
    NotLinear,
    #[error("origin is not a degenerate critical point of the jet")]
    NotDegenerateCritical,
    #[error("jet order {got} is below the required {needed}")]
    OrderTooLow { needed: u32, got: u32 },
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("psi hypotheses violated: {0}")]
    PsiHypotheses(&'static str),
    #[error("verdict is not an E-type singularity")]
    NotEType,
    #[error("internal consistency error: {0}")]
    Internal(String),
}

impl Error {
    /// True for failures that indicate a bug or a broken invariant rather
    /// than bad input.
    pub fn is_internal(&self) -> bool {
        matches!(self, Error::Internal(_))
    }

    pub(crate) fn pre(msg: &str) -> Self {
        Error::Precondition(String::from(msg))
    }

    pub(crate) fn internal(msg: &str) -> Self {
        Error::Internal(String::from(msg))
    }
}
