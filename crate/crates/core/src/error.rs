use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("singular matrix")]
    Singular,
    #[error("invalid form: {0}")]
    InvalidForm(String),
    #[error("form is not preregular: {0}")]
    NotPreregular(String),
    #[error("twisting element is ambiguous: solution space has dimension {0}")]
    AmbiguousTwist(usize),
    #[error("form is not invariant under the given matrix")]
    NotInvariant,
    #[error("tensor is not in the polar affine space")]
    NotInPolar,
    #[error("internal consistency failure: {0}")]
    Consistency(String),
    #[error("no image given for generator {0}")]
    MissingImage(String),
    #[error("generator {0} is not in the alphabet")]
    UnknownGenerator(String),
    #[error("degree budget exceeded: degree {degree} above bound {bound}")]
    DegreeBudget { degree: usize, bound: usize },
    #[error("verdict not certified: degree {degree} above completion degree {bound}")]
    NotCertified { degree: usize, bound: usize },
    #[error("degree bound {bound} is below the maximal relation degree {needed}")]
    DegreeTooSmall { bound: usize, needed: usize },
    #[error("completion stopped after {limit} rules")]
    RuleLimit { limit: usize },
    #[error("presentation has no Hopf structure")]
    NoStructure,
    #[error("{0}")]
    Invalid(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
