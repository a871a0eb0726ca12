use thiserror::Error;

use crate::parse::ParseError;

/// Failures of the polynomial layer.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("negative exponent {0}")]
    NegativeExponent(i64),
    #[error("the zero polynomial has no depth")]
    ZeroDepth,
    #[error("the formal parameter is present and no value was supplied")]
    SymbolicParameter,
    #[error("coefficient has a pole at the supplied parameter value")]
    PoleAtValue,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("invalid bigrade (k={weight}, s={depth})")]
    InvalidBigrade { weight: i64, depth: i64 },
    #[error("polynomial is not a polynomial in Delta: {0}")]
    NotInDeltaRing(String),
    #[error("exact division by 12*Delta failed for {0}")]
    InexactDivision(String),
    #[error("H and E do not satisfy HE - EH = E")]
    NotAnSl2Pair,
    #[error("input is not bigraded-homogeneous: {0}")]
    NotBigradedHomogeneous(String),
    #[error("bracket triple is not weight-homogeneous")]
    NonHomogeneousTriple,
    #[error("triple does not have the admissible shape: {0}")]
    NotAdmissibleShape(String),
    #[error("Ore extension conditions fail: {0}")]
    OreConditions(String),
    #[error("scaling factor must be nonzero")]
    ZeroScaling,
    #[error("unsupported: {0}")]
    Unsupported(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
