//! Exact arithmetic for Poisson brackets and Rankin-Cohen deformations on
//! the quasimodular algebra ℚ[E2, E4, E6], with coefficients in ℚ(t).

pub mod brackets;
pub mod derivations;
pub mod error;
pub mod grading;
pub mod linalg;
pub mod parse;
pub mod poly;
pub mod qseries;
pub mod scalar;
pub mod star;
pub mod structure;
pub mod verify;

pub use error::{Error, PolyError, Result};
pub use parse::{parse, parse_scalar, ParseError, ParseErrorKind};
pub use poly::{delta, Generator, Monomial, Poly};
pub use scalar::Scalar;
