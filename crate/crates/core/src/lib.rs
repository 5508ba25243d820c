//! Rigid convexity of plane polynomial sublevel sets and symmetric
//! determinantal representations.

pub mod bezout;
pub mod check;
pub mod circlepsd;
pub mod cubicrepr;
pub mod error;
pub mod fixtures;
pub mod hermite;
pub mod locate;
pub mod numeric;
pub mod polycore;
pub mod scalar;

pub use error::{Error, Result};
pub use scalar::{Rational, Scalar};
