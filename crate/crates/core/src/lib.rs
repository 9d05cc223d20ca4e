//! Exact Shintani zeta values, Hill's perturbed-cone cocycle and the p-adic
//! measures attached to cones and test functions, with an application layer
//! for real quadratic fields.

pub mod cones;
pub mod error;
pub mod exact;
pub mod linalg;
pub mod padic;
pub mod quadratic;
pub mod test_functions;
pub mod zeta;

pub use error::{Error, Result};
pub use exact::{QuadScalar, Rational, TruncSeries};
pub use linalg::{QMatrix, QVec};
