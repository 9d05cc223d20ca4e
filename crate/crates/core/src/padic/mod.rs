//! `p`-adic measures on `ℤ_pⁿ` attached to cones, their Amice transforms and
//! moments.

mod measure;
mod moments;
mod qseries;
mod scalar;

pub use measure::*;
pub use moments::*;
pub use qseries::{binomial_row, BinomialCache, QSeries};
pub use scalar::{is_prime, PadicCtx, PadicScalar};
