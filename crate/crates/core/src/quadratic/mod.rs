//! Real quadratic fields: arithmetic, narrow ray classes, Shintani domains
//! and the partial zeta values on both the exact and the `p`-adic side.

mod classes;
mod field;
mod ideal;
mod lfunction;

pub use classes::*;
pub use field::{shintani_domain_2d, RQField, UnitData};
pub use ideal::{degree_one_prime, ideals_of_norm, IdealHNF};
pub use lfunction::*;
