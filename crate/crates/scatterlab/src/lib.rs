//! Scattered linearized binomials over finite fields: exact tower arithmetic,
//! exhaustive and curve-based scatteredness tests, the known family criteria,
//! equivalence-class counts and the multivariate certificates behind the
//! irreducibility arguments.

pub mod equiv;
pub mod error;
pub mod field;
pub mod linpoly;
pub mod mvpoly;
pub mod scatter;

pub use error::{Error, Result};
pub use field::{make_field, FieldCtx, FqnElem};

pub(crate) fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}
