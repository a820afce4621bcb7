//! Words and noncommutative polynomials of the free associative algebra.

mod coeff;
mod json;
mod poly;
mod word;

pub use coeff::Coeff;
pub use json::{poly_from_json, poly_from_terms, poly_to_json, poly_to_terms, TermJson};
pub use poly::{nc_mul, nc_substitute, NcPoly, Selector};
pub use word::{Alphabet, Word};

/// Default bound on the weight of free Lie computations.
pub const DEFAULT_WEIGHT_CAP: usize = 12;

/// Errors when `weight` is above `cap`.
pub fn check_weight(weight: usize, cap: usize) -> crate::Result<()> {
    if weight > cap {
        Err(crate::Error::WeightCapExceeded { weight, cap })
    } else {
        Ok(())
    }
}
