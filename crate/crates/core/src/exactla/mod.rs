//! Exact scalars over Q and cyclotomic fields, plus sparse exact linear algebra.

mod cyclotomic;
mod matrix;

pub use cyclotomic::{
    cyclotomic_field, cyclotomic_polynomial, parse_rational, rational_field, rational_signum,
    CyclotomicField, Scalar,
};
pub use matrix::{
    dense_to_sparse, nullspace, rank_of_vectors, Echelon, ExactMatrix, Nullspace, SparseRow,
};
