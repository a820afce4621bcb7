//! The free Lie algebra inside the free associative algebra.

mod elem;
mod lyndon;
mod soule;
mod tree;

pub use elem::{ad, ad_power, bracket, dynkin, is_lie, lie_substitute, LieElem};
pub use lyndon::{
    is_lyndon, lyndon_basis, lyndon_bracket, lyndon_coordinates, lyndon_vector, lyndon_words,
    standard_factorization, witt_number, LyndonBracketer,
};
pub use soule::soule;
pub use tree::{lie_from_json, parse_bracket_expr, BracketTree, LieInput, WeightedTree};
