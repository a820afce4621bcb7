//! Exact computations on free Lie algebras, trace quotients, tangential
//! derivations, the Grothendieck-Teichmüller Lie algebra and depth-two
//! kernels.

pub mod cli;
pub mod depth2;
pub mod error;
pub mod exactla;
pub mod freealg;
pub mod grt;
pub mod lie;
pub mod tder;
pub mod traces;
pub mod verify;

pub use error::{Error, Result};

/// Exact rational numbers.
pub type Q = num_rational::BigRational;
