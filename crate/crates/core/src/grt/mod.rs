//! The braid Lie algebra on four strands and the defining relations of the
//! Grothendieck-Teichmüller Lie algebra.

mod solve;
mod t4;

pub use solve::{
    grt_check, grt_solve, pentagon_defects, soule_generator, unit_depth1, GrtCheck, GrtSolution,
    GrtSolutionJson,
};
pub use t4::{rho_apply, t4_bracket, t4_relations, T4Elem, Tracked};
