//! Equations over ℤ and over groups, the encoding `t ↦ c^t` of the ring of
//! integers in a 2-step nilpotent group, and bounded solvers used to check
//! that translated systems have corresponding solutions.

mod compile;
mod group;
mod ring;
mod solver;
mod templates;
mod verify;

pub use compile::{compile_system, compile_with_terms};
pub use group::{Ambient, GroupFactor, GroupSystem, GroupWord, InterfaceEntry};
pub use ring::{bounded_solve_ring, RingSystem, Term, DEFAULT_RING_LIMIT};
pub use solver::{bounded_solve_group, GroupSolver, SolveOptions};
pub use templates::{z_in_g_templates, EDefinition, Template};
pub use verify::{
    decode_component, encode, verify_correspondence, CorrespondenceReport, Counterexample,
    Direction,
};
