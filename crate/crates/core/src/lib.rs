//! Finite forcing-style conditions `⟨A, n, U⟩`, their extension order, twin
//! detection, the amalgamation construction with machine checks of every
//! claim in its proof, an analyzer for irreducible bases of finite
//! topological spaces, and seeded simulation of descending chains.
//!
//! Start with [`condition::Condition`] and the runnable programs under
//! `examples/`.

pub mod amalgamation;
pub mod condition;
pub mod doc;
pub mod fixtures;
pub mod set;
pub mod sim;
pub mod topology;
pub mod twins;
pub mod verifier;

pub mod cli;

pub use condition::{Condition, Inclusion};
pub use set::PointSet;
