//! Exact calculus for geometric distance-regular graphs with smallest
//! eigenvalue -3.
//!
//! The crate is organised bottom-up:
//!
//! - [`arrays`]: intersection arrays, shell sizes, head, SRG parameters.
//! - [`poly`]: integer/rational polynomials and Sturm chains.
//! - [`spectrum`]: characteristic polynomial of the tridiagonal matrix
//!   `L1`, certified eigenvalues, multiplicities and the Delsarte bound.
//! - [`geometry`]: the `tau`/`psi` parameters of a putative geometric graph.
//! - [`claws`]: the 4-claw window and the nonexistence engine.
//! - [`classify`]: parametrised families, generators and matchers.
//! - [`graphs`]: concrete witness graphs and brute-force verification.
//! - [`report`]: the composed analysis pipeline used by the CLI.
//!
//! Everything that decides a mathematical fact is exact. Floating point is
//! only used when rendering numbers for humans.

pub mod arrays;
pub mod classify;
pub mod claws;
pub mod exec;
pub mod geometry;
pub mod graphs;
pub mod poly;
pub mod report;
pub mod spectrum;

mod bigjson;

pub use arrays::{ArrayError, DerivedParams, IntersectionArray, SrgParams, ValidationOptions};
pub use classify::{CaseId, FamilyCase, FamilyError, MainCorOutcome, Theorem};
pub use claws::{ClawVerdict, Verdict};
pub use exec::Execution;
pub use geometry::{GeometricParams, GeometryError, LocalKind};
pub use graphs::{ClawWitness, CliqueCover, Graph, GraphError};
pub use spectrum::{Root, SpectrumError, SpectrumReport};
