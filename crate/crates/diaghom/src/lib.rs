//! Exact homological computations for diagram algebras.
//!
//! The crate builds the basis combinatorics of partition-style diagram
//! algebras (partition, Brauer, Temperley-Lieb, annular), synthesizes
//! idempotent generators for their standard one-sided ideals, assembles the
//! associated covering complexes, and computes homology and Tor groups
//! exactly over Z, Q, F_p and Z/m.

pub mod algebra;
pub mod budget;
pub mod cli;
pub mod covers;
pub mod diagrams;
pub mod exactla;
pub mod mv;
pub mod torlab;
