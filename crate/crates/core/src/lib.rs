//! Exact polytope toolkit for Minkowski sums and graph diameters.
//!
//! Everything is computed over arbitrary-precision rationals. The crate builds
//! polytopes from points or halfspaces, forms Minkowski sums with vertex
//! decompositions, measures graph diameters, generates the extremal families
//! used in diameter bounds, and verifies the structural lemmas on instances.

pub mod exactlinalg;
pub mod polytope;
pub mod graph;
pub mod minkowski;
pub mod generators;
pub mod io;
pub mod verify;
