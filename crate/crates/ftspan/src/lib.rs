//! Fault-tolerant additive spanners for undirected graphs.
//!
//! A spanner here is a subgraph `H` of `G` that keeps distances close even
//! after any single vertex fails: `dist(s,t,H\{v}) <= dist(s,t,G\{v}) + beta`
//! for the covered pairs. The crate builds four such structures, plus an
//! exact multi-source one, and ships exhaustive desk-scale verifiers for all
//! of them:
//!
//! * [`spanner::build_2add`] — all pairs, additive stretch 2
//! * [`spanner::build_6add`] — all pairs, additive stretch 6
//! * [`spanner::build_4sw`] — `S x V` pairs, additive stretch 4
//! * [`spanner::build_8sw`] — `S x V` pairs, additive stretch 8
//! * [`spanner::build_ftmbfs_spanner`] — `S x V` pairs, exact distances
//!
//! Shortest paths are made unique by per-edge integer perturbations
//! ([`graph::PerturbedWeights`]); every build is a pure function of
//! `(graph, sources, seed)`.
//!
//! See the `examples/` directory for one runnable walkthrough per
//! capability, and the `ftspan` binary for the file-based workflow
//! (`gen`, `build`, `verify`, `sweep`).

pub mod cli;
pub mod cluster;
pub mod error;
pub mod ftmbfs;
pub mod gen;
pub mod graph;
pub mod io;
pub mod replacement;
pub mod sourcewise;
pub mod spanner;
pub mod sweep;
pub mod verify;

pub use error::{Error, Result};
