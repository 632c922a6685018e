//! People moving between rooms, where every room's smartest occupant must move
//! at each step.
//!
//! The crate builds the configuration graph of `N` people in `M` rooms,
//! decomposes it at desk scale, plans explicit paths between configurations for
//! arbitrary `N` and `M`, and runs seeded random walks on it.

pub mod cli;
pub mod graph;
pub mod model;
pub mod oracle;
pub mod planner;
pub mod perm;
pub mod walk;

pub use model::{Configuration, Indexer, Instance, LowProfile, ModelError, Path, VertexClass};
pub use perm::{DerangementFactorization, Parity, PermError, Permutation};
