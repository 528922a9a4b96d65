//! Exact tooling for (t,r) broadcast domination.
//!
//! A tower at `u` sends `max(0, t - d(u, v))` to every vertex `v`; a tower set is
//! `(t,r)`-broadcasting when every vertex hears at least `r` in total. This crate
//! provides
//!
//! - [`graph`]: powers of paths and cycles, grids and tori with closed-form distances,
//! - [`signal`]: per-vertex signal, capped signal and excess on those graphs,
//! - [`lattice`]: the same accounting for periodic tower sets in the integer plane,
//! - [`solver`]: exact minimum tower sets by branch and bound,
//! - [`formulas`]: closed forms and explicit constructions for path and cycle powers.
//!
//! All arithmetic is integer or exact rational.

pub mod error;
pub mod formulas;
pub mod graph;
pub mod lattice;
pub mod ratio;
pub mod signal;
pub mod solver;

pub use error::{Error, Result};
pub use formulas::FormulaInput;
pub use graph::GraphSpec;
pub use lattice::{LatticeConfig, Point};
pub use signal::{SignalParams, TowerSet};
pub use solver::{solve, SolveOutcome, SolveResult};
