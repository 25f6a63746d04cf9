//! Diameter-optimal tree augmentation.
//!
//! Given an edge-weighted tree embedded in a cost space revealed through a
//! counting pair-cost oracle, this crate computes exact diameters of the tree
//! plus k shortcut edges in O(n k log n), solves for optimal shortcut sets by
//! guarded enumeration, runs linear-time approximation algorithms built on
//! farthest-first traversal, and generates adversarial instance families
//! whose variants are indistinguishable without quadratically many queries.
//!
//! Entry points:
//! - [`diameter::graph_diameter`] / [`diameter::path_diameter`]: exact
//!   diameter of tree + shortcuts.
//! - [`farthest::FarthestStructure`]: the dynamic structure behind them.
//! - [`solvers`]: `exact_doat`, `approx4`, `ptas`, `gonzalez`.
//! - [`lowerbound`]: adversarial families and query-count experiments.
//! - [`instance`]: generation, the DOAT text format, shortcut sets.
//!
//! The `augtree` binary exposes the same operations on the command line; the
//! `examples/` directory holds one runnable walkthrough per capability.

pub mod cost;
pub mod diameter;
pub mod dynforest;
pub mod error;
pub mod farthest;
pub mod index;
pub mod instance;
pub mod lowerbound;
pub mod solvers;
pub mod tree;

pub use cost::{verify_metric, CostOracle, MetricCheck, MetricReport, OracleKind};
pub use error::{Error, Result};
pub use instance::{gen_random, load_instance, save_instance, Instance, RandomFamily, Shortcut, ShortcutSet};
pub use tree::{binarize, Binarized, Tree};
