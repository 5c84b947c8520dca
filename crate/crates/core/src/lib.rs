//! Prize-collecting Steiner tree (PCST) solvers and post-processing.
//!
//! The crate is `no_std` and only needs `alloc`. It contains the instance and
//! solution model ([`Graph`], [`SolutionTree`]), Prim's minimum spanning tree,
//! the general pruning algorithm for node-weighted trees ([`prune`]), the tree
//! growing algorithm ([`grow`]), the combined post-processing loop and the MSTG
//! heuristic ([`pipeline`]), the event-driven unrooted Goemans-Williamson
//! solver with dynamic edge splitting ([`fgw`]), and exact oracles plus lower
//! bound certificates ([`verify`]).
//!
//! File formats, instance generation and the command line live in the `pcst`
//! companion crate.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

#[cfg(test)]
extern crate std;

mod dsu;
mod error;
pub mod fgw;
mod graph;
pub mod grow;
mod heap;
mod mst;
pub mod pipeline;
pub mod prune;
pub mod verify;

pub use error::{Error, Result};
pub use graph::{is_connected, net_cost, net_weight, Edge, Graph, SolutionTree};
pub use mst::{minimum_spanning_tree, minimum_spanning_tree_on};
