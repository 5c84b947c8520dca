//! Post-processing and the MSTG heuristic.
//!
//! * [`mst_technique`] replaces a solution by the minimum spanning tree of the
//!   subgraph induced on its vertices when that is strictly cheaper.
//! * [`p3`] repeats tree growing, the MST technique and optimal pruning, in
//!   that order, until a round stops paying off.
//! * [`mstg`] prunes the minimum spanning tree of the whole graph.

use alloc::vec::Vec;

use crate::error::{domain, Result};
use crate::graph::{net_cost, Graph, SolutionTree};
use crate::grow::tga;
use crate::mst::{minimum_spanning_tree, minimum_spanning_tree_on};
use crate::prune::gpra_solution;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct P3Config {
    /// Path length bound for tree growing.
    pub n: usize,
    /// A round must lower the net-cost by more than this to continue.
    pub epsilon_improve: f64,
    pub max_rounds: usize,
}

impl P3Config {
    pub const DEFAULT_MAX_ROUNDS: usize = 100;

    /// Defaults for `g`: `epsilon_improve = 1e-12 * (total cost + total prize)`
    /// and at most 100 rounds.
    pub fn for_graph(g: &Graph, n: usize) -> Self {
        P3Config {
            n,
            epsilon_improve: 1e-12 * (g.total_cost() + g.total_prize()),
            max_rounds: Self::DEFAULT_MAX_ROUNDS,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(domain!("path length bound must be at least 1"));
        }
        if !(self.epsilon_improve >= 0.0) {
            return Err(domain!("epsilon_improve must be nonnegative"));
        }
        if self.max_rounds == 0 {
            return Err(domain!("max_rounds must be at least 1"));
        }
        Ok(())
    }
}

/// MST of the induced subgraph on `t`'s vertices if strictly cheaper than `t`,
/// otherwise `t` itself.
pub fn mst_technique(g: &Graph, t: &SolutionTree) -> Result<SolutionTree> {
    t.check(g)?;
    if t.edges().is_empty() {
        return Ok(t.clone());
    }
    let mst = minimum_spanning_tree_on(g, t.vertices())?;
    if mst.edge_cost(g) < t.edge_cost(g) {
        Ok(mst)
    } else {
        Ok(t.clone())
    }
}

/// Net-cost after each completed round of [`p3`], starting with the input.
#[derive(Clone, Debug, PartialEq)]
pub struct P3Trace {
    pub round_costs: Vec<f64>,
}

/// The post-processing loop. Returns the cheapest tree seen.
pub fn p3(g: &Graph, t: &SolutionTree, cfg: &P3Config) -> Result<SolutionTree> {
    Ok(p3_traced(g, t, cfg)?.0)
}

pub fn p3_traced(g: &Graph, t: &SolutionTree, cfg: &P3Config) -> Result<(SolutionTree, P3Trace)> {
    cfg.validate()?;
    let mut best = t.clone();
    let mut best_cost = net_cost(g, t)?;
    let mut current = t.clone();
    let mut current_cost = best_cost;
    let mut trace = P3Trace { round_costs: alloc::vec![best_cost] };
    for _ in 0..cfg.max_rounds {
        let grown = tga(g, &current, cfg.n)?;
        let spanned = mst_technique(g, &grown)?;
        let pruned = gpra_solution(g, &spanned)?;
        let cost = net_cost(g, &pruned)?;
        trace.round_costs.push(cost);
        let gain = current_cost - cost;
        if cost < best_cost {
            best = pruned.clone();
            best_cost = cost;
        }
        current = pruned;
        current_cost = cost;
        if !(gain > cfg.epsilon_improve) {
            break;
        }
    }
    Ok((best, trace))
}

/// MST of `g` pruned by GPrA with `g`'s compulsory terminals.
pub fn mstg(g: &Graph) -> Result<SolutionTree> {
    let mst = minimum_spanning_tree(g)?;
    gpra_solution(g, &mst)
}
