//! Solution checks, the GW lower bound, and brute-force optima for small
//! instances.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::dsu::DisjointSet;
use crate::error::{domain, Result};
use crate::graph::{missed_prize, Graph, SolutionTree};
use crate::prune::TreeInstance;

/// Largest graph [`exact_pcst`] accepts.
pub const EXACT_PCST_MAX_VERTICES: usize = 18;
/// Largest tree [`exact_nwstpt`] accepts.
pub const EXACT_NWSTPT_MAX_VERTICES: usize = 16;

#[derive(Clone, Debug, PartialEq)]
pub struct Certificate {
    pub net_cost: f64,
    pub lower_bound: Option<f64>,
    /// `net_cost / lower_bound`, when the bound is positive.
    pub ratio_bound: Option<f64>,
    pub feasible: bool,
    pub violations: Vec<String>,
}

impl Certificate {
    /// Attaches a lower bound and the ratio it implies.
    pub fn with_lower_bound(mut self, lower_bound: f64) -> Self {
        self.lower_bound = Some(lower_bound);
        self.ratio_bound = (lower_bound > 0.0).then(|| self.net_cost / lower_bound);
        self
    }
}

/// Checks that `t` is a tree of `g` containing every compulsory terminal.
/// Problems are collected, not returned as errors. The net-cost ignores edge
/// and vertex ids that do not exist in `g`.
pub fn validate_solution(g: &Graph, t: &SolutionTree) -> Certificate {
    let mut violations = Vec::new();
    if let Err(e) = t.check(g) {
        violations.push(format!("{e}"));
    }
    for &c in g.compulsory() {
        if !t.contains(c) {
            violations.push(format!("compulsory terminal {c} is missing"));
        }
    }
    let cost: f64 = t.edges().iter().filter(|&&e| e < g.edge_count()).map(|&e| g.edge(e).cost).sum();
    Certificate {
        net_cost: missed_prize(g, t) + cost,
        lower_bound: None,
        ratio_bound: None,
        feasible: violations.is_empty(),
        violations,
    }
}

/// `c(T)/2 + w(V \ T)`. A lower bound on the optimal net-cost whenever
/// `c(T) + 2 w(V \ T)` is at most twice the optimum, which is the guarantee
/// of Goemans-Williamson growth.
pub fn gw_lower_bound(g: &Graph, t: &SolutionTree) -> f64 {
    t.edge_cost(g) / 2.0 + missed_prize(g, t)
}

/// Calls `visit` once for every nonempty connected vertex subset of the
/// graph given by neighbour masks.
fn for_each_connected_subset(adj: &[u32], mut visit: impl FnMut(u32)) {
    // Each subset is produced from its smallest vertex: candidates are
    // branched on as taken or forbidden, and only vertices above the seed
    // may be taken.
    fn grow(adj: &[u32], set: u32, candidates: u32, forbidden: u32, visit: &mut impl FnMut(u32)) {
        if candidates == 0 {
            visit(set);
            return;
        }
        let u = candidates.trailing_zeros();
        let bit = 1u32 << u;
        let rest = candidates & !bit;
        let added = adj[u as usize] & !set & !forbidden & !bit;
        grow(adj, set | bit, rest | added, forbidden, visit);
        grow(adj, set, rest, forbidden | bit, visit);
    }
    for seed in 0..adj.len() {
        let below = (1u32 << seed) - 1;
        let bit = 1u32 << seed;
        grow(adj, bit, adj[seed] & !below & !bit, below, &mut visit);
    }
}

fn subset_vertices(mask: u32) -> Vec<usize> {
    (0..32).filter(|&v| mask >> v & 1 == 1).collect()
}

/// An optimal solution by enumerating every connected vertex set that holds
/// the compulsory terminals and spanning it with its minimum spanning tree.
/// Among optimal vertex sets the lexicographically smallest sorted vertex
/// list wins.
pub fn exact_pcst(g: &Graph) -> Result<SolutionTree> {
    let n = g.vertex_count();
    if n > EXACT_PCST_MAX_VERTICES {
        return Err(domain!("exact solver accepts at most {EXACT_PCST_MAX_VERTICES} vertices, got {n}"));
    }
    let mut adj = alloc::vec![0u32; n];
    for e in g.edges() {
        adj[e.u()] |= 1 << e.v();
        adj[e.v()] |= 1 << e.u();
    }
    let required: u32 = g.compulsory().iter().fold(0, |m, &c| m | 1 << c);
    let mut by_cost: Vec<usize> = (0..g.edge_count()).collect();
    by_cost.sort_by(|&a, &b| {
        let (ea, eb) = (g.edge(a), g.edge(b));
        ea.cost.total_cmp(&eb.cost).then((ea.u(), ea.v()).cmp(&(eb.u(), eb.v())))
    });

    let mut best: Option<(f64, Vec<usize>, Vec<usize>)> = None;
    for_each_connected_subset(&adj, |set| {
        if set & required != required {
            return;
        }
        let vertices = subset_vertices(set);
        let mut dsu = DisjointSet::new(n);
        let mut edges = Vec::with_capacity(vertices.len() - 1);
        let mut cost = 0.0;
        for &e in &by_cost {
            let edge = g.edge(e);
            if set >> edge.u() & 1 == 1 && set >> edge.v() & 1 == 1 && dsu.union(edge.u(), edge.v()) {
                edges.push(e);
                cost += edge.cost;
            }
        }
        let missed: f64 = (0..n).filter(|&v| set >> v & 1 == 0).map(|v| g.prize(v)).sum();
        let value = missed + cost;
        let better = match &best {
            None => true,
            Some((b, bv, _)) => value < *b || (value == *b && vertices < *bv),
        };
        if better {
            best = Some((value, vertices, edges));
        }
    });
    let (_, vertices, edges) = best.ok_or_else(|| domain!("no connected vertex set holds every compulsory terminal"))?;
    Ok(SolutionTree::new(vertices, edges))
}

/// The optimal net-weight over all subtrees of `t` that contain its
/// compulsory terminals.
pub fn exact_nwstpt(t: &TreeInstance) -> Result<f64> {
    let n = t.vertex_count();
    if n > EXACT_NWSTPT_MAX_VERTICES {
        return Err(domain!("exact solver accepts at most {EXACT_NWSTPT_MAX_VERTICES} vertices, got {n}"));
    }
    let mut adj = alloc::vec![0u32; n];
    for &(u, v, _) in t.edges() {
        adj[u] |= 1 << v;
        adj[v] |= 1 << u;
    }
    let required: u32 = t.compulsory().iter().fold(0, |m, &c| m | 1 << c);
    let mut best = f64::NEG_INFINITY;
    for_each_connected_subset(&adj, |set| {
        if set & required != required {
            return;
        }
        let gained: f64 = subset_vertices(set).iter().map(|&v| t.weights()[v]).sum();
        let spent: f64 = t
            .edges()
            .iter()
            .filter(|&&(u, v, _)| set >> u & 1 == 1 && set >> v & 1 == 1)
            .map(|e| e.2)
            .sum();
        best = best.max(gained - spent);
    });
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::net_cost;
    use alloc::vec;

    fn rooted_triangle() -> Graph {
        Graph::new(vec![3.0, 20.0, 20.0], [(0, 1, 6.0), (0, 2, 10.0), (1, 2, 11.0)], [1]).unwrap()
    }

    fn unrooted_triangle() -> Graph {
        Graph::new(vec![2.0, 9.0, 7.0], [(0, 1, 5.0), (0, 2, 5.0), (1, 2, 6.0)], []).unwrap()
    }

    #[test]
    fn connected_subsets_of_small_shapes() {
        let mut seen = Vec::new();
        // path 0 - 1 - 2
        for_each_connected_subset(&[0b010, 0b101, 0b010], |s| seen.push(s));
        seen.sort();
        assert_eq!(seen, vec![0b001, 0b010, 0b011, 0b100, 0b110, 0b111]);
        let mut count = 0;
        // complete graph on 5 vertices: every nonempty subset
        for_each_connected_subset(&[0b11110, 0b11101, 0b11011, 0b10111, 0b01111], |_| count += 1);
        assert_eq!(count, 31);
    }

    #[test]
    fn exact_on_the_triangles() {
        let g = rooted_triangle();
        let t = exact_pcst(&g).unwrap();
        assert_eq!(t, SolutionTree::new(vec![1, 2], vec![2]));
        assert_eq!(net_cost(&g, &t).unwrap(), 14.0);

        let g = unrooted_triangle();
        let t = exact_pcst(&g).unwrap();
        assert_eq!(t, SolutionTree::new(vec![1, 2], vec![2]));
        assert_eq!(net_cost(&g, &t).unwrap(), 8.0);
    }

    #[test]
    fn exact_without_prizes_picks_vertex_zero() {
        let g = Graph::new(vec![0.0; 3], [(0, 1, 1.0), (1, 2, 1.0)], []).unwrap();
        assert_eq!(exact_pcst(&g).unwrap(), SolutionTree::single(0));
    }

    #[test]
    fn exact_guard() {
        let n = EXACT_PCST_MAX_VERTICES + 1;
        let g = Graph::new(vec![1.0; n], (1..n).map(|v| (v - 1, v, 1.0)), []).unwrap();
        assert!(matches!(exact_pcst(&g), Err(crate::Error::Domain(_))));
    }

    #[test]
    fn exact_tree_values() {
        let t = TreeInstance::new(vec![0.0, 5.0], vec![(0, 1, 3.0)], []).unwrap();
        assert_eq!(exact_nwstpt(&t).unwrap(), 5.0);
        let t = TreeInstance::new(vec![10.0, -1.0], vec![(0, 1, 0.5)], []).unwrap();
        assert_eq!(exact_nwstpt(&t).unwrap(), 10.0);
        let forced = t.with_compulsory([0, 1]).unwrap();
        assert_eq!(exact_nwstpt(&forced).unwrap(), 8.5);
    }

    #[test]
    fn lower_bound_arithmetic() {
        // c(T) = 10 and w outside T = 4
        let g = Graph::new(vec![0.0, 0.0, 4.0], [(0, 1, 10.0), (1, 2, 1.0)], []).unwrap();
        let t = SolutionTree::new(vec![0, 1], vec![0]);
        assert_eq!(gw_lower_bound(&g, &t), 9.0);
    }

    #[test]
    fn validation_findings() {
        let g = rooted_triangle();
        let ok = validate_solution(&g, &SolutionTree::new(vec![1, 2], vec![2]));
        assert!(ok.feasible && ok.violations.is_empty());
        assert_eq!(ok.net_cost, 14.0);
        let ok = ok.with_lower_bound(7.0);
        assert_eq!(ok.ratio_bound, Some(2.0));

        let missing = validate_solution(&g, &SolutionTree::single(0));
        assert!(!missing.feasible);
        assert_eq!(missing.violations.len(), 1);

        let cycle = validate_solution(&g, &SolutionTree::new(vec![0, 1, 2], vec![0, 1, 2]));
        assert!(!cycle.feasible);

        let free = Graph::new(vec![1.0, 1.0], [(0, 1, 1.0)], []).unwrap();
        assert!(validate_solution(&free, &SolutionTree::single(1)).feasible);
    }
}
