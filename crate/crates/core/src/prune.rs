//! Optimal pruning of node-weighted trees.
//!
//! [`gpra`] returns a maximum net-weight subtree of a tree that contains every
//! compulsory terminal, for any number of terminals (including none) and any
//! real node weights. It runs two leaf-peeling sweeps, each touching every
//! vertex once:
//!
//! 1. Only without terminals: peel leaves, folding a leaf's value `nw(i)`
//!    into its neighbour `j` when `c(i, j) < nw(i)`. The vertex with the
//!    largest accumulated value (lowest id on ties) becomes a terminal.
//! 2. Reset `nw` (terminals get the sentinel `B`), root the tree at the lowest
//!    terminal and peel again: a leaf with `nw(i) < c(i, j)` is cut together
//!    with its already-peeled subtree, otherwise
//!    `nw(j) <- nw(j) + nw(i) - c(i, j)`.
//!
//! Leaves that become eligible in the same round are peeled in ascending id
//! order.
//!
//! [`strong_prune`] is the classic single-root dynamic program: the second
//! sweep with a fixed root, raw weights and no sentinel.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{domain, Result};
use crate::graph::{check_tree_shape, Graph, SolutionTree};

/// A node-weighted tree: weights may be any finite real, edge costs any
/// finite real, and a set of compulsory terminals.
#[derive(Clone, Debug, PartialEq)]
pub struct TreeInstance {
    weights: Vec<f64>,
    edges: Vec<(usize, usize, f64)>,
    compulsory: Vec<bool>,
    offsets: Vec<usize>,
    adjacency: Vec<(usize, usize)>,
}

impl TreeInstance {
    /// Validates that `edges` form a spanning tree over `weights.len()` vertices.
    pub fn new<C>(weights: Vec<f64>, edges: Vec<(usize, usize, f64)>, compulsory: C) -> Result<Self>
    where
        C: IntoIterator<Item = usize>,
    {
        let n = weights.len();
        if let Some(w) = weights.iter().find(|w| !w.is_finite()) {
            return Err(domain!("node weight {w} is not finite"));
        }
        if let Some(e) = edges.iter().find(|e| !e.2.is_finite()) {
            return Err(domain!("edge cost {} is not finite", e.2));
        }
        let all: Vec<usize> = (0..n).collect();
        let ids: Vec<usize> = (0..edges.len()).collect();
        check_tree_shape(n, &all, &ids, |e| {
            let (u, v, _) = edges[e];
            (u < n && v < n).then_some((u, v))
        })?;

        let mut is_compulsory = vec![false; n];
        for c in compulsory {
            if c >= n {
                return Err(domain!("compulsory terminal {c} outside 0..{n}"));
            }
            is_compulsory[c] = true;
        }
        Ok(Self::assemble(weights, edges, is_compulsory))
    }

    fn assemble(weights: Vec<f64>, edges: Vec<(usize, usize, f64)>, is_compulsory: Vec<bool>) -> Self {
        let n = weights.len();

        let mut offsets = vec![0usize; n + 1];
        for &(u, v, _) in &edges {
            offsets[u + 1] += 1;
            offsets[v + 1] += 1;
        }
        for i in 0..n {
            offsets[i + 1] += offsets[i];
        }
        let mut fill = offsets.clone();
        let mut adjacency = vec![(0, 0); 2 * edges.len()];
        for (idx, &(u, v, _)) in edges.iter().enumerate() {
            adjacency[fill[u]] = (v, idx);
            fill[u] += 1;
            adjacency[fill[v]] = (u, idx);
            fill[v] += 1;
        }
        TreeInstance { weights, edges, compulsory: is_compulsory, offsets, adjacency }
    }

    /// The subtree `t` of `g` as a tree instance with the graph's prizes and
    /// costs. Local vertex `k` is `t.vertices()[k]` and local edge `k` is
    /// `t.edges()[k]`, so local ids preserve the graph's id order. Compulsory
    /// terminals of `g` inside `t` stay compulsory.
    pub fn from_solution(g: &Graph, t: &SolutionTree) -> Result<Self> {
        t.check(g)?;
        let verts = t.vertices();
        let spanning = verts.len() == g.vertex_count();
        let local = |v: usize| if spanning { v } else { verts.binary_search(&v).expect("checked tree") };
        let weights = verts.iter().map(|&v| g.prize(v)).collect();
        let edges = t
            .edges()
            .iter()
            .map(|&e| {
                let edge = g.edge(e);
                (local(edge.u()), local(edge.v()), edge.cost)
            })
            .collect();
        let compulsory = verts.iter().map(|&v| g.is_compulsory(v)).collect();
        Ok(TreeInstance::assemble(weights, edges, compulsory))
    }

    #[inline]
    pub fn vertex_count(&self) -> usize {
        self.weights.len()
    }

    #[inline]
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    #[inline]
    pub fn edges(&self) -> &[(usize, usize, f64)] {
        &self.edges
    }

    #[inline]
    pub fn is_compulsory(&self, v: usize) -> bool {
        self.compulsory[v]
    }

    pub fn compulsory(&self) -> Vec<usize> {
        (0..self.vertex_count()).filter(|&v| self.compulsory[v]).collect()
    }

    /// `(neighbour, edge index)` pairs.
    pub fn neighbors(&self, v: usize) -> &[(usize, usize)] {
        &self.adjacency[self.offsets[v]..self.offsets[v + 1]]
    }

    /// Same instance with a different terminal set.
    pub fn with_compulsory<C: IntoIterator<Item = usize>>(&self, compulsory: C) -> Result<Self> {
        TreeInstance::new(self.weights.clone(), self.edges.clone(), compulsory)
    }

    /// Sum of absolute edge costs and node weights.
    pub fn big_b(&self) -> f64 {
        self.edges.iter().map(|e| e.2.abs()).sum::<f64>() + self.weights.iter().map(|w| w.abs()).sum::<f64>()
    }

    /// Checks that `sub` is a subtree of this tree.
    pub fn check_subtree(&self, sub: &SolutionTree) -> Result<()> {
        check_tree_shape(self.vertex_count(), sub.vertices(), sub.edges(), |e| {
            self.edges.get(e).map(|&(u, v, _)| (u, v))
        })
    }

    /// Included weights minus included costs of a subtree.
    pub fn net_weight(&self, sub: &SolutionTree) -> Result<f64> {
        self.check_subtree(sub)?;
        let gained: f64 = sub.vertices().iter().map(|&v| self.weights[v]).sum();
        let paid: f64 = sub.edges().iter().map(|&e| self.edges[e].2).sum();
        Ok(gained - paid)
    }

    /// Excluded weights plus included costs of a subtree.
    pub fn net_cost(&self, sub: &SolutionTree) -> Result<f64> {
        self.check_subtree(sub)?;
        let mut inside = sub.vertices().iter().copied().peekable();
        let mut missed = 0.0;
        for v in 0..self.vertex_count() {
            if inside.peek() == Some(&v) {
                inside.next();
            } else {
                missed += self.weights[v];
            }
        }
        let paid: f64 = sub.edges().iter().map(|&e| self.edges[e].2).sum();
        Ok(missed + paid)
    }
}

/// Working state of one pruning sweep.
#[derive(Clone, Debug)]
pub struct PruneState {
    /// Net-weight accumulator per vertex.
    pub nw: Vec<f64>,
    pub processed: Vec<bool>,
    /// Number of unprocessed neighbours.
    pub xi: Vec<usize>,
    pub big_b: f64,
    /// Vertices in processing order.
    pub order: Vec<usize>,
}

impl PruneState {
    fn new(t: &TreeInstance, nw: Vec<f64>) -> Self {
        let n = t.vertex_count();
        PruneState {
            nw,
            processed: vec![false; n],
            xi: (0..n).map(|v| t.neighbors(v).len()).collect(),
            big_b: t.big_b(),
            order: Vec::with_capacity(n),
        }
    }

    /// Peels eligible leaves in ascending id per round until only one vertex
    /// is unprocessed. `root`, if any, is never processed. `visit(state, i, j, e)`
    /// handles leaf `i` hanging from `j` by edge `e`.
    fn sweep(&mut self, t: &TreeInstance, root: Option<usize>, mut visit: impl FnMut(&mut Self, usize, usize, usize)) {
        let n = t.vertex_count();
        let mut remaining = n;
        let mut round: Vec<usize> = (0..n).filter(|&v| self.xi[v] == 1 && Some(v) != root).collect();
        let mut next = Vec::new();
        while remaining > 1 && !round.is_empty() {
            for &i in &round {
                if remaining <= 1 {
                    break;
                }
                if self.processed[i] || self.xi[i] != 1 {
                    continue;
                }
                let &(j, e) = t
                    .neighbors(i)
                    .iter()
                    .find(|&&(j, _)| !self.processed[j])
                    .expect("a vertex with xi = 1 has an unprocessed neighbour");
                visit(self, i, j, e);
                self.processed[i] = true;
                self.order.push(i);
                remaining -= 1;
                self.xi[i] = 0;
                self.xi[j] -= 1;
                if self.xi[j] == 1 && Some(j) != root {
                    next.push(j);
                }
            }
            next.sort_unstable();
            core::mem::swap(&mut round, &mut next);
            next.clear();
        }
    }
}

/// Result of the first sweep: the vertex whose accumulated value is largest.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PseudoRoot {
    pub vertex: usize,
    /// Equals the optimal net-weight over all subtrees of the instance.
    pub net_weight: f64,
}

/// Runs the terminal-free sweep and returns the maximising vertex.
/// The instance's terminal set is ignored.
pub fn select_pseudo_root(t: &TreeInstance) -> PseudoRoot {
    first_sweep(t).0
}

fn first_sweep(t: &TreeInstance) -> (PseudoRoot, PruneState) {
    let mut state = PruneState::new(t, t.weights.clone());
    state.sweep(t, None, |s, i, j, e| {
        let c = t.edges[e].2;
        if c < s.nw[i] {
            s.nw[j] += s.nw[i] - c;
        }
    });
    let mut best = 0;
    for v in 1..t.vertex_count() {
        if state.nw[v] > state.nw[best] {
            best = v;
        }
    }
    (PseudoRoot { vertex: best, net_weight: state.nw[best] }, state)
}

/// Counters from one [`gpra_with_stats`] call.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct PruneStats {
    /// Vertices processed by the terminal-free sweep (0 when it is skipped).
    pub first_sweep_processed: usize,
    pub second_sweep_processed: usize,
    /// The root used by the pruning sweep.
    pub root: usize,
    /// Whether the root was chosen by the terminal-free sweep.
    pub pseudo_root: bool,
}

/// Maximum net-weight subtree containing every compulsory terminal.
pub fn gpra(t: &TreeInstance) -> SolutionTree {
    gpra_with_stats(t).0
}

pub fn gpra_with_stats(t: &TreeInstance) -> (SolutionTree, PruneStats) {
    let mut stats = PruneStats::default();
    let mut compulsory = t.compulsory.clone();
    // The chosen pseudo-root is a terminal for this call only.
    let root = match compulsory.iter().position(|&c| c) {
        Some(r) => r,
        None => {
            let (pr, state) = first_sweep(t);
            stats.first_sweep_processed = state.order.len();
            stats.pseudo_root = true;
            compulsory[pr.vertex] = true;
            pr.vertex
        }
    };
    stats.root = root;

    let big_b = t.big_b();
    let nw = (0..t.vertex_count())
        .map(|v| if compulsory[v] { big_b } else { t.weights[v] })
        .collect();
    let (tree, processed) = prune_from(t, root, nw, compulsory);
    stats.second_sweep_processed = processed;
    (tree, stats)
}

/// Optimal subtree of `t` that contains `root`; terminals are ignored.
pub fn strong_prune(t: &TreeInstance, root: usize) -> Result<SolutionTree> {
    if root >= t.vertex_count() {
        return Err(domain!("root {root} is not a vertex of the tree"));
    }
    let protected = vec![false; t.vertex_count()];
    Ok(prune_from(t, root, t.weights.clone(), protected).0)
}

/// The rooted pruning sweep. A vertex whose pending subtree holds a
/// `protected` vertex is never cut; with the `B` sentinel on terminals the
/// cut test would keep it anyway, the flag only shields it from rounding.
fn prune_from(t: &TreeInstance, root: usize, nw: Vec<f64>, mut protected: Vec<bool>) -> (SolutionTree, usize) {
    let n = t.vertex_count();
    let mut state = PruneState::new(t, nw);
    let mut parent = vec![(usize::MAX, usize::MAX); n];
    let mut cut = vec![false; n];
    state.sweep(t, Some(root), |s, i, j, e| {
        let c = t.edges[e].2;
        parent[i] = (j, e);
        if !protected[i] && s.nw[i] < c {
            cut[i] = true;
        } else {
            s.nw[j] += s.nw[i] - c;
            if protected[i] {
                protected[j] = true;
            }
        }
    });

    // Parents are processed after their children, so walking the order
    // backwards decides every parent first.
    let mut keep = vec![false; n];
    keep[root] = true;
    let mut vertices = vec![root];
    let mut edges = Vec::new();
    for &i in state.order.iter().rev() {
        let (j, e) = parent[i];
        if !cut[i] && keep[j] {
            keep[i] = true;
            vertices.push(i);
            edges.push(e);
        }
    }
    (SolutionTree::new(vertices, edges), state.order.len())
}

/// Prunes a solution tree of `g` with GPrA, keeping `g`'s compulsory
/// terminals that lie in `t`.
pub fn gpra_solution(g: &Graph, t: &SolutionTree) -> Result<SolutionTree> {
    let inst = TreeInstance::from_solution(g, t)?;
    let local = gpra(&inst);
    Ok(lift(t, &local))
}

/// Maps a subtree of `TreeInstance::from_solution(g, t)` back to graph ids.
pub fn lift(t: &SolutionTree, local: &SolutionTree) -> SolutionTree {
    SolutionTree::new(
        local.vertices().iter().map(|&k| t.vertices()[k]).collect(),
        local.edges().iter().map(|&k| t.edges()[k]).collect(),
    )
}
