//! Kruskal's algorithm over cost buckets for the whole graph, and Prim's
//! algorithm with an indexed binary heap for induced subgraphs.
//!
//! Edges compare by `(cost, min endpoint, max endpoint)`. That is a
//! strict total order on the edges of a simple graph, so the minimum spanning
//! tree is unique under it and the result does not depend on the start vertex.

use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::dsu::DisjointSet;
use crate::error::{domain, Error, Result};
use crate::graph::{Graph, SolutionTree};
use crate::heap::IndexedMinHeap;

#[derive(Clone, Copy, Debug, PartialEq)]
struct EdgeKey {
    cost: f64,
    u: u32,
    v: u32,
    edge: u32,
}

impl Eq for EdgeKey {}

impl Ord for EdgeKey {
    fn cmp(&self, other: &Self) -> Ordering {
        self.cost
            .total_cmp(&other.cost)
            .then(self.u.cmp(&other.u))
            .then(self.v.cmp(&other.v))
    }
}

impl PartialOrd for EdgeKey {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Minimum spanning tree of the whole graph.
pub fn minimum_spanning_tree(g: &Graph) -> Result<SolutionTree> {
    let (n, m) = (g.vertex_count(), g.edge_count());
    // Edges are bucketed by a monotone map of their cost and each bucket is
    // sorted only when the scan reaches it. Buckets fill in edge index order,
    // which is (u, v) order, so a stable sort by cost gives prim's order.
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for e in 0..m {
        lo = lo.min(g.edge(e).cost);
        hi = hi.max(g.edge(e).cost);
    }
    let buckets = (m / 8).max(1);
    let scale = if hi > lo { buckets as f64 / (hi - lo) } else { 0.0 };
    let bucket = |c: f64| (((c - lo) * scale) as usize).min(buckets - 1);
    let mut start = vec![0usize; buckets + 1];
    for e in 0..m {
        start[bucket(g.edge(e).cost) + 1] += 1;
    }
    for b in 0..buckets {
        start[b + 1] += start[b];
    }
    let mut fill = start.clone();
    // Endpoints travel with the costs so the scan reads memory in order.
    let mut items = vec![(0.0, (0u32, 0u32)); m];
    for e in 0..m {
        let edge = g.edge(e);
        let b = bucket(edge.cost);
        items[fill[b]] = (edge.cost, (edge.u() as u32, edge.v() as u32));
        fill[b] += 1;
    }

    let mut sets = DisjointSet::new(n);
    let mut tree_edges = Vec::with_capacity(n - 1);
    'scan: for b in 0..buckets {
        let slice = &mut items[start[b]..start[b + 1]];
        slice.sort_by(|x, y| x.0.total_cmp(&y.0));
        for &(_, (u, v)) in slice.iter() {
            if tree_edges.len() + 1 == n {
                break 'scan;
            }
            let (u, v) = (u as usize, v as usize);
            if sets.union(u, v) {
                tree_edges.push(g.find_edge(u, v).expect("edge of the graph"));
            }
        }
    }
    if tree_edges.len() + 1 != n {
        return Err(Error::Disconnected);
    }
    Ok(SolutionTree::new((0..n).collect(), tree_edges))
}

/// Minimum spanning tree of the subgraph induced by `vertices`.
///
/// Errors with [`Error::Disconnected`] when the induced subgraph is not
/// connected and with a domain error on an empty or out-of-range set.
pub fn minimum_spanning_tree_on(g: &Graph, vertices: &[usize]) -> Result<SolutionTree> {
    let mut member = vec![false; g.vertex_count()];
    let mut count = 0;
    for &v in vertices {
        if v >= g.vertex_count() {
            return Err(domain!("vertex {v} is not in the graph"));
        }
        if !member[v] {
            member[v] = true;
            count += 1;
        }
    }
    let start = vertices.iter().copied().min().ok_or_else(|| domain!("empty vertex set"))?;
    prim(g, &member, start, count)
}

pub(crate) fn prim(g: &Graph, member: &[bool], start: usize, count: usize) -> Result<SolutionTree> {
    let n = g.vertex_count();
    let mut in_tree = vec![false; n];
    let mut heap: IndexedMinHeap<EdgeKey> = IndexedMinHeap::new(n);
    let mut tree_vertices = Vec::with_capacity(count);
    let mut tree_edges = Vec::with_capacity(count.saturating_sub(1));

    in_tree[start] = true;
    tree_vertices.push(start);
    let mut frontier = start;
    loop {
        for (w, e) in g.neighbors(frontier) {
            if member[w] && !in_tree[w] {
                let edge = g.edge(e);
                let key = EdgeKey { cost: edge.cost, u: edge.u() as u32, v: edge.v() as u32, edge: e as u32 };
                heap.push_or_decrease(w, key);
            }
        }
        match heap.pop() {
            Some((key, w)) => {
                in_tree[w] = true;
                tree_vertices.push(w);
                tree_edges.push(key.edge as usize);
                frontier = w;
            }
            None => break,
        }
    }
    if tree_vertices.len() != count {
        return Err(Error::Disconnected);
    }
    Ok(SolutionTree::new(tree_vertices, tree_edges))
}
