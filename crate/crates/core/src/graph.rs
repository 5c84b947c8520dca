use alloc::vec;
use alloc::vec::Vec;

use crate::dsu::DisjointSet;
use crate::error::{domain, structural, Error, Result};

/// An undirected edge, stored with `u < v`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Edge {
    u: u32,
    v: u32,
    pub cost: f64,
}

impl Edge {
    #[inline]
    pub fn u(&self) -> usize {
        self.u as usize
    }

    #[inline]
    pub fn v(&self) -> usize {
        self.v as usize
    }

    /// The endpoint that is not `x`.
    #[inline]
    pub fn other(&self, x: usize) -> usize {
        if self.u() == x {
            self.v()
        } else {
            self.u()
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
struct Adj {
    to: u32,
    edge: u32,
}

/// A prize-collecting Steiner tree instance.
///
/// Vertices are `0..vertex_count`. Prizes are finite and nonnegative, edge
/// costs finite and strictly positive. Parallel input edges collapse to the
/// cheapest one and edges are stored sorted by `(u, v)`, so an edge index
/// also orders edges by their endpoint pair. The adjacency lists are built
/// once and sorted by neighbour id.
#[derive(Clone, Debug, PartialEq)]
pub struct Graph {
    prizes: Vec<f64>,
    edges: Vec<Edge>,
    compulsory: Vec<usize>,
    is_compulsory: Vec<bool>,
    offsets: Vec<usize>,
    adjacency: Vec<Adj>,
}

impl Graph {
    /// Builds a validated, connected instance.
    pub fn new<E, C>(prizes: Vec<f64>, edges: E, compulsory: C) -> Result<Self>
    where
        E: IntoIterator<Item = (usize, usize, f64)>,
        C: IntoIterator<Item = usize>,
    {
        let g = Self::new_unconnected(prizes, edges, compulsory)?;
        if !is_connected(&g) {
            return Err(Error::Disconnected);
        }
        Ok(g)
    }

    /// Like [`Graph::new`] but skips the connectivity requirement. Solvers
    /// that need a connected instance check it themselves.
    pub fn new_unconnected<E, C>(prizes: Vec<f64>, edges: E, compulsory: C) -> Result<Self>
    where
        E: IntoIterator<Item = (usize, usize, f64)>,
        C: IntoIterator<Item = usize>,
    {
        let n = prizes.len();
        if n == 0 {
            return Err(domain!("a graph needs at least one vertex"));
        }
        if n > u32::MAX as usize {
            return Err(domain!("too many vertices: {n}"));
        }
        for (v, &w) in prizes.iter().enumerate() {
            if !(w.is_finite() && w >= 0.0) {
                return Err(domain!("prize of vertex {v} must be finite and nonnegative, got {w}"));
            }
        }

        let mut list = Vec::new();
        for (u, v, cost) in edges {
            if u >= n || v >= n {
                return Err(domain!("edge ({u}, {v}) references a vertex outside 0..{n}"));
            }
            if u == v {
                return Err(domain!("self-loop on vertex {u}"));
            }
            if !(cost.is_finite() && cost > 0.0) {
                return Err(domain!("cost of edge ({u}, {v}) must be finite and positive, got {cost}"));
            }
            let (u, v) = if u < v { (u, v) } else { (v, u) };
            list.push(Edge { u: u as u32, v: v as u32, cost });
        }
        list.sort_unstable_by(|a, b| {
            (a.u, a.v)
                .cmp(&(b.u, b.v))
                .then_with(|| a.cost.total_cmp(&b.cost))
        });
        list.dedup_by(|later, kept| later.u == kept.u && later.v == kept.v);
        if list.len() > u32::MAX as usize {
            return Err(domain!("too many edges: {}", list.len()));
        }

        let mut is_compulsory = vec![false; n];
        for c in compulsory {
            if c >= n {
                return Err(domain!("compulsory terminal {c} outside 0..{n}"));
            }
            is_compulsory[c] = true;
        }
        let compulsory = (0..n).filter(|&v| is_compulsory[v]).collect();

        let mut offsets = vec![0usize; n + 1];
        for e in &list {
            offsets[e.u() + 1] += 1;
            offsets[e.v() + 1] += 1;
        }
        for i in 0..n {
            offsets[i + 1] += offsets[i];
        }
        let mut fill = offsets.clone();
        let mut adjacency = vec![Adj { to: 0, edge: 0 }; 2 * list.len()];
        for (idx, e) in list.iter().enumerate() {
            adjacency[fill[e.u()]] = Adj { to: e.v, edge: idx as u32 };
            fill[e.u()] += 1;
            adjacency[fill[e.v()]] = Adj { to: e.u, edge: idx as u32 };
            fill[e.v()] += 1;
        }
        // Edges are sorted by (u, v): a vertex first receives its smaller
        // neighbours in ascending order, then its larger ones, so every list
        // is already sorted by neighbour.
        debug_assert!((0..n).all(|v| adjacency[offsets[v]..offsets[v + 1]].is_sorted_by_key(|a| a.to)));

        Ok(Graph { prizes, edges: list, compulsory, is_compulsory, offsets, adjacency })
    }

    #[inline]
    pub fn vertex_count(&self) -> usize {
        self.prizes.len()
    }

    #[inline]
    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    #[inline]
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    #[inline]
    pub fn edge(&self, e: usize) -> Edge {
        self.edges[e]
    }

    #[inline]
    pub fn prize(&self, v: usize) -> f64 {
        self.prizes[v]
    }

    #[inline]
    pub fn prizes(&self) -> &[f64] {
        &self.prizes
    }

    /// Compulsory terminals in ascending order.
    #[inline]
    pub fn compulsory(&self) -> &[usize] {
        &self.compulsory
    }

    #[inline]
    pub fn is_compulsory(&self, v: usize) -> bool {
        self.is_compulsory[v]
    }

    #[inline]
    pub fn degree(&self, v: usize) -> usize {
        self.offsets[v + 1] - self.offsets[v]
    }

    /// `(neighbour, edge index)` pairs in ascending neighbour order.
    #[inline]
    pub fn neighbors(&self, v: usize) -> impl ExactSizeIterator<Item = (usize, usize)> + '_ {
        self.adjacency[self.offsets[v]..self.offsets[v + 1]]
            .iter()
            .map(|a| (a.to as usize, a.edge as usize))
    }

    /// The `k`-th entry of [`Graph::neighbors`].
    #[inline]
    pub fn neighbor(&self, v: usize, k: usize) -> Option<(usize, usize)> {
        let at = self.offsets[v] + k;
        (at < self.offsets[v + 1]).then(|| (self.adjacency[at].to as usize, self.adjacency[at].edge as usize))
    }

    pub fn find_edge(&self, u: usize, v: usize) -> Option<usize> {
        if u >= self.vertex_count() || v >= self.vertex_count() {
            return None;
        }
        let list = &self.adjacency[self.offsets[u]..self.offsets[u + 1]];
        list.binary_search_by_key(&(v as u32), |a| a.to)
            .ok()
            .map(|i| list[i].edge as usize)
    }

    pub fn total_prize(&self) -> f64 {
        self.prizes.iter().sum()
    }

    pub fn total_cost(&self) -> f64 {
        self.edges.iter().map(|e| e.cost).sum()
    }

    pub fn max_cost(&self) -> f64 {
        self.edges.iter().map(|e| e.cost).fold(0.0, f64::max)
    }

    /// Sum of all absolute costs and prizes. Stands in for an infinite prize
    /// on compulsory terminals.
    pub fn big_b(&self) -> f64 {
        self.edges.iter().map(|e| e.cost.abs()).sum::<f64>()
            + self.prizes.iter().map(|w| w.abs()).sum::<f64>()
    }
}

/// True iff a traversal from vertex 0 reaches every vertex.
pub fn is_connected(g: &Graph) -> bool {
    let n = g.vertex_count();
    let mut seen = vec![false; n];
    let mut stack = vec![0usize];
    seen[0] = true;
    let mut reached = 1;
    while let Some(v) = stack.pop() {
        for (w, _) in g.neighbors(v) {
            if !seen[w] {
                seen[w] = true;
                reached += 1;
                stack.push(w);
            }
        }
    }
    reached == n
}

/// A subtree of a parent graph (or of a [`crate::prune::TreeInstance`]):
/// a sorted vertex set plus sorted indices of the parent's edges.
///
/// Construction does not validate; [`SolutionTree::check`] does.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SolutionTree {
    vertices: Vec<usize>,
    edges: Vec<usize>,
}

impl SolutionTree {
    pub fn new(mut vertices: Vec<usize>, mut edges: Vec<usize>) -> Self {
        vertices.sort_unstable();
        vertices.dedup();
        edges.sort_unstable();
        edges.dedup();
        SolutionTree { vertices, edges }
    }

    pub fn single(v: usize) -> Self {
        SolutionTree { vertices: vec![v], edges: Vec::new() }
    }

    /// Tree spanned by `edges`; the vertex set is their endpoints.
    pub fn from_edges(g: &Graph, edges: Vec<usize>) -> Result<Self> {
        if edges.is_empty() {
            return Err(structural!("cannot infer the vertex of an edgeless tree"));
        }
        let mut vertices = Vec::with_capacity(edges.len() + 1);
        for &e in &edges {
            if e >= g.edge_count() {
                return Err(structural!("edge index {e} is not an edge of the graph"));
            }
            vertices.push(g.edge(e).u());
            vertices.push(g.edge(e).v());
        }
        Ok(SolutionTree::new(vertices, edges))
    }

    #[inline]
    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    #[inline]
    pub fn edges(&self) -> &[usize] {
        &self.edges
    }

    #[inline]
    pub fn contains(&self, v: usize) -> bool {
        self.vertices.binary_search(&v).is_ok()
    }

    pub fn vertex_mask(&self, vertex_count: usize) -> Vec<bool> {
        let mut mask = vec![false; vertex_count];
        for &v in &self.vertices {
            mask[v] = true;
        }
        mask
    }

    /// Sum of edge costs in ascending edge-index order.
    pub fn edge_cost(&self, g: &Graph) -> f64 {
        self.edges.iter().map(|&e| g.edge(e).cost).sum()
    }

    /// Checks that this is a nonempty tree of `g`: known vertices and edges,
    /// edge endpoints inside the vertex set, connected and acyclic.
    pub fn check(&self, g: &Graph) -> Result<()> {
        check_tree_shape(g.vertex_count(), &self.vertices, &self.edges, |e| {
            (e < g.edge_count()).then(|| (g.edge(e).u(), g.edge(e).v()))
        })
    }

    /// [`SolutionTree::check`] plus containment of every compulsory terminal.
    pub fn check_feasible(&self, g: &Graph) -> Result<()> {
        self.check(g)?;
        if let Some(c) = g.compulsory().iter().find(|&&c| !self.contains(c)) {
            return Err(structural!("compulsory terminal {c} is not in the tree"));
        }
        Ok(())
    }
}

/// Shared tree validation for graphs and tree instances. `endpoints` maps an
/// edge index to its endpoints, or `None` for an unknown index.
pub(crate) fn check_tree_shape(
    vertex_count: usize,
    vertices: &[usize],
    edges: &[usize],
    endpoints: impl Fn(usize) -> Option<(usize, usize)>,
) -> Result<()> {
    if vertices.is_empty() {
        return Err(structural!("a tree needs at least one vertex"));
    }
    if let Some(&v) = vertices.iter().find(|&&v| v >= vertex_count) {
        return Err(structural!("vertex {v} is not in the graph"));
    }
    if edges.len() + 1 != vertices.len() {
        return Err(structural!(
            "{} vertices and {} edges cannot form a tree",
            vertices.len(),
            edges.len()
        ));
    }
    let spanning = vertices.len() == vertex_count;
    let local = |v: usize| if spanning { (v < vertex_count).then_some(v) } else { vertices.binary_search(&v).ok() };
    let mut dsu = DisjointSet::new(vertices.len());
    for &e in edges {
        let (u, v) = endpoints(e).ok_or_else(|| structural!("edge index {e} is not an edge of the graph"))?;
        let (Some(a), Some(b)) = (local(u), local(v)) else {
            return Err(structural!("edge {e} has an endpoint outside the tree's vertex set"));
        };
        if !dsu.union(a, b) {
            return Err(structural!("edge {e} closes a cycle"));
        }
    }
    Ok(())
}

/// Missed prizes plus included edge costs. Errors if `t` is not a tree of `g`.
pub fn net_cost(g: &Graph, t: &SolutionTree) -> Result<f64> {
    t.check(g)?;
    Ok(missed_prize(g, t) + t.edge_cost(g))
}

/// Included prizes minus included edge costs. Errors if `t` is not a tree of `g`.
pub fn net_weight(g: &Graph, t: &SolutionTree) -> Result<f64> {
    t.check(g)?;
    let gained: f64 = t.vertices.iter().map(|&v| g.prize(v)).sum();
    Ok(gained - t.edge_cost(g))
}

/// Prize of the vertices outside `t`, summed in ascending vertex order.
pub(crate) fn missed_prize(g: &Graph, t: &SolutionTree) -> f64 {
    let mut inside = t.vertices.iter().copied().peekable();
    let mut missed = 0.0;
    for v in 0..g.vertex_count() {
        if inside.peek() == Some(&v) {
            inside.next();
        } else {
            missed += g.prize(v);
        }
    }
    missed
}

#[cfg(test)]
mod tests {
    use super::*;

    // i, j, k = 0, 1, 2
    fn vi_b_triangle() -> Graph {
        Graph::new(vec![3.0, 20.0, 20.0], [(0, 1, 6.0), (0, 2, 10.0), (1, 2, 11.0)], [1]).unwrap()
    }

    fn unrooted_triangle() -> Graph {
        Graph::new(vec![2.0, 9.0, 7.0], [(0, 1, 5.0), (0, 2, 5.0), (1, 2, 6.0)], []).unwrap()
    }

    #[test]
    fn net_cost_of_worked_triangles() {
        let g = vi_b_triangle();
        let jk = g.find_edge(1, 2).unwrap();
        let t = SolutionTree::from_edges(&g, vec![jk]).unwrap();
        assert_eq!(net_cost(&g, &t).unwrap(), 14.0);

        let g = unrooted_triangle();
        assert_eq!(net_cost(&g, &SolutionTree::single(1)).unwrap(), 9.0);
        let jk = g.find_edge(2, 1).unwrap();
        let t = SolutionTree::from_edges(&g, vec![jk]).unwrap();
        assert_eq!(net_weight(&g, &t).unwrap(), 10.0);
    }

    #[test]
    fn spanning_tree_net_cost_is_edge_cost() {
        let g = unrooted_triangle();
        let t = SolutionTree::from_edges(&g, vec![0, 2]).unwrap();
        assert_eq!(net_cost(&g, &t).unwrap(), t.edge_cost(&g));
    }

    #[test]
    fn net_weight_small_cases() {
        let g = Graph::new(vec![5.0], [], []).unwrap();
        assert_eq!(net_weight(&g, &SolutionTree::single(0)).unwrap(), 5.0);
        let g = Graph::new(vec![0.0, 5.0], [(0, 1, 3.0)], []).unwrap();
        let t = SolutionTree::from_edges(&g, vec![0]).unwrap();
        assert_eq!(net_weight(&g, &t).unwrap(), 2.0);
    }

    #[test]
    fn invalid_trees_are_structural_errors() {
        let g = unrooted_triangle();
        let cycle = SolutionTree::new(vec![0, 1, 2], vec![0, 1, 2]);
        assert!(matches!(net_cost(&g, &cycle), Err(Error::Structural(_))));
        let split = SolutionTree::new(vec![0, 1, 2], vec![0]);
        assert!(matches!(net_cost(&g, &split), Err(Error::Structural(_))));
        let foreign = SolutionTree::new(vec![0, 1], vec![7]);
        assert!(matches!(net_cost(&g, &foreign), Err(Error::Structural(_))));
        let stray = SolutionTree::new(vec![0, 1], vec![2]);
        assert!(matches!(net_cost(&g, &stray), Err(Error::Structural(_))));
        assert!(SolutionTree::new(vec![], vec![]).check(&g).is_err());
    }

    #[test]
    fn connectivity() {
        assert!(is_connected(&Graph::new(vec![1.0], [], []).unwrap()));
        let g = Graph::new_unconnected(vec![1.0, 1.0], [], []).unwrap();
        assert!(!is_connected(&g));
        assert_eq!(Graph::new(vec![1.0, 1.0], [], []), Err(Error::Disconnected));
    }

    #[test]
    fn input_validation() {
        assert!(matches!(Graph::new(vec![1.0, 1.0], [(0, 0, 1.0)], []), Err(Error::Domain(_))));
        assert!(matches!(Graph::new(vec![1.0, 1.0], [(0, 1, 0.0)], []), Err(Error::Domain(_))));
        assert!(matches!(Graph::new(vec![-1.0, 1.0], [(0, 1, 1.0)], []), Err(Error::Domain(_))));
        assert!(matches!(Graph::new(vec![1.0, 1.0], [(0, 1, 1.0)], [2]), Err(Error::Domain(_))));
        assert!(matches!(Graph::new(vec![], [], []), Err(Error::Domain(_))));
    }

    #[test]
    fn parallel_edges_keep_the_cheapest() {
        let g = Graph::new(vec![0.0; 3], [(1, 0, 4.0), (0, 1, 2.0), (2, 1, 1.0), (1, 2, 3.0)], []).unwrap();
        assert_eq!(g.edge_count(), 2);
        assert_eq!(g.edge(0).cost, 2.0);
        assert_eq!((g.edge(1).u(), g.edge(1).v(), g.edge(1).cost), (1, 2, 1.0));
        let nbrs: Vec<_> = g.neighbors(1).collect();
        assert_eq!(nbrs, vec![(0, 0), (2, 1)]);
    }
}
