//! Tree growing: attach profitable paths hanging off the current tree.
//!
//! A path candidate starts at one tree vertex and continues through vertices
//! outside the tree. Its length is the number of outside vertices and its
//! value is their prize minus the path's edge costs. [`tga`] keeps adding the
//! best candidate of length at most `n` with value `>= 0` until every tree
//! vertex has none left.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::error::{domain, Result};
use crate::graph::{Graph, SolutionTree};

#[derive(Clone, Debug, PartialEq)]
pub struct PathCandidate {
    /// The single path vertex already in the tree.
    pub root_vertex: usize,
    /// Vertices outside the tree, in path order.
    pub new_vertices: Vec<usize>,
    /// `edges[k]` joins the previous path vertex to `new_vertices[k]`.
    pub edges: Vec<usize>,
    pub value: f64,
}

impl PathCandidate {
    pub fn len(&self) -> usize {
        self.new_vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.new_vertices.is_empty()
    }
}

/// Descending value, then lexicographic vertex sequence.
fn candidate_order(a: &PathCandidate, b: &PathCandidate) -> Ordering {
    b.value
        .total_cmp(&a.value)
        .then_with(|| a.new_vertices.cmp(&b.new_vertices))
}

/// Depth-first walk over outside vertices in ascending neighbour order, so
/// paths are reported in lexicographic order with each prefix before its
/// extensions.
fn walk_paths(
    g: &Graph,
    in_tree: &[bool],
    root: usize,
    max_len: usize,
    mut report: impl FnMut(&[usize], &[usize], f64),
) {
    let mut verts: Vec<usize> = Vec::with_capacity(max_len);
    let mut edges: Vec<usize> = Vec::with_capacity(max_len);
    let mut values: Vec<f64> = Vec::with_capacity(max_len);
    // Stack of (vertex whose neighbours are being scanned, next neighbour slot).
    let mut stack: Vec<(usize, usize)> = Vec::with_capacity(max_len + 1);
    stack.push((root, 0));
    while let Some(&mut (at, ref mut slot)) = stack.last_mut() {
        let next = if verts.len() < max_len { g.neighbor(at, *slot) } else { None };
        match next {
            Some((w, e)) => {
                *slot += 1;
                if in_tree[w] || verts.contains(&w) {
                    continue;
                }
                let value = values.last().copied().unwrap_or(0.0) + g.prize(w) - g.edge(e).cost;
                verts.push(w);
                edges.push(e);
                values.push(value);
                report(&verts, &edges, value);
                stack.push((w, 0));
            }
            None => {
                stack.pop();
                if verts.pop().is_some() {
                    edges.pop();
                    values.pop();
                }
            }
        }
    }
}

/// All path candidates rooted at `i` with length `1..=n`, best first.
pub fn enumerate_path_candidates(g: &Graph, t: &SolutionTree, i: usize, n: usize) -> Result<Vec<PathCandidate>> {
    t.check(g)?;
    if !t.contains(i) {
        return Err(domain!("vertex {i} is not in the tree"));
    }
    if n == 0 {
        return Err(domain!("path length bound must be at least 1"));
    }
    let in_tree = t.vertex_mask(g.vertex_count());
    let mut out = Vec::new();
    walk_paths(g, &in_tree, i, n, |verts, edges, value| {
        out.push(PathCandidate { root_vertex: i, new_vertices: verts.to_vec(), edges: edges.to_vec(), value });
    });
    out.sort_by(candidate_order);
    Ok(out)
}

/// Best candidate under the enumeration order; `None` if no path exists.
fn best_candidate(g: &Graph, in_tree: &[bool], i: usize, n: usize) -> Option<PathCandidate> {
    let mut best: Option<PathCandidate> = None;
    walk_paths(g, in_tree, i, n, |verts, edges, value| {
        // Paths arrive in lexicographic order, so only a strictly larger
        // value replaces the incumbent.
        if best.as_ref().is_none_or(|b| value > b.value) {
            best = Some(PathCandidate {
                root_vertex: i,
                new_vertices: verts.to_vec(),
                edges: edges.to_vec(),
                value,
            });
        }
    });
    best
}

/// Grown tree plus the number of paths added.
pub fn tga_with_count(g: &Graph, t: &SolutionTree, n: usize) -> Result<(SolutionTree, usize)> {
    t.check(g)?;
    if n == 0 {
        return Err(domain!("path length bound must be at least 1"));
    }
    let mut in_tree = t.vertex_mask(g.vertex_count());
    let mut vertices = t.vertices().to_vec();
    let mut edges = t.edges().to_vec();
    let mut unchecked: BTreeSet<usize> = t.vertices().iter().copied().collect();
    let mut additions = 0;

    // Round-robin over unchecked vertices in ascending id.
    let mut cursor = 0;
    loop {
        let Some(i) = unchecked.range(cursor..).next().or_else(|| unchecked.iter().next()).copied() else {
            break;
        };
        cursor = i + 1;
        match best_candidate(g, &in_tree, i, n) {
            Some(path) if path.value >= 0.0 => {
                for &w in &path.new_vertices {
                    in_tree[w] = true;
                    unchecked.insert(w);
                }
                vertices.extend_from_slice(&path.new_vertices);
                edges.extend_from_slice(&path.edges);
                additions += 1;
            }
            _ => {
                unchecked.remove(&i);
            }
        }
    }
    Ok((SolutionTree::new(vertices, edges), additions))
}

/// Tree growing with path length bound `n >= 1`.
pub fn tga(g: &Graph, t: &SolutionTree, n: usize) -> Result<SolutionTree> {
    Ok(tga_with_count(g, t, n)?.0)
}
