//! Disjoint-set forests.
//!
//! [`DisjointSet`] is the plain union-by-size structure. [`ShiftedSets`] also
//! carries an additive shift per set: every member sees the same shift, a
//! whole set can be shifted in O(1), and the shift of one member is read back
//! through the find path. The GW solver stores edge-part event times relative
//! to this shift so that freezing and resuming a cluster is a single add.

use alloc::vec;
use alloc::vec::Vec;

#[derive(Clone, Debug)]
pub(crate) struct DisjointSet {
    parent: Vec<u32>,
    size: Vec<u32>,
}

impl DisjointSet {
    pub(crate) fn new(n: usize) -> Self {
        DisjointSet { parent: (0..n as u32).collect(), size: vec![1; n] }
    }

    pub(crate) fn find(&mut self, x: usize) -> usize {
        let mut root = x;
        while self.parent[root] as usize != root {
            root = self.parent[root] as usize;
        }
        let mut x = x;
        while self.parent[x] as usize != root {
            let next = self.parent[x] as usize;
            self.parent[x] = root as u32;
            x = next;
        }
        root
    }

    /// Returns false if `a` and `b` were already in the same set.
    pub(crate) fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut a, mut b) = (self.find(a), self.find(b));
        if a == b {
            return false;
        }
        if self.size[a] < self.size[b] {
            core::mem::swap(&mut a, &mut b);
        }
        self.parent[b] = a as u32;
        self.size[a] += self.size[b];
        true
    }
}

#[derive(Clone, Debug)]
pub(crate) struct ShiftedSets {
    parent: Vec<u32>,
    size: Vec<u32>,
    // Relative to the parent; a root holds the absolute shift of its set.
    offset: Vec<f64>,
    path: Vec<u32>,
}

impl ShiftedSets {
    pub(crate) fn new(n: usize) -> Self {
        ShiftedSets {
            parent: (0..n as u32).collect(),
            size: vec![1; n],
            offset: vec![0.0; n],
            path: Vec::new(),
        }
    }

    pub(crate) fn find(&mut self, x: usize) -> usize {
        self.find_with_shift(x).0
    }

    /// Root of `x`'s set and the shift seen by `x`.
    pub(crate) fn find_with_shift(&mut self, x: usize) -> (usize, f64) {
        let mut root = x;
        self.path.clear();
        while self.parent[root] as usize != root {
            self.path.push(root as u32);
            root = self.parent[root] as usize;
        }
        // Compress from the node nearest the root downwards so each node's
        // offset becomes its full distance to the root.
        let mut below_root = 0.0;
        for &node in self.path.iter().rev() {
            let node = node as usize;
            below_root += self.offset[node];
            self.offset[node] = below_root;
            self.parent[node] = root as u32;
        }
        let shift = if x == root { self.offset[root] } else { self.offset[x] + self.offset[root] };
        (root, shift)
    }

    /// Adds `delta` to the shift of every member of the set rooted at `root`.
    pub(crate) fn shift(&mut self, root: usize, delta: f64) {
        debug_assert_eq!(self.parent[root] as usize, root);
        self.offset[root] += delta;
    }

    /// Unites two roots, keeping each member's shift. Returns the new root.
    pub(crate) fn union_roots(&mut self, a: usize, b: usize) -> usize {
        debug_assert!(a != b);
        let (big, small) = if self.size[a] >= self.size[b] { (a, b) } else { (b, a) };
        self.parent[small] = big as u32;
        self.size[big] += self.size[small];
        self.offset[small] -= self.offset[big];
        big
    }
}
