//! Priority queues used by the solvers.

use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

/// `f64` ordered by `total_cmp`, with a `u32` tie-breaker.
#[derive(Clone, Copy, Debug, PartialEq)]
pub(crate) struct TimeKey {
    pub time: f64,
    pub id: u32,
}

impl Eq for TimeKey {}

impl Ord for TimeKey {
    fn cmp(&self, other: &Self) -> Ordering {
        self.time.total_cmp(&other.time).then(self.id.cmp(&other.id))
    }
}

impl PartialOrd for TimeKey {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

const ABSENT: u32 = u32::MAX;

/// Binary min-heap over items `0..capacity` with decrease-key.
pub(crate) struct IndexedMinHeap<K> {
    heap: Vec<(K, u32)>,
    position: Vec<u32>,
}

impl<K: Ord + Copy> IndexedMinHeap<K> {
    pub(crate) fn new(capacity: usize) -> Self {
        IndexedMinHeap { heap: Vec::new(), position: vec![ABSENT; capacity] }
    }

    /// Inserts `item`, or lowers its key if `key` is smaller than the stored one.
    pub(crate) fn push_or_decrease(&mut self, item: usize, key: K) {
        match self.position[item] {
            ABSENT => {
                self.heap.push((key, item as u32));
                let at = self.heap.len() - 1;
                self.position[item] = at as u32;
                self.sift_up(at);
            }
            p => {
                let p = p as usize;
                if key < self.heap[p].0 {
                    self.heap[p].0 = key;
                    self.sift_up(p);
                }
            }
        }
    }

    pub(crate) fn pop(&mut self) -> Option<(K, usize)> {
        if self.heap.is_empty() {
            return None;
        }
        let last = self.heap.len() - 1;
        self.heap.swap(0, last);
        let (key, item) = self.heap.pop().unwrap();
        self.position[item as usize] = ABSENT;
        if !self.heap.is_empty() {
            self.position[self.heap[0].1 as usize] = 0;
            self.sift_down(0);
        }
        Some((key, item as usize))
    }

    fn sift_up(&mut self, mut at: usize) {
        while at > 0 {
            let parent = (at - 1) / 2;
            if self.heap[at].0 >= self.heap[parent].0 {
                break;
            }
            self.swap(at, parent);
            at = parent;
        }
    }

    fn sift_down(&mut self, mut at: usize) {
        let len = self.heap.len();
        loop {
            let left = 2 * at + 1;
            if left >= len {
                break;
            }
            let right = left + 1;
            let child = if right < len && self.heap[right].0 < self.heap[left].0 { right } else { left };
            if self.heap[child].0 >= self.heap[at].0 {
                break;
            }
            self.swap(at, child);
            at = child;
        }
    }

    fn swap(&mut self, a: usize, b: usize) {
        self.heap.swap(a, b);
        self.position[self.heap[a].1 as usize] = a as u32;
        self.position[self.heap[b].1 as usize] = b as u32;
    }
}

/// Handle of one pairing heap inside a [`PairingArena`]; `NIL` is empty.
pub(crate) type HeapRoot = u32;
pub(crate) const NIL: u32 = u32::MAX;

#[derive(Clone, Copy, Debug)]
struct Node {
    // Actual key = key + sum of child_offset over all proper ancestors.
    key: f64,
    child_offset: f64,
    item: u32,
    tag: u32,
    child: u32,
    sibling: u32,
}

/// Arena of meldable pairing heaps with a lazy whole-heap key shift.
///
/// Entries are immutable once inserted; callers invalidate entries through
/// `tag` and skip stale ones on pop. Ties on key are broken by `item`.
pub(crate) struct PairingArena {
    nodes: Vec<Node>,
    free: Vec<u32>,
    scratch: Vec<u32>,
}

impl PairingArena {
    pub(crate) fn with_capacity(capacity: usize) -> Self {
        PairingArena { nodes: Vec::with_capacity(capacity), free: Vec::new(), scratch: Vec::new() }
    }

    #[inline]
    fn less(&self, a: u32, b: u32) -> bool {
        let (x, y) = (&self.nodes[a as usize], &self.nodes[b as usize]);
        match x.key.total_cmp(&y.key) {
            Ordering::Less => true,
            Ordering::Greater => false,
            Ordering::Equal => x.item < y.item,
        }
    }

    pub(crate) fn insert(&mut self, root: HeapRoot, key: f64, item: u32, tag: u32) -> HeapRoot {
        let node = Node { key, child_offset: 0.0, item, tag, child: NIL, sibling: NIL };
        let id = match self.free.pop() {
            Some(id) => {
                self.nodes[id as usize] = node;
                id
            }
            None => {
                self.nodes.push(node);
                (self.nodes.len() - 1) as u32
            }
        };
        self.meld(root, id)
    }

    /// Melds two heap roots; both must be roots (no pending ancestor offset).
    pub(crate) fn meld(&mut self, a: HeapRoot, b: HeapRoot) -> HeapRoot {
        if a == NIL {
            return b;
        }
        if b == NIL {
            return a;
        }
        let (winner, loser) = if self.less(b, a) { (b, a) } else { (a, b) };
        let shift = self.nodes[winner as usize].child_offset;
        let w_child = self.nodes[winner as usize].child;
        let l = &mut self.nodes[loser as usize];
        l.key -= shift;
        l.child_offset -= shift;
        l.sibling = w_child;
        self.nodes[winner as usize].child = loser;
        winner
    }

    /// Adds `delta` to every key in the heap.
    pub(crate) fn shift(&mut self, root: HeapRoot, delta: f64) {
        if root != NIL {
            let r = &mut self.nodes[root as usize];
            r.key += delta;
            r.child_offset += delta;
        }
    }

    /// `(key, item, tag)` of the minimum.
    #[inline]
    pub(crate) fn peek(&self, root: HeapRoot) -> Option<(f64, u32, u32)> {
        (root != NIL).then(|| {
            let r = &self.nodes[root as usize];
            (r.key, r.item, r.tag)
        })
    }

    /// Removes the minimum and returns the new root.
    pub(crate) fn pop(&mut self, root: HeapRoot) -> HeapRoot {
        debug_assert!(root != NIL);
        let offset = self.nodes[root as usize].child_offset;
        let mut child = self.nodes[root as usize].child;
        self.free.push(root);

        let mut roots = core::mem::take(&mut self.scratch);
        roots.clear();
        while child != NIL {
            let c = &mut self.nodes[child as usize];
            let next = c.sibling;
            c.key += offset;
            c.child_offset += offset;
            c.sibling = NIL;
            roots.push(child);
            child = next;
        }
        // Two-pass pairing: meld left to right in pairs, then fold right to left.
        let mut paired = 0;
        let mut i = 0;
        while i < roots.len() {
            let merged = if i + 1 < roots.len() { self.meld(roots[i], roots[i + 1]) } else { roots[i] };
            roots[paired] = merged;
            paired += 1;
            i += 2;
        }
        let mut result = NIL;
        for k in (0..paired).rev() {
            result = self.meld(roots[k], result);
        }
        self.scratch = roots;
        result
    }
}
