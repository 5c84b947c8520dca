//! Event-driven Goemans-Williamson growth with dynamic edge splitting (FGW′).
//!
//! Every vertex starts as a cluster whose slack is its prize; compulsory
//! terminals get the sentinel `B` and never deactivate. Every edge is split
//! into two parts, one per endpoint, whose slacks share the cost at the ratio
//! `1 : (s - 1)` with the smaller share on the lower-id endpoint. Slack of
//! active clusters and of their edge parts drains at unit speed.
//!
//! Two kinds of event are processed in time order, edge events first on ties:
//!
//! * a cluster event deactivates a cluster whose slack ran out;
//! * an edge event fires when an edge part's slack reaches zero. If the part
//!   on the other side still has slack `r > mu` the remainder is split again
//!   (evenly when both sides are active, all on this side otherwise);
//!   otherwise the edge joins the forest and the two clusters merge.
//!
//! Growth stops when at most one cluster is active. The tree inside the last
//! active cluster is the raw solution, which [`fgw_prime`] then prunes with
//! GPrA.
//!
//! Ties are resolved deterministically: by time, edge events before cluster
//! events, then by edge-part index (`2 * edge + side`, side 0 being the
//! lower-id endpoint) or cluster id. When no cluster is active at the end,
//! the last cluster to deactivate wins, lowest id first.
//!
//! Edge-part event times are stored relative to a per-cluster shift
//! ([`ShiftedSets`]) and the clusters' pending parts live in meldable pairing
//! heaps, so freezing and resuming a cluster costs O(1) and a merge costs
//! O(log n) amortized.

use alloc::collections::BinaryHeap;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Reverse;

use crate::dsu::ShiftedSets;
use crate::error::{domain, Error, Result};
use crate::graph::{is_connected, Graph, SolutionTree};
use crate::heap::{HeapRoot, PairingArena, TimeKey, NIL};
use crate::prune::gpra_solution;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FgwConfig {
    /// Edge splitting ratio, at least 1.
    pub s: f64,
    /// Merge tolerance; `None` means `1e-9 * max edge cost`.
    pub mu: Option<f64>,
    /// How often one edge's slack may be re-split before it is merged anyway.
    pub max_splits: u32,
}

impl Default for FgwConfig {
    fn default() -> Self {
        FgwConfig { s: 2.0, mu: None, max_splits: 64 }
    }
}

impl FgwConfig {
    pub fn with_s(s: f64) -> Self {
        FgwConfig { s, ..Self::default() }
    }

    /// The tolerance actually used on `g`.
    pub fn resolved_mu(&self, g: &Graph) -> f64 {
        self.mu.unwrap_or(1e-9 * g.max_cost())
    }

    fn validate(&self, g: &Graph) -> Result<f64> {
        if !(self.s >= 1.0) || !self.s.is_finite() {
            return Err(domain!("splitting ratio s must be a finite value >= 1, got {}", self.s));
        }
        let mu = self.resolved_mu(g);
        if !(mu >= 0.0) || !mu.is_finite() {
            return Err(domain!("mu must be finite and nonnegative, got {mu}"));
        }
        Ok(mu)
    }
}

/// Initial edge-part slacks: `(c/s, (s-1)c/s)` for the lower and higher
/// endpoint of every edge.
pub fn split_edges(g: &Graph, s: f64) -> Result<Vec<(f64, f64)>> {
    if !(s >= 1.0) || !s.is_finite() {
        return Err(domain!("splitting ratio s must be a finite value >= 1, got {s}"));
    }
    Ok(g.edges().iter().map(|e| (e.cost / s, (s - 1.0) * e.cost / s)).collect())
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct FgwStats {
    /// Edge events processed, including those on edges inside one cluster.
    pub edge_events: u64,
    pub cluster_events: u64,
    pub merges: u64,
    pub splits: u64,
    /// Edge events dropped because both parts were already in one cluster.
    pub internal: u64,
}

impl FgwStats {
    pub fn events(&self) -> u64 {
        self.edge_events + self.cluster_events
    }
}

/// Raw growth tree (before pruning).
pub fn fgw_growth(g: &Graph, cfg: &FgwConfig) -> Result<SolutionTree> {
    Ok(fgw_growth_with_stats(g, cfg)?.0)
}

pub fn fgw_growth_with_stats(g: &Graph, cfg: &FgwConfig) -> Result<(SolutionTree, FgwStats)> {
    let mu = cfg.validate(g)?;
    let mut run = Growth::new(g, cfg, mu)?;
    run.run(|_| {});
    Ok(run.finish())
}

/// Like [`fgw_growth_with_stats`], also returning the global time after each
/// processed event.
pub fn fgw_growth_traced(g: &Graph, cfg: &FgwConfig) -> Result<(SolutionTree, FgwStats, Vec<f64>)> {
    let mu = cfg.validate(g)?;
    let mut run = Growth::new(g, cfg, mu)?;
    let mut times = Vec::new();
    run.run(|t| times.push(t));
    let (tree, stats) = run.finish();
    Ok((tree, stats, times))
}

/// FGW′: growth followed by GPrA with `g`'s compulsory terminals.
pub fn fgw_prime(g: &Graph, cfg: &FgwConfig) -> Result<SolutionTree> {
    Ok(fgw_prime_with_stats(g, cfg)?.0)
}

pub fn fgw_prime_with_stats(g: &Graph, cfg: &FgwConfig) -> Result<(SolutionTree, FgwStats)> {
    let (raw, stats) = fgw_growth_with_stats(g, cfg)?;
    Ok((gpra_solution(g, &raw)?, stats))
}

struct Cluster {
    heap: HeapRoot,
    // Root of the cluster's vertex set in `sets`.
    root: u32,
    active: bool,
    alive: bool,
    compulsory: bool,
    // While active: the time its slack runs out.
    event_time: f64,
    deactivation_time: f64,
    // Only the edge-queue entry carrying the current stamp is live.
    stamp: u32,
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
struct EdgeEntry {
    key: TimeKey,
    cluster: u32,
    stamp: u32,
}

struct Growth<'a> {
    g: &'a Graph,
    mu: f64,
    max_splits: u32,
    t_g: f64,
    sets: ShiftedSets,
    cluster_at_root: Vec<u32>,
    clusters: Vec<Cluster>,
    arena: PairingArena,
    // Part event time minus the shift of its endpoint's set.
    base: Vec<f64>,
    version: Vec<u32>,
    splits: Vec<u32>,
    edge_queue: BinaryHeap<Reverse<EdgeEntry>>,
    cluster_queue: BinaryHeap<Reverse<TimeKey>>,
    active_count: usize,
    forest: Vec<u32>,
    stats: FgwStats,
}

enum Next {
    Edge(EdgeEntry),
    Cluster(TimeKey),
}

impl<'a> Growth<'a> {
    fn new(g: &'a Graph, cfg: &FgwConfig, mu: f64) -> Result<Self> {
        if !is_connected(g) {
            return Err(Error::Disconnected);
        }
        let n = g.vertex_count();
        let m = g.edge_count();
        let slacks = split_edges(g, cfg.s)?;
        let big_b = g.big_b();

        let mut clusters = Vec::with_capacity(2 * n);
        let mut cluster_queue = BinaryHeap::new();
        let mut active_count = 0;
        for v in 0..n {
            let compulsory = g.is_compulsory(v);
            let prize = g.prize(v);
            let active = compulsory || prize > 0.0;
            active_count += active as usize;
            let event_time = if compulsory { big_b } else { prize };
            if active && !compulsory {
                cluster_queue.push(Reverse(TimeKey { time: event_time, id: v as u32 }));
            }
            clusters.push(Cluster {
                heap: NIL,
                root: v as u32,
                active,
                alive: true,
                compulsory,
                event_time,
                deactivation_time: 0.0,
                stamp: 0,
            });
        }

        let mut arena = PairingArena::with_capacity(2 * m);
        let mut base = Vec::with_capacity(2 * m);
        for (e, (edge, &(su, sv))) in g.edges().iter().zip(&slacks).enumerate() {
            for (side, (x, slack)) in [(edge.u(), su), (edge.v(), sv)].into_iter().enumerate() {
                let part = (2 * e + side) as u32;
                clusters[x].heap = arena.insert(clusters[x].heap, slack, part, 0);
                base.push(slack);
            }
        }

        let mut run = Growth {
            g,
            mu,
            max_splits: cfg.max_splits,
            t_g: 0.0,
            sets: ShiftedSets::new(n),
            cluster_at_root: (0..n as u32).collect(),
            clusters,
            arena,
            base,
            version: vec![0; 2 * m],
            splits: vec![0; m],
            edge_queue: BinaryHeap::new(),
            cluster_queue,
            active_count,
            forest: Vec::new(),
            stats: FgwStats::default(),
        };
        for c in 0..n {
            if run.clusters[c].active {
                run.refresh(c);
            }
        }
        Ok(run)
    }

    fn endpoint(&self, part: usize) -> usize {
        let edge = self.g.edge(part / 2);
        if part % 2 == 0 {
            edge.u()
        } else {
            edge.v()
        }
    }

    /// Drops stale entries from the top of `c`'s heap and publishes its
    /// minimum to the edge queue.
    fn refresh(&mut self, c: usize) {
        let cl = &mut self.clusters[c];
        while let Some((time, part, tag)) = self.arena.peek(cl.heap) {
            if tag != self.version[part as usize] {
                cl.heap = self.arena.pop(cl.heap);
                continue;
            }
            cl.stamp = cl.stamp.wrapping_add(1);
            self.edge_queue.push(Reverse(EdgeEntry {
                key: TimeKey { time, id: part },
                cluster: c as u32,
                stamp: cl.stamp,
            }));
            break;
        }
    }

    fn schedule(&mut self, part: usize, time: f64, c: usize, shift: f64) {
        self.version[part] += 1;
        self.base[part] = time - shift;
        let cl = &mut self.clusters[c];
        cl.heap = self.arena.insert(cl.heap, time, part as u32, self.version[part]);
    }

    fn next_event(&mut self) -> Option<Next> {
        while let Some(&Reverse(entry)) = self.edge_queue.peek() {
            let cl = &self.clusters[entry.cluster as usize];
            if cl.alive && cl.active && cl.stamp == entry.stamp {
                break;
            }
            self.edge_queue.pop();
        }
        while let Some(&Reverse(key)) = self.cluster_queue.peek() {
            let cl = &self.clusters[key.id as usize];
            if cl.alive && cl.active && cl.event_time == key.time {
                break;
            }
            self.cluster_queue.pop();
        }
        match (self.edge_queue.peek(), self.cluster_queue.peek()) {
            (Some(&Reverse(e)), Some(&Reverse(c))) => {
                Some(if e.key.time <= c.time { Next::Edge(e) } else { Next::Cluster(c) })
            }
            (Some(&Reverse(e)), None) => Some(Next::Edge(e)),
            (None, Some(&Reverse(c))) => Some(Next::Cluster(c)),
            (None, None) => None,
        }
    }

    fn run(&mut self, mut observe: impl FnMut(f64)) {
        while self.active_count > 1 {
            match self.next_event() {
                Some(Next::Edge(entry)) => {
                    self.edge_queue.pop();
                    self.t_g = self.t_g.max(entry.key.time);
                    self.edge_event(entry);
                }
                Some(Next::Cluster(key)) => {
                    self.cluster_queue.pop();
                    self.t_g = self.t_g.max(key.time);
                    let cl = &mut self.clusters[key.id as usize];
                    cl.active = false;
                    cl.deactivation_time = self.t_g;
                    self.active_count -= 1;
                    self.stats.cluster_events += 1;
                }
                None => break,
            }
            observe(self.t_g);
        }
    }

    fn edge_event(&mut self, entry: EdgeEntry) {
        self.stats.edge_events += 1;
        let c1 = entry.cluster as usize;
        let part = entry.key.id as usize;
        let cl = &mut self.clusters[c1];
        debug_assert_eq!(self.arena.peek(cl.heap).map(|p| p.1), Some(entry.key.id));
        cl.heap = self.arena.pop(cl.heap);

        let other = part ^ 1;
        let (r1, shift1) = self.sets.find_with_shift(self.endpoint(part));
        let (r2, shift2) = self.sets.find_with_shift(self.endpoint(other));
        if r1 == r2 {
            self.stats.internal += 1;
            self.refresh(c1);
            return;
        }
        let c2 = self.cluster_at_root[r2] as usize;
        let other_time = self.base[other] + shift2;
        let (active2, d2) = (self.clusters[c2].active, self.clusters[c2].deactivation_time);
        let r = if active2 { other_time - self.t_g } else { other_time - d2 };

        let e = part / 2;
        if r > self.mu && self.splits[e] < self.max_splits {
            self.splits[e] += 1;
            self.stats.splits += 1;
            if active2 {
                let t = self.t_g + r / 2.0;
                self.schedule(part, t, c1, shift1);
                self.schedule(other, t, c2, shift2);
                self.refresh(c2);
            } else {
                self.schedule(part, self.t_g + r, c1, shift1);
                self.schedule(other, d2, c2, shift2);
            }
            self.refresh(c1);
        } else {
            self.version[other] += 1;
            self.forest.push(e as u32);
            self.merge(c1, c2);
        }
    }

    fn merge(&mut self, a: usize, b: usize) {
        let t_g = self.t_g;
        let mut slack = 0.0;
        for c in [a, b] {
            let cl = &mut self.clusters[c];
            if cl.active {
                slack += cl.event_time - t_g;
            } else {
                // Resume the frozen side's edge parts from now.
                let delta = t_g - cl.deactivation_time;
                self.sets.shift(cl.root as usize, delta);
                self.arena.shift(cl.heap, delta);
            }
            cl.alive = false;
        }
        let (ca, cb) = (&self.clusters[a], &self.clusters[b]);
        let root = self.sets.union_roots(ca.root as usize, cb.root as usize);
        let heap = self.arena.meld(ca.heap, cb.heap);
        let compulsory = ca.compulsory || cb.compulsory;
        self.active_count -= ca.active as usize + cb.active as usize;
        let active = compulsory || slack > 0.0;

        let id = self.clusters.len();
        self.cluster_at_root[root] = id as u32;
        self.clusters.push(Cluster {
            heap,
            root: root as u32,
            active,
            alive: true,
            compulsory,
            event_time: t_g + slack,
            deactivation_time: t_g,
            stamp: 0,
        });
        self.stats.merges += 1;
        if active {
            self.active_count += 1;
            if !compulsory {
                self.cluster_queue.push(Reverse(TimeKey { time: t_g + slack, id: id as u32 }));
            }
            self.refresh(id);
        }
    }

    fn final_cluster(&self) -> usize {
        let mut best: Option<usize> = None;
        for (c, cl) in self.clusters.iter().enumerate() {
            if !cl.alive {
                continue;
            }
            if cl.active {
                return c;
            }
            if best.is_none_or(|b| cl.deactivation_time > self.clusters[b].deactivation_time) {
                best = Some(c);
            }
        }
        best.expect("at least one cluster is alive")
    }

    fn finish(mut self) -> (SolutionTree, FgwStats) {
        let root = self.clusters[self.final_cluster()].root as usize;
        let n = self.g.vertex_count();
        let vertices: Vec<usize> = (0..n).filter(|&v| self.sets.find(v) == root).collect();
        let mut edges = Vec::new();
        for &e in &self.forest {
            if self.sets.find(self.g.edge(e as usize).u()) == root {
                edges.push(e as usize);
            }
        }
        (SolutionTree::new(vertices, edges), self.stats)
    }
}
