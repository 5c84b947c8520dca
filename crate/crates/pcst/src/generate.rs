//! Random connected instances: a uniformly random spanning tree (decoded
//! from a random Prüfer sequence) plus distinct random extra edges.
//!
//! Everything is drawn from one `ChaCha8Rng` seeded with the given seed, so
//! the same parameters always give the same graph.

use std::collections::{BinaryHeap, HashSet};
use std::cmp::Reverse;

use pcst_core::Graph;
use rand::seq::index::sample;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::stp::StpComment;

pub const PRNG_NAME: &str = "ChaCha8Rng (rand_chacha 0.3, rand 0.8)";

#[derive(Clone, Debug, PartialEq)]
pub struct GeneratorParams {
    pub vertex_count: usize,
    pub edge_count: usize,
    /// Share of vertices that get a prize, in `(0, 1]`.
    pub prized_fraction: f64,
    pub prize_range: (f64, f64),
    pub cost_range: (f64, f64),
    pub seed: u64,
}

impl GeneratorParams {
    /// `n` vertices, `m` edges, every vertex prized, prizes and costs in
    /// `[1, 100)`.
    pub fn new(vertex_count: usize, edge_count: usize, seed: u64) -> Self {
        GeneratorParams {
            vertex_count,
            edge_count,
            prized_fraction: 1.0,
            prize_range: (1.0, 100.0),
            cost_range: (1.0, 100.0),
            seed,
        }
    }

    pub fn validate(&self) -> Result<(), pcst_core::Error> {
        let n = self.vertex_count;
        let bad = |msg: String| Err(pcst_core::Error::Domain(msg));
        if n == 0 {
            return bad("vertex count must be positive".into());
        }
        if n > u32::MAX as usize {
            return bad(format!("vertex count {n} is too large"));
        }
        let max_edges = n as u128 * (n as u128 - 1) / 2;
        if self.edge_count < n - 1 || self.edge_count as u128 > max_edges {
            return bad(format!("edge count must lie in {}..={max_edges} for {n} vertices", n - 1));
        }
        if !(self.prized_fraction > 0.0 && self.prized_fraction <= 1.0) {
            return bad(format!("prized fraction {} is not in (0, 1]", self.prized_fraction));
        }
        let (plo, phi) = self.prize_range;
        if !(plo >= 0.0 && phi > plo && phi.is_finite()) {
            return bad(format!("prize range {plo}:{phi} needs 0 <= low < high"));
        }
        let (clo, chi) = self.cost_range;
        if !(clo > 0.0 && chi > clo && chi.is_finite()) {
            return bad(format!("cost range {clo}:{chi} needs 0 < low < high"));
        }
        Ok(())
    }

    /// Self-description for the instance file.
    pub fn comment(&self) -> StpComment {
        StpComment {
            name: Some(format!("random-n{}-m{}-s{}", self.vertex_count, self.edge_count, self.seed)),
            remarks: vec![
                "spanning tree from a random Pruefer sequence plus distinct random extra edges".into(),
                format!("prng {PRNG_NAME} seed {}", self.seed),
                format!(
                    "prized fraction {} prizes uniform in [{}, {}) costs uniform in [{}, {})",
                    self.prized_fraction, self.prize_range.0, self.prize_range.1, self.cost_range.0, self.cost_range.1
                ),
            ],
        }
    }
}

/// Tree edges encoded by a Prüfer sequence over `n >= 2` vertices.
fn pruefer_tree(n: usize, seq: &[u32]) -> Vec<(u32, u32)> {
    let mut degree = vec![1u32; n];
    for &x in seq {
        degree[x as usize] += 1;
    }
    let mut leaves: BinaryHeap<Reverse<u32>> = (0..n as u32).filter(|&v| degree[v as usize] == 1).map(Reverse).collect();
    let mut edges = Vec::with_capacity(n - 1);
    for &x in seq {
        let Reverse(leaf) = leaves.pop().expect("a Pruefer sequence always leaves a leaf");
        edges.push((leaf, x));
        degree[x as usize] -= 1;
        if degree[x as usize] == 1 {
            leaves.push(Reverse(x));
        }
    }
    let Reverse(a) = leaves.pop().expect("two leaves remain");
    let Reverse(b) = leaves.pop().expect("two leaves remain");
    edges.push((a, b));
    edges
}

fn key(u: u32, v: u32) -> u64 {
    let (a, b) = if u < v { (u, v) } else { (v, u) };
    (a as u64) << 32 | b as u64
}

pub fn generate_instance(p: &GeneratorParams) -> Result<Graph, pcst_core::Error> {
    p.validate()?;
    let n = p.vertex_count;
    let mut rng: ChaCha8Rng = rand::SeedableRng::seed_from_u64(p.seed);

    let mut pairs: Vec<(u32, u32)> = if n >= 2 {
        let seq: Vec<u32> = (0..n.saturating_sub(2)).map(|_| rng.gen_range(0..n as u32)).collect();
        pruefer_tree(n, &seq)
    } else {
        Vec::new()
    };
    let extra = p.edge_count - pairs.len();
    let max_edges = n * (n - 1) / 2;
    if extra > 0 && 2 * p.edge_count > max_edges {
        // Dense request: pick from the list of all non-tree pairs.
        let tree: HashSet<u64> = pairs.iter().map(|&(u, v)| key(u, v)).collect();
        let mut rest = Vec::with_capacity(max_edges - pairs.len());
        for u in 0..n as u32 {
            for v in u + 1..n as u32 {
                if !tree.contains(&key(u, v)) {
                    rest.push((u, v));
                }
            }
        }
        for k in sample(&mut rng, rest.len(), extra).into_iter() {
            pairs.push(rest[k]);
        }
    } else if extra > 0 {
        let mut used: HashSet<u64> = HashSet::with_capacity(p.edge_count);
        used.extend(pairs.iter().map(|&(u, v)| key(u, v)));
        while pairs.len() < p.edge_count {
            let u = rng.gen_range(0..n as u32);
            let v = rng.gen_range(0..n as u32);
            if u != v && used.insert(key(u, v)) {
                pairs.push((u, v));
            }
        }
    }

    let (clo, chi) = p.cost_range;
    let edges: Vec<(usize, usize, f64)> =
        pairs.into_iter().map(|(u, v)| (u as usize, v as usize, rng.gen_range(clo..chi))).collect();

    let prized = ((p.prized_fraction * n as f64).ceil() as usize).min(n);
    let (plo, phi) = p.prize_range;
    let mut prizes = vec![0.0; n];
    let mut chosen: Vec<usize> = sample(&mut rng, n, prized).into_vec();
    chosen.sort_unstable();
    for v in chosen {
        prizes[v] = rng.gen_range(plo..phi);
    }
    Graph::new(prizes, edges, [])
}
