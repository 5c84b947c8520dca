#![allow(dead_code)]

use pcst_core::prune::TreeInstance;
use pcst_core::Graph;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    rand::SeedableRng::seed_from_u64(seed)
}

/// Random labelled tree as parent links: vertex `v > 0` hangs off a random
/// earlier vertex of a shuffled order.
pub fn random_tree_edges(rng: &mut impl Rng, n: usize) -> Vec<(usize, usize)> {
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    (1..n).map(|k| (order[rng.gen_range(0..k)], order[k])).collect()
}

pub struct GraphSpec {
    pub max_vertices: usize,
    pub max_edges: usize,
    pub max_compulsory: usize,
    pub integral: bool,
    pub distinct_costs: bool,
}

pub fn random_graph(rng: &mut impl Rng, spec: &GraphSpec) -> Graph {
    let n = rng.gen_range(1..=spec.max_vertices);
    let mut pairs: Vec<(usize, usize)> =
        random_tree_edges(rng, n).into_iter().map(|(a, b)| (a.min(b), a.max(b))).collect();
    let max_edges = spec.max_edges.min(n * (n - 1) / 2).max(pairs.len());
    let extra = rng.gen_range(pairs.len()..=max_edges);
    let mut attempts = 0;
    while pairs.len() < extra && attempts < 1000 {
        attempts += 1;
        let (a, b) = (rng.gen_range(0..n), rng.gen_range(0..n));
        let p = (a.min(b), a.max(b));
        if a != b && !pairs.contains(&p) {
            pairs.push(p);
        }
    }
    let mut value = |lo: f64, hi: f64| {
        if spec.integral {
            rng.gen_range(lo as i64..=hi as i64) as f64
        } else {
            rng.gen_range(lo..hi)
        }
    };
    let prizes: Vec<f64> = (0..n).map(|_| if value(0.0, 1.0) < 0.2 { 0.0 } else { value(0.0, 20.0) }).collect();
    let mut costs: Vec<f64> = pairs.iter().map(|_| value(1.0, 15.0)).collect();
    if spec.distinct_costs {
        for (k, c) in costs.iter_mut().enumerate() {
            *c += k as f64 * 1e-3;
        }
        costs.shuffle(rng);
    }
    let k = rng.gen_range(0..=spec.max_compulsory.min(n));
    let mut verts: Vec<usize> = (0..n).collect();
    verts.shuffle(rng);
    let compulsory = verts[..k].to_vec();
    let edges = pairs.iter().zip(&costs).map(|(&(u, v), &c)| (u, v, c));
    Graph::new(prizes, edges, compulsory).unwrap()
}

pub fn random_tree_instance(rng: &mut impl Rng, max_vertices: usize, max_compulsory: usize) -> TreeInstance {
    let n = rng.gen_range(1..=max_vertices);
    let weights: Vec<f64> = (0..n).map(|_| rng.gen_range(-10.0..20.0)).collect();
    let edges = random_tree_edges(rng, n).into_iter().map(|(a, b)| (a, b, rng.gen_range(0.5..10.0))).collect();
    let k = rng.gen_range(0..=max_compulsory.min(n));
    let mut verts: Vec<usize> = (0..n).collect();
    verts.shuffle(rng);
    TreeInstance::new(weights, edges, verts[..k].to_vec()).unwrap()
}
