//! One solver run: a base heuristic, optional post-processing, and the
//! report describing it.

use std::time::Instant;

use pcst_core::fgw::{fgw_growth_with_stats, fgw_prime_with_stats, FgwConfig};
use pcst_core::pipeline::{mstg, p3, P3Config};
use pcst_core::prune::gpra_solution;
use pcst_core::verify::gw_lower_bound;
use pcst_core::{net_cost, Graph, SolutionTree};
use serde::{Deserialize, Serialize};

use crate::stp::format_sig9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, clap::ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Algorithm {
    /// Minimum spanning tree pruned by GPrA.
    Mstg,
    /// FGW′: growth then GPrA. Reports the GW lower bound.
    Fgw,
    /// Growth only, without the GPrA step.
    FgwRaw,
}

impl Algorithm {
    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Mstg => "mstg",
            Algorithm::Fgw => "fgw",
            Algorithm::FgwRaw => "fgw-raw",
        }
    }

    pub fn parse(name: &str) -> Option<Self> {
        [Algorithm::Mstg, Algorithm::Fgw, Algorithm::FgwRaw].into_iter().find(|a| a.name() == name)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PostMode {
    None,
    Gpra,
    P3,
}

impl PostMode {
    pub fn name(self) -> &'static str {
        match self {
            PostMode::None => "none",
            PostMode::Gpra => "gpra",
            PostMode::P3 => "p3",
        }
    }
}

/// Default path length bound for tree growing: 1 on graphs above 10^5
/// vertices, 2 otherwise.
pub fn default_path_bound(g: &Graph) -> usize {
    if g.vertex_count() > 100_000 {
        1
    } else {
        2
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SolveOptions {
    pub algorithm: Algorithm,
    pub s: f64,
    pub mu: Option<f64>,
    pub post: PostMode,
    /// `None` picks [`default_path_bound`].
    pub n: Option<usize>,
}

impl SolveOptions {
    pub fn new(algorithm: Algorithm) -> Self {
        SolveOptions { algorithm, s: 2.0, mu: None, post: PostMode::P3, n: None }
    }
}

#[derive(Clone, Debug)]
pub struct Solved {
    pub tree: SolutionTree,
    pub net_cost: f64,
    pub lower_bound: Option<f64>,
    pub events: Option<u64>,
    pub wall_time_ms: f64,
}

pub fn solve(g: &Graph, opts: &SolveOptions) -> pcst_core::Result<Solved> {
    let n = opts.n.unwrap_or_else(|| default_path_bound(g));
    let fgw = FgwConfig { s: opts.s, mu: opts.mu, ..FgwConfig::default() };
    let start = Instant::now();
    let (base, lower_bound, events) = match opts.algorithm {
        Algorithm::Mstg => (mstg(g)?, None, None),
        Algorithm::Fgw => {
            let (t, stats) = fgw_prime_with_stats(g, &fgw)?;
            let lb = gw_lower_bound(g, &t);
            (t, Some(lb), Some(stats.events()))
        }
        Algorithm::FgwRaw => {
            let (t, stats) = fgw_growth_with_stats(g, &fgw)?;
            (t, None, Some(stats.events()))
        }
    };
    let tree = match opts.post {
        PostMode::None => base,
        PostMode::Gpra => gpra_solution(g, &base)?,
        PostMode::P3 => p3(g, &base, &P3Config::for_graph(g, n))?,
    };
    let wall_time_ms = start.elapsed().as_secs_f64() * 1e3;
    Ok(Solved { net_cost: net_cost(g, &tree)?, tree, lower_bound, events, wall_time_ms })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolveParams {
    pub s: Option<f64>,
    pub mu: Option<f64>,
    pub n: Option<usize>,
    pub post: PostMode,
    pub seed: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolveReport {
    pub instance_id: String,
    pub algorithm: Algorithm,
    pub params: SolveParams,
    pub net_cost: f64,
    pub lower_bound: Option<f64>,
    pub wall_time_ms: f64,
    pub peak_event_count: Option<u64>,
    pub vertices_in_tree: usize,
    pub edges_in_tree: usize,
}

impl SolveReport {
    pub fn new(instance_id: &str, g: &Graph, opts: &SolveOptions, solved: &Solved) -> Self {
        let uses_fgw = opts.algorithm != Algorithm::Mstg;
        let mu = FgwConfig { mu: opts.mu, ..FgwConfig::default() }.resolved_mu(g);
        SolveReport {
            instance_id: instance_id.to_string(),
            algorithm: opts.algorithm,
            params: SolveParams {
                s: uses_fgw.then_some(opts.s),
                mu: uses_fgw.then_some(mu),
                n: (opts.post == PostMode::P3).then(|| opts.n.unwrap_or_else(|| default_path_bound(g))),
                post: opts.post,
                seed: None,
            },
            net_cost: solved.net_cost,
            lower_bound: solved.lower_bound,
            wall_time_ms: solved.wall_time_ms,
            peak_event_count: solved.events,
            vertices_in_tree: solved.tree.vertices().len(),
            edges_in_tree: solved.tree.edges().len(),
        }
    }

    /// `net_cost / lower_bound` when the bound is positive.
    pub fn ratio_bound(&self) -> Option<f64> {
        self.lower_bound.filter(|&lb| lb > 0.0).map(|lb| self.net_cost / lb)
    }

    /// One `key=value` line; costs use the solution file's 9 digits.
    pub fn text_line(&self) -> String {
        let opt = |x: Option<f64>| x.map_or_else(|| "NA".to_string(), format_sig9);
        format!(
            "instance={} algo={} post={} net_cost={} lower_bound={} ratio={} time_ms={:.3} events={} vertices={} edges={}",
            self.instance_id,
            self.algorithm.name(),
            self.params.post.name(),
            format_sig9(self.net_cost),
            opt(self.lower_bound),
            opt(self.ratio_bound()),
            self.wall_time_ms,
            self.peak_event_count.map_or_else(|| "NA".to_string(), |e| e.to_string()),
            self.vertices_in_tree,
            self.edges_in_tree,
        )
    }
}
