//! Timing runs over instance files. Reading the files is not timed; each
//! (instance, algorithm) cell is solved `repeat` times in a row and the mean
//! is reported. Instances are spread over `jobs` worker threads.

use std::path::PathBuf;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use serde::Serialize;

use crate::cli::{instance_id, read_instance, Failure};
use crate::solve::{default_path_bound, solve, Algorithm, PostMode, SolveOptions};
use crate::stp::format_sig9;

#[derive(Clone, Debug, PartialEq)]
pub struct BenchOptions {
    pub algorithms: Vec<Algorithm>,
    pub repeat: usize,
    pub jobs: usize,
    pub post: PostMode,
    pub n: Option<usize>,
    pub s: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BenchRow {
    pub instance_id: String,
    pub algorithm: Algorithm,
    pub post: PostMode,
    pub n: Option<usize>,
    pub repeat: usize,
    pub mean_ms: f64,
    pub min_ms: f64,
    pub net_cost: f64,
    pub lower_bound: Option<f64>,
    pub ratio_bound: Option<f64>,
    pub events: Option<u64>,
    pub vertices_in_tree: usize,
    pub edges_in_tree: usize,
    /// Peak resident set of the whole process after this cell, in MiB.
    pub peak_rss_mib: Option<f64>,
}

pub const CSV_HEADER: &str =
    "instance,algorithm,post,n,repeat,mean_ms,min_ms,net_cost,lower_bound,ratio_bound,events,vertices,edges,peak_rss_mib";

fn opt<T: ToString>(x: Option<T>) -> String {
    x.map_or_else(|| "NA".to_string(), |v| v.to_string())
}

impl BenchRow {
    pub fn csv_line(&self) -> String {
        format!(
            "{},{},{},{},{},{:.3},{:.3},{},{},{},{},{},{},{}",
            self.instance_id,
            self.algorithm.name(),
            self.post.name(),
            opt(self.n),
            self.repeat,
            self.mean_ms,
            self.min_ms,
            format_sig9(self.net_cost),
            opt(self.lower_bound.map(format_sig9)),
            opt(self.ratio_bound.map(format_sig9)),
            opt(self.events),
            self.vertices_in_tree,
            self.edges_in_tree,
            opt(self.peak_rss_mib.map(|m| format!("{m:.1}"))),
        )
    }

    pub fn text_line(&self) -> String {
        format!(
            "{:<24} {:<8} post={:<4} mean_ms={:>10.3} net_cost={:<14} lower_bound={:<14} ratio={:<11} peak_rss_mib={}",
            self.instance_id,
            self.algorithm.name(),
            self.post.name(),
            self.mean_ms,
            format_sig9(self.net_cost),
            opt(self.lower_bound.map(format_sig9)),
            opt(self.ratio_bound.map(format_sig9)),
            opt(self.peak_rss_mib.map(|m| format!("{m:.1}"))),
        )
    }
}

/// Peak resident set size of this process (`VmHWM`), where the platform
/// exposes it.
pub fn peak_rss_bytes() -> Option<u64> {
    let status = std::fs::read_to_string("/proc/self/status").ok()?;
    let line = status.lines().find(|l| l.starts_with("VmHWM:"))?;
    let kib: u64 = line.split_whitespace().nth(1)?.parse().ok()?;
    Some(kib * 1024)
}

fn bench_instance(path: &PathBuf, opts: &BenchOptions) -> Result<Vec<BenchRow>, Failure> {
    let g = read_instance(path)?;
    let id = instance_id(path);
    let mut rows = Vec::with_capacity(opts.algorithms.len());
    for &algorithm in &opts.algorithms {
        let solve_opts = SolveOptions { algorithm, s: opts.s, mu: None, post: opts.post, n: opts.n };
        let mut times = Vec::with_capacity(opts.repeat);
        let mut last = None;
        for _ in 0..opts.repeat {
            let solved = solve(&g, &solve_opts).map_err(|e| Failure(format!("{}: {e}", path.display())))?;
            times.push(solved.wall_time_ms);
            last = Some(solved);
        }
        let solved = last.expect("repeat is at least 1");
        let lower_bound = solved.lower_bound;
        rows.push(BenchRow {
            instance_id: id.clone(),
            algorithm,
            post: opts.post,
            n: (opts.post == PostMode::P3).then(|| opts.n.unwrap_or_else(|| default_path_bound(&g))),
            repeat: opts.repeat,
            mean_ms: times.iter().sum::<f64>() / times.len() as f64,
            min_ms: times.iter().copied().fold(f64::INFINITY, f64::min),
            net_cost: solved.net_cost,
            lower_bound,
            ratio_bound: lower_bound.filter(|&lb| lb > 0.0).map(|lb| solved.net_cost / lb),
            events: solved.events,
            vertices_in_tree: solved.tree.vertices().len(),
            edges_in_tree: solved.tree.edges().len(),
            peak_rss_mib: peak_rss_bytes().map(|b| b as f64 / (1024.0 * 1024.0)),
        });
    }
    Ok(rows)
}

/// Rows in instance order, then algorithm order, whatever the job count.
pub(crate) fn run_bench(paths: &[PathBuf], opts: &BenchOptions) -> Result<Vec<BenchRow>, Failure> {
    let next = AtomicUsize::new(0);
    let results: Mutex<Vec<Option<Result<Vec<BenchRow>, Failure>>>> =
        Mutex::new((0..paths.len()).map(|_| None).collect());
    std::thread::scope(|scope| {
        for _ in 0..opts.jobs.clamp(1, paths.len()) {
            scope.spawn(|| loop {
                let k = next.fetch_add(1, Ordering::Relaxed);
                let Some(path) = paths.get(k) else { break };
                let rows = bench_instance(path, opts);
                results.lock().expect("no worker panicked")[k] = Some(rows);
            });
        }
    });
    let mut rows = Vec::new();
    for r in results.into_inner().expect("no worker panicked") {
        rows.extend(r.expect("every instance was processed")?);
    }
    Ok(rows)
}
