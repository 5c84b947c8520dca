//! Acceptance checks, one line per criterion.
//!
//! Failing criteria are reported as FAIL but do not fail `cargo test` unless
//! `PCST_ACCEPTANCE_STRICT=1` is set. The large-instance timing check can be
//! skipped with `PCST_ACCEPTANCE_SKIP_SCALE=1`. Set `PCST_HAND_DIR` to a
//! directory of `.stp` files plus a `best_known.txt` (`<stem> <value>` per
//! line) to run the optional comparison against published values.

use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::Instant;

use pcst::bench::peak_rss_bytes;
use pcst::generate::{generate_instance, GeneratorParams};
use pcst::stp::{format_sig9, graph_to_string, parse_solution_str, parse_stp_str, solution_to_string};
use pcst_core::fgw::{fgw_growth, fgw_prime, FgwConfig};
use pcst_core::pipeline::{mstg, p3, P3Config};
use pcst_core::prune::{gpra, strong_prune, TreeInstance};
use pcst_core::verify::{exact_nwstpt, exact_pcst, gw_lower_bound};
use pcst_core::{minimum_spanning_tree, minimum_spanning_tree_on, net_cost, Graph, SolutionTree};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn random_tree_pairs(r: &mut impl Rng, n: usize) -> Vec<(usize, usize)> {
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(r);
    (1..n).map(|k| (order[r.gen_range(0..k)], order[k])).collect()
}

fn pick(r: &mut impl Rng, n: usize, k: usize) -> Vec<usize> {
    let mut all: Vec<usize> = (0..n).collect();
    all.shuffle(r);
    all.truncate(k.min(n));
    all
}

/// Trees with up to 14 vertices, weights in [-10, 20), costs in [0.1, 10).
fn tree_suite(count: usize, seed: u64, with_terminals: bool) -> Vec<TreeInstance> {
    let mut r = rng(seed);
    (0..count)
        .map(|_| {
            let n = r.gen_range(1..=14);
            let weights = (0..n).map(|_| r.gen_range(-10.0..20.0)).collect();
            let edges = random_tree_pairs(&mut r, n).into_iter().map(|(a, b)| (a, b, r.gen_range(0.1..10.0))).collect();
            let k = if with_terminals { r.gen_range(0..=3) } else { 0 };
            let c = pick(&mut r, n, k);
            TreeInstance::new(weights, edges, c).unwrap()
        })
        .collect()
}

struct GraphShape {
    max_vertices: usize,
    max_edges: usize,
    max_compulsory: usize,
    distinct_costs: bool,
}

fn random_graph(r: &mut impl Rng, shape: &GraphShape) -> Graph {
    let n = r.gen_range(1..=shape.max_vertices);
    let mut pairs: Vec<(usize, usize)> =
        random_tree_pairs(r, n).into_iter().map(|(a, b)| (a.min(b), a.max(b))).collect();
    let cap = shape.max_edges.min(n * (n - 1) / 2).max(pairs.len());
    let m = r.gen_range(pairs.len()..=cap);
    while pairs.len() < m {
        let (a, b) = (r.gen_range(0..n), r.gen_range(0..n));
        if a != b && !pairs.contains(&(a.min(b), a.max(b))) {
            pairs.push((a.min(b), a.max(b)));
        }
    }
    let prizes = (0..n).map(|_| if r.gen_bool(0.2) { 0.0 } else { r.gen_range(0.0..20.0) }).collect();
    let mut costs: Vec<f64> = pairs.iter().map(|_| r.gen_range(1.0..15.0)).collect();
    if shape.distinct_costs {
        costs = (0..pairs.len()).map(|k| 1.0 + k as f64 * 0.37 + r.gen_range(0.0..0.3)).collect();
        costs.shuffle(r);
    }
    let k = r.gen_range(0..=shape.max_compulsory);
    let c = pick(r, n, k);
    Graph::new(prizes, pairs.iter().zip(costs).map(|(&(u, v), c)| (u, v, c)), c).unwrap()
}

/// `c(T) + 2 w(outside T)`, the left side of the strong guarantee.
fn doubled(g: &Graph, t: &SolutionTree) -> f64 {
    2.0 * gw_lower_bound(g, t)
}

fn gpra_optimality() -> Outcome {
    let suite = tree_suite(1000, 101, true);
    let mut worst: f64 = 0.0;
    let mut missing = 0;
    for t in &suite {
        let p = gpra(t);
        if t.compulsory().iter().any(|&c| !p.contains(c)) {
            missing += 1;
        }
        worst = worst.max((t.net_weight(&p).unwrap() - exact_nwstpt(t).unwrap()).abs());
    }
    outcome(worst <= 1e-9 && missing == 0, format!("1000 trees, max |gap| {worst:.2e}, missing terminals {missing}"))
}

fn gpra_dominance() -> Outcome {
    let suite = tree_suite(1000, 101, false);
    let (mut below, mut never_equal) = (0, 0);
    for t in &suite {
        let best = t.net_weight(&gpra(t)).unwrap();
        let rooted: Vec<f64> =
            (0..t.vertex_count()).map(|r| t.net_weight(&strong_prune(t, r).unwrap()).unwrap()).collect();
        below += rooted.iter().filter(|&&w| best < w - 1e-9).count();
        if !rooted.iter().any(|&w| (best - w).abs() <= 1e-9) {
            never_equal += 1;
        }
    }
    outcome(
        below == 0 && never_equal == 0,
        format!("1000 trees, roots beating GPrA {below}, trees with no matching root {never_equal}"),
    )
}

fn strong_guarantee() -> Outcome {
    let mut r = rng(303);
    let shape = GraphShape { max_vertices: 12, max_edges: 20, max_compulsory: 2, distinct_costs: false };
    let (mut violations, mut raw_violations, mut bound_above_opt) = (0, 0, 0);
    let mut worst_excess: f64 = 0.0;
    for k in 0..500 {
        let g = random_graph(&mut r, &shape);
        let s = [1.5, 2.0, 3.0][k % 3];
        let cfg = FgwConfig::with_s(s);
        let t = fgw_prime(&g, &cfg).unwrap();
        let opt = net_cost(&g, &exact_pcst(&g).unwrap()).unwrap();
        let excess = doubled(&g, &t) - 2.0 * opt;
        if excess > 1e-9 {
            violations += 1;
            worst_excess = worst_excess.max(excess);
        }
        if gw_lower_bound(&g, &t) > opt + 1e-9 {
            bound_above_opt += 1;
        }
        if doubled(&g, &fgw_growth(&g, &cfg).unwrap()) - 2.0 * opt > 1e-9 {
            raw_violations += 1;
        }
    }
    outcome(
        violations == 0,
        format!(
            "500 graphs, violations {violations} (worst excess {worst_excess:.4}), lower bound above optimum \
             {bound_above_opt}; unpruned growth trees violating {raw_violations}"
        ),
    )
}

fn micro_instances() -> Outcome {
    let rooted = Graph::new(vec![3.0, 20.0, 20.0], [(0, 1, 6.0), (0, 2, 10.0), (1, 2, 11.0)], [1]).unwrap();
    let unrooted_triangle = Graph::new(vec![2.0, 9.0, 7.0], [(0, 1, 5.0), (0, 2, 5.0), (1, 2, 6.0)], []).unwrap();
    let mut notes = Vec::new();
    let mut pass = true;
    let mut check = |ok: bool, note: String| {
        pass &= ok;
        notes.push(format!("{}{note}", if ok { "" } else { "NOT " }));
    };

    let opt = exact_pcst(&rooted).unwrap();
    let jk = rooted.find_edge(1, 2).unwrap();
    check(opt == SolutionTree::new(vec![1, 2], vec![jk]) && net_cost(&rooted, &opt).unwrap() == 14.0, "rooted optimum {(j,k)} = 14".into());
    let m = net_cost(&rooted, &mstg(&rooted).unwrap()).unwrap();
    check(m == 16.0, format!("MSTG = {m}"));

    let opt4 = net_cost(&unrooted_triangle, &exact_pcst(&unrooted_triangle).unwrap()).unwrap();
    check(opt4 == 8.0, format!("unrooted triangle optimum = {opt4}"));
    let t = fgw_prime(&unrooted_triangle, &FgwConfig::default()).unwrap();
    let c = net_cost(&unrooted_triangle, &t).unwrap();
    check(c == 8.0 || c == 9.0, format!("FGW' = {c} in {{8, 9}}"));
    let lhs = doubled(&unrooted_triangle, &t);
    check(lhs <= 2.0 * opt4 + 1e-9, format!("FGW' certified: c(T) + 2w = {lhs} <= {}", 2.0 * opt4));
    outcome(pass, notes.join("; "))
}

fn p3_fixed_point() -> Outcome {
    let mut r = rng(505);
    let shape = GraphShape { max_vertices: 30, max_edges: 70, max_compulsory: 2, distinct_costs: false };
    let (mut increases, mut unsettled) = (0, 0);
    for k in 0..1000 {
        let g = random_graph(&mut r, &shape);
        let start = match k % 3 {
            0 => mstg(&g).unwrap(),
            1 => fgw_prime(&g, &FgwConfig::default()).unwrap(),
            _ => fgw_growth(&g, &FgwConfig::default()).unwrap(),
        };
        let cfg = P3Config::for_graph(&g, 1 + k % 3);
        let once = p3(&g, &start, &cfg).unwrap();
        let c0 = net_cost(&g, &start).unwrap();
        let c1 = net_cost(&g, &once).unwrap();
        if c1 > c0 {
            increases += 1;
        }
        let c2 = net_cost(&g, &p3(&g, &once, &cfg).unwrap()).unwrap();
        if (c1 - c2).abs() > cfg.epsilon_improve {
            unsettled += 1;
        }
    }
    outcome(increases == 0 && unsettled == 0, format!("1000 instances, increases {increases}, second pass changes {unsettled}"))
}

fn random_subtree(r: &mut impl Rng, g: &Graph, t: &SolutionTree) -> SolutionTree {
    let mut verts = vec![t.vertices()[r.gen_range(0..t.vertices().len())]];
    let mut edges = Vec::new();
    let target = r.gen_range(1..=t.vertices().len());
    let mut pool = t.edges().to_vec();
    while verts.len() < target {
        let touching: Vec<usize> = (0..pool.len())
            .filter(|&k| {
                let e = g.edge(pool[k]);
                verts.contains(&e.u()) != verts.contains(&e.v())
            })
            .collect();
        let Some(&k) = touching.choose(r) else { break };
        let e = pool.swap_remove(k);
        let (u, v) = (g.edge(e).u(), g.edge(e).v());
        verts.push(if verts.contains(&u) { v } else { u });
        edges.push(e);
    }
    SolutionTree::new(verts, edges)
}

fn mst_subtrees() -> Outcome {
    let mut r = rng(606);
    let shape = GraphShape { max_vertices: 10, max_edges: 30, max_compulsory: 0, distinct_costs: true };
    let mut mismatches = 0;
    let mut checked = 0;
    for _ in 0..500 {
        let g = random_graph(&mut r, &shape);
        let mst = minimum_spanning_tree(&g).unwrap();
        for _ in 0..5 {
            let sub = random_subtree(&mut r, &g, &mst);
            checked += 1;
            if minimum_spanning_tree_on(&g, sub.vertices()).unwrap() != sub {
                mismatches += 1;
            }
        }
    }
    outcome(mismatches == 0, format!("500 graphs, {checked} subtrees, mismatched edge sets {mismatches}"))
}

fn scale() -> Outcome {
    if std::env::var("PCST_ACCEPTANCE_SKIP_SCALE").is_ok_and(|v| v == "1") {
        return outcome(false, "skipped by PCST_ACCEPTANCE_SKIP_SCALE");
    }
    // Best of `runs` timings, generation excluded.
    let time_mstg = |n: usize, m: usize, runs: usize| {
        let g = generate_instance(&GeneratorParams::new(n, m, 7)).unwrap();
        let best = (0..runs)
            .map(|_| {
                let start = Instant::now();
                mstg(&g).unwrap();
                start.elapsed().as_secs_f64()
            })
            .fold(f64::INFINITY, f64::min);
        (best, g)
    };
    let (t5, _) = time_mstg(10_000, 100_000, 3);
    let (t6, _) = time_mstg(100_000, 1_000_000, 3);
    let ratio = t6 / t5;

    let (t_mstg, g) = time_mstg(1_000_000, 10_000_000, 1);
    let start = Instant::now();
    let fgw = fgw_prime(&g, &FgwConfig::default()).unwrap();
    let t_fgw = start.elapsed().as_secs_f64();
    drop(fgw);
    drop(g);
    let peak_gib = peak_rss_bytes().map(|b| b as f64 / (1u64 << 30) as f64);
    let mem_ok = peak_gib.is_some_and(|p| p < 8.0);
    outcome(
        t_mstg < 60.0 && t_fgw < 180.0 && mem_ok && ratio <= 15.0,
        format!(
            "|V| = 10^6, |E| = 10^7: MSTG {t_mstg:.1} s, FGW' {t_fgw:.1} s, peak RSS {}; MSTG time ratio 10^6/10^5 edges {ratio:.1}",
            peak_gib.map_or("unavailable".into(), |p| format!("{p:.2} GiB"))
        ),
    )
}

fn scratch_dir() -> PathBuf {
    let dir = Path::new(env!("CARGO_TARGET_TMPDIR")).join("acceptance");
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

/// Solver reports carry a wall-clock time; it is replaced before comparing.
fn mask_timing(text: &str) -> String {
    let mut out = String::new();
    for line in text.lines() {
        if let Ok(mut json) = serde_json::from_str::<serde_json::Value>(line) {
            if let Some(obj) = json.as_object_mut() {
                obj.insert("wall_time_ms".into(), serde_json::Value::Null);
            }
            out.push_str(&json.to_string());
        } else {
            let masked: Vec<&str> =
                line.split(' ').map(|w| if w.starts_with("time_ms=") { "time_ms=*" } else { w }).collect();
            out.push_str(&masked.join(" "));
        }
        out.push('\n');
    }
    out
}

fn determinism() -> Outcome {
    let dir = scratch_dir();
    let tri = dir.join("tri.stp");
    let rooted = Graph::new(vec![3.0, 20.0, 20.0], [(0, 1, 6.0), (0, 2, 10.0), (1, 2, 11.0)], [1]).unwrap();
    std::fs::write(&tri, graph_to_string(&rooted, None)).unwrap();
    let small = dir.join("g.stp");
    let g = generate_instance(&GeneratorParams::new(12, 20, 99)).unwrap();
    std::fs::write(&small, graph_to_string(&g, None)).unwrap();
    let oracle = dir.join("g.exact.sol");
    std::fs::write(&oracle, solution_to_string(&g, &exact_pcst(&g).unwrap(), "exact", None).unwrap()).unwrap();

    let p = |x: &Path| x.to_str().unwrap().to_string();
    let runs: Vec<(Vec<String>, Option<PathBuf>)> = vec![
        (
            vec!["solve", "--algo", "mstg", "-i", &p(&tri), "-o", &p(&dir.join("tri.sol"))].into_iter().map(String::from).collect(),
            Some(dir.join("tri.sol")),
        ),
        (
            vec!["solve", "--algo", "fgw", "--post", "p3", "--n", "2", "-i", &p(&tri), "-o", &p(&dir.join("tri.fgw.sol"))]
                .into_iter()
                .map(String::from)
                .collect(),
            Some(dir.join("tri.fgw.sol")),
        ),
        (
            vec!["solve", "--algo", "fgw", "--report", "json", "-i", &p(&small)].into_iter().map(String::from).collect(),
            None,
        ),
        (vec!["verify", "-i", &p(&small), "-t", &p(&oracle), "--exact"].into_iter().map(String::from).collect(), None),
        (
            vec!["generate", "--nodes", "50", "--edges", "120", "--seed", "3", "-o", &p(&dir.join("gen.stp"))]
                .into_iter()
                .map(String::from)
                .collect(),
            Some(dir.join("gen.stp")),
        ),
    ];
    let mut differing = Vec::new();
    let mut gap_zero = false;
    for (args, file) in &runs {
        let mut seen = Vec::new();
        for _ in 0..2 {
            let out = Command::new(env!("CARGO_BIN_EXE_pcst")).args(args).output().unwrap();
            let stdout = String::from_utf8(out.stdout).unwrap();
            if args[0] == "verify" && stdout.contains("gap=0\n") {
                gap_zero = true;
            }
            let body = file.as_ref().map(|f| std::fs::read(f).unwrap()).unwrap_or_default();
            seen.push((out.status.code(), mask_timing(&stdout), body));
        }
        if seen[0] != seen[1] {
            differing.push(args[0].clone());
        }
    }
    outcome(
        differing.is_empty() && gap_zero,
        format!(
            "{} commands run twice, differing {:?}, oracle gap 0 printed {gap_zero} (reported wall times masked)",
            runs.len(),
            differing
        ),
    )
}

fn round_trip() -> Outcome {
    let mut r = rng(909);
    let (mut graph_mismatch, mut netcost_mismatch) = (0, 0);
    for k in 0..200 {
        let n = r.gen_range(1..200);
        let m = (n - 1 + r.gen_range(0..3 * n)).min(n * (n - 1) / 2);
        let mut params = GeneratorParams::new(n, m, k);
        params.prized_fraction = r.gen_range(0.01..=1.0);
        let g = generate_instance(&params).unwrap();
        let text = graph_to_string(&g, Some(&params.comment()));
        let back = parse_stp_str(&text).unwrap();
        if back != g {
            graph_mismatch += 1;
        }
        let t = fgw_prime(&back, &FgwConfig::default()).unwrap();
        let sol = solution_to_string(&back, &t, "fgw", Some(gw_lower_bound(&back, &t))).unwrap();
        let parsed = parse_solution_str(&back, &sol).unwrap();
        if parsed.net_cost_text != format_sig9(net_cost(&back, &parsed.tree).unwrap()) || parsed.tree != t {
            netcost_mismatch += 1;
        }
    }
    outcome(
        graph_mismatch == 0 && netcost_mismatch == 0,
        format!("200 instances, graph mismatches {graph_mismatch}, NETCOST mismatches {netcost_mismatch}"),
    )
}

fn hand_suite() -> Option<Outcome> {
    let dir = PathBuf::from(std::env::var_os("PCST_HAND_DIR")?);
    let table = std::fs::read_to_string(dir.join("best_known.txt")).ok()?;
    let mut worse = Vec::new();
    let mut checked = 0;
    for line in table.lines().filter(|l| !l.trim().is_empty()) {
        let mut parts = line.split_whitespace();
        let (Some(name), Some(best)) = (parts.next(), parts.next().and_then(|b| b.parse::<f64>().ok())) else {
            continue;
        };
        let Ok(text) = std::fs::read_to_string(dir.join(format!("{name}.stp"))) else { continue };
        let g = match parse_stp_str(&text) {
            Ok(g) => g,
            Err(e) => return Some(outcome(false, format!("{name}: {e}"))),
        };
        let c = net_cost(&g, &fgw_prime(&g, &FgwConfig::default()).unwrap()).unwrap();
        checked += 1;
        if c > 1.05 * best {
            worse.push(format!("{name} {c} vs {best}"));
        }
    }
    Some(outcome(checked > 0 && worse.is_empty(), format!("{checked} instances, above 1.05x best known: {worse:?}")))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("GPrA optimality", gpra_optimality),
        ("GPrA dominance over rooted pruning", gpra_dominance),
        ("FGW' strong guarantee", strong_guarantee),
        ("worked micro-instances", micro_instances),
        ("P3 monotonicity and fixed point", p3_fixed_point),
        ("subtrees of an MST are MSTs", mst_subtrees),
        ("scale and performance", scale),
        ("CLI determinism", determinism),
        ("I/O round trip", round_trip),
    ];
    let mut failed = 0;
    for (k, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let o = check();
        failed += !o.pass as usize;
        println!(
            "criterion {}: {} {name} [{:.1} s] {}",
            k + 1,
            if o.pass { "PASS" } else { "FAIL" },
            start.elapsed().as_secs_f64(),
            o.detail
        );
    }
    match hand_suite() {
        Some(o) => println!("optional: {} benchmark files {}", if o.pass { "PASS" } else { "FAIL" }, o.detail),
        None => println!("optional: SKIP benchmark files (PCST_HAND_DIR not set)"),
    }
    println!("acceptance: {} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed > 0 && std::env::var("PCST_ACCEPTANCE_STRICT").is_ok_and(|v| v == "1") {
        std::process::exit(1);
    }
}
