//! The prize-collecting dialect of the DIMACS STP format, and solution files.
//!
//! Instance files use 1-based vertex ids:
//!
//! ```text
//! 33D32945 STP File, STP Format Version 1.0
//! SECTION Comment
//! Name "tri"
//! END
//! SECTION Graph
//! Nodes 3
//! Edges 2
//! E 1 2 6
//! E 2 3 11
//! END
//! SECTION Terminals
//! Terminals 2
//! TP 2 20
//! T 2
//! END
//! EOF
//! ```
//!
//! `TP v w` gives vertex `v` the prize `w` (default 0) and `T v` makes it a
//! compulsory terminal. Keywords are case-sensitive. Sections other than
//! `Comment`, `Graph` and `Terminals` are skipped.
//!
//! Numbers are written in Rust's shortest round-trip form, so writing and
//! reading an instance reproduces it bit for bit. Solution files carry the
//! net-cost and lower bound with 9 significant digits (see [`format_sig9`]).

use std::fmt::Write as _;
use std::io::{self, BufRead, Write};

use pcst_core::{net_cost, Graph, SolutionTree};

pub const STP_HEADER: &str = "33D32945 STP File, STP Format Version 1.0";

#[derive(Debug, thiserror::Error)]
pub enum StpError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error(transparent)]
    Graph(#[from] pcst_core::Error),
    #[error(transparent)]
    Io(#[from] io::Error),
}

fn parse_err(line: usize, message: impl Into<String>) -> StpError {
    StpError::Parse { line, message: message.into() }
}

/// Free text for the `Comment` section.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct StpComment {
    pub name: Option<String>,
    pub remarks: Vec<String>,
}

#[derive(Clone, Copy, PartialEq)]
enum Section {
    None,
    Graph,
    Terminals,
    Skipped,
}

struct Tokens<'a> {
    line: usize,
    words: std::str::SplitAsciiWhitespace<'a>,
}

impl<'a> Tokens<'a> {
    fn next_str(&mut self, what: &str) -> Result<&'a str, StpError> {
        self.words.next().ok_or_else(|| parse_err(self.line, format!("missing {what}")))
    }

    fn vertex(&mut self, n: usize) -> Result<usize, StpError> {
        let raw = self.next_str("vertex id")?;
        let id: usize = raw.parse().map_err(|_| parse_err(self.line, format!("bad vertex id {raw:?}")))?;
        if id == 0 || id > n {
            return Err(parse_err(self.line, format!("vertex id {id} outside 1..={n}")));
        }
        Ok(id - 1)
    }

    fn count(&mut self, what: &str) -> Result<usize, StpError> {
        let raw = self.next_str(what)?;
        raw.parse().map_err(|_| parse_err(self.line, format!("bad {what} {raw:?}")))
    }

    fn real(&mut self, what: &str) -> Result<f64, StpError> {
        let raw = self.next_str(what)?;
        raw.parse().map_err(|_| parse_err(self.line, format!("bad {what} {raw:?}")))
    }

    fn end(mut self) -> Result<(), StpError> {
        match self.words.next() {
            None => Ok(()),
            Some(extra) => Err(parse_err(self.line, format!("unexpected trailing token {extra:?}"))),
        }
    }
}

/// Reads an instance. Parse problems carry their 1-based line number; graph
/// validation (connectivity, costs, prizes) surfaces as [`StpError::Graph`].
pub fn parse_stp<R: BufRead>(reader: R) -> Result<Graph, StpError> {
    let mut section = Section::None;
    let mut seen_header = false;
    let mut seen_eof = false;
    let mut seen_graph = false;
    let mut nodes: Option<usize> = None;
    let mut declared_edges: Option<usize> = None;
    let mut declared_terminals: Option<usize> = None;
    let mut terminal_lines = 0;
    let mut edges: Vec<(usize, usize, f64)> = Vec::new();
    let mut prizes: Vec<Option<f64>> = Vec::new();
    let mut compulsory: Vec<usize> = Vec::new();

    let mut last_line = 0;
    for (idx, text) in reader.lines().enumerate() {
        let text = text?;
        let line = idx + 1;
        last_line = line;
        let text = text.trim();
        if text.is_empty() {
            continue;
        }
        if seen_eof {
            return Err(parse_err(line, "content after EOF"));
        }
        if !seen_header {
            if !text.starts_with("33D32945") {
                return Err(parse_err(line, "missing STP header"));
            }
            seen_header = true;
            continue;
        }
        let mut tokens = Tokens { line, words: text.split_ascii_whitespace() };
        let key = tokens.next_str("keyword")?;

        if section == Section::None {
            match key {
                "SECTION" => {
                    let name = tokens.next_str("section name")?;
                    section = match name {
                        "Graph" if seen_graph => return Err(parse_err(line, "second Graph section")),
                        "Graph" => {
                            seen_graph = true;
                            Section::Graph
                        }
                        "Terminals" => {
                            if !seen_graph {
                                return Err(parse_err(line, "Terminals section before Graph section"));
                            }
                            Section::Terminals
                        }
                        _ => Section::Skipped,
                    };
                }
                "EOF" => seen_eof = true,
                _ => return Err(parse_err(line, format!("expected SECTION or EOF, found {key:?}"))),
            }
            continue;
        }
        if key == "END" {
            match section {
                Section::Graph => {
                    let want = declared_edges.ok_or_else(|| parse_err(line, "Graph section without Edges"))?;
                    if nodes.is_none() {
                        return Err(parse_err(line, "Graph section without Nodes"));
                    }
                    if want != edges.len() {
                        return Err(parse_err(line, format!("Edges {want} declared but {} given", edges.len())));
                    }
                }
                Section::Terminals => {
                    if let Some(want) = declared_terminals {
                        if want != terminal_lines {
                            return Err(parse_err(
                                line,
                                format!("Terminals {want} declared but {terminal_lines} given"),
                            ));
                        }
                    }
                }
                _ => {}
            }
            section = Section::None;
            continue;
        }
        match section {
            Section::Skipped | Section::None => {}
            Section::Graph => match key {
                "Nodes" => {
                    let n = tokens.count("node count")?;
                    if n == 0 {
                        return Err(parse_err(line, "Nodes must be positive"));
                    }
                    nodes = Some(n);
                    prizes = vec![None; n];
                    tokens.end()?;
                }
                "Edges" => {
                    let m = tokens.count("edge count")?;
                    edges.reserve(m.min(1 << 24));
                    declared_edges = Some(m);
                    tokens.end()?;
                }
                "E" => {
                    let n = nodes.ok_or_else(|| parse_err(line, "E before Nodes"))?;
                    let u = tokens.vertex(n)?;
                    let v = tokens.vertex(n)?;
                    let c = tokens.real("edge cost")?;
                    tokens.end()?;
                    edges.push((u, v, c));
                }
                _ => return Err(parse_err(line, format!("unknown Graph keyword {key:?}"))),
            },
            Section::Terminals => {
                let n = nodes.unwrap_or(0);
                match key {
                    "Terminals" => {
                        declared_terminals = Some(tokens.count("terminal count")?);
                        tokens.end()?;
                    }
                    "TP" => {
                        let v = tokens.vertex(n)?;
                        let w = tokens.real("prize")?;
                        tokens.end()?;
                        if prizes[v].replace(w).is_some() {
                            return Err(parse_err(line, format!("second prize for vertex {}", v + 1)));
                        }
                        terminal_lines += 1;
                    }
                    "T" => {
                        compulsory.push(tokens.vertex(n)?);
                        tokens.end()?;
                        terminal_lines += 1;
                    }
                    _ => return Err(parse_err(line, format!("unknown Terminals keyword {key:?}"))),
                }
            }
        }
    }
    if section != Section::None {
        return Err(parse_err(last_line, "unterminated section"));
    }
    if !seen_eof {
        return Err(parse_err(last_line, "missing EOF"));
    }
    if !seen_graph {
        return Err(parse_err(last_line, "missing Graph section"));
    }
    let prizes = prizes.into_iter().map(|p| p.unwrap_or(0.0)).collect();
    Ok(Graph::new(prizes, edges, compulsory)?)
}

pub fn parse_stp_str(text: &str) -> Result<Graph, StpError> {
    parse_stp(text.as_bytes())
}

fn quoted(s: &str) -> String {
    format!("\"{}\"", s.replace('"', "'"))
}

/// Writes `g` as an instance file.
pub fn write_graph<W: Write>(mut w: W, g: &Graph, comment: Option<&StpComment>) -> io::Result<()> {
    writeln!(w, "{STP_HEADER}")?;
    if let Some(c) = comment {
        writeln!(w, "\nSECTION Comment")?;
        if let Some(name) = &c.name {
            writeln!(w, "Name {}", quoted(name))?;
        }
        for r in &c.remarks {
            writeln!(w, "Remark {}", quoted(r))?;
        }
        writeln!(w, "END")?;
    }
    writeln!(w, "\nSECTION Graph")?;
    writeln!(w, "Nodes {}", g.vertex_count())?;
    writeln!(w, "Edges {}", g.edge_count())?;
    for e in g.edges() {
        writeln!(w, "E {} {} {}", e.u() + 1, e.v() + 1, e.cost)?;
    }
    writeln!(w, "END")?;

    let prized = g.prizes().iter().filter(|&&p| p != 0.0).count();
    writeln!(w, "\nSECTION Terminals")?;
    writeln!(w, "Terminals {}", prized + g.compulsory().len())?;
    for (v, &p) in g.prizes().iter().enumerate() {
        if p != 0.0 {
            writeln!(w, "TP {} {}", v + 1, p)?;
        }
    }
    for &c in g.compulsory() {
        writeln!(w, "T {}", c + 1)?;
    }
    writeln!(w, "END")?;
    writeln!(w, "\nEOF")?;
    w.flush()
}

pub fn graph_to_string(g: &Graph, comment: Option<&StpComment>) -> String {
    let mut out = Vec::new();
    write_graph(&mut out, g, comment).expect("writing to memory");
    String::from_utf8(out).expect("ASCII output")
}

/// `x` with 9 significant digits, in the style of C's `%.9g`: fixed notation
/// for exponents in `-4..9`, scientific otherwise, trailing zeros dropped.
pub fn format_sig9(x: f64) -> String {
    const DIGITS: i32 = 9;
    if !x.is_finite() {
        return format!("{x}");
    }
    if x == 0.0 {
        return "0".to_string();
    }
    let sci = format!("{:.*e}", (DIGITS - 1) as usize, x);
    let (mantissa, exp) = sci.split_once('e').expect("scientific notation");
    let exp: i32 = exp.parse().expect("exponent");
    let trim = |s: &str| -> String {
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s.to_string()
        }
    };
    if (-4..DIGITS).contains(&exp) {
        trim(&format!("{:.*}", (DIGITS - 1 - exp) as usize, x))
    } else {
        let mut out = trim(mantissa);
        let _ = write!(out, "e{}{:02}", if exp < 0 { '-' } else { '+' }, exp.abs());
        out
    }
}

/// Writes a solution file. Fails if `t` is not a tree of `g`.
pub fn write_solution<W: Write>(
    mut w: W,
    g: &Graph,
    t: &SolutionTree,
    algorithm: &str,
    lower_bound: Option<f64>,
) -> Result<(), StpError> {
    let cost = net_cost(g, t)?;
    writeln!(w, "NETCOST {}", format_sig9(cost))?;
    writeln!(w, "VERTICES {}", t.vertices().len())?;
    for &v in t.vertices() {
        writeln!(w, "V {}", v + 1)?;
    }
    writeln!(w, "EDGES {}", t.edges().len())?;
    for &e in t.edges() {
        let edge = g.edge(e);
        writeln!(w, "E {} {}", edge.u() + 1, edge.v() + 1)?;
    }
    match lower_bound {
        Some(lb) => writeln!(w, "LOWERBOUND {}", format_sig9(lb))?,
        None => writeln!(w, "LOWERBOUND NA")?,
    }
    writeln!(w, "ALGO {algorithm}")?;
    w.flush()?;
    Ok(())
}

pub fn solution_to_string(
    g: &Graph,
    t: &SolutionTree,
    algorithm: &str,
    lower_bound: Option<f64>,
) -> Result<String, StpError> {
    let mut out = Vec::new();
    write_solution(&mut out, g, t, algorithm, lower_bound)?;
    Ok(String::from_utf8(out).expect("ASCII output"))
}

#[derive(Clone, Debug, PartialEq)]
pub struct ParsedSolution {
    pub tree: SolutionTree,
    /// The `NETCOST` field exactly as written.
    pub net_cost_text: String,
    pub net_cost: f64,
    pub lower_bound: Option<f64>,
    pub algorithm: String,
}

/// Reads a solution file against its instance. Edges are looked up in `g`;
/// the tree itself is not validated.
pub fn parse_solution<R: BufRead>(g: &Graph, reader: R) -> Result<ParsedSolution, StpError> {
    let n = g.vertex_count();
    let mut net_cost_text = None;
    let mut lower_bound = None;
    let mut algorithm = None;
    let mut vertices = Vec::new();
    let mut edges = Vec::new();
    let (mut want_v, mut want_e) = (None, None);
    let mut last_line = 0;
    for (idx, text) in reader.lines().enumerate() {
        let text = text?;
        let line = idx + 1;
        last_line = line;
        let text = text.trim();
        if text.is_empty() {
            continue;
        }
        let mut tokens = Tokens { line, words: text.split_ascii_whitespace() };
        match tokens.next_str("keyword")? {
            "NETCOST" => {
                let raw = tokens.next_str("net-cost")?;
                raw.parse::<f64>().map_err(|_| parse_err(line, format!("bad net-cost {raw:?}")))?;
                net_cost_text = Some(raw.to_string());
                tokens.end()?;
            }
            "VERTICES" => {
                want_v = Some(tokens.count("vertex count")?);
                tokens.end()?;
            }
            "V" => {
                vertices.push(tokens.vertex(n)?);
                tokens.end()?;
            }
            "EDGES" => {
                want_e = Some(tokens.count("edge count")?);
                tokens.end()?;
            }
            "E" => {
                let u = tokens.vertex(n)?;
                let v = tokens.vertex(n)?;
                tokens.end()?;
                let e = g
                    .find_edge(u, v)
                    .ok_or_else(|| parse_err(line, format!("no edge between {} and {}", u + 1, v + 1)))?;
                edges.push(e);
            }
            "LOWERBOUND" => {
                let raw = tokens.next_str("lower bound")?;
                lower_bound = match raw {
                    "NA" => None,
                    _ => Some(raw.parse().map_err(|_| parse_err(line, format!("bad lower bound {raw:?}")))?),
                };
                tokens.end()?;
            }
            "ALGO" => {
                algorithm = Some(tokens.next_str("algorithm name")?.to_string());
                tokens.end()?;
            }
            other => return Err(parse_err(line, format!("unknown keyword {other:?}"))),
        }
    }
    let net_cost_text = net_cost_text.ok_or_else(|| parse_err(last_line, "missing NETCOST"))?;
    if want_v != Some(vertices.len()) {
        return Err(parse_err(last_line, "VERTICES count does not match the V lines"));
    }
    if want_e != Some(edges.len()) {
        return Err(parse_err(last_line, "EDGES count does not match the E lines"));
    }
    Ok(ParsedSolution {
        tree: SolutionTree::new(vertices, edges),
        net_cost: net_cost_text.parse().expect("checked above"),
        net_cost_text,
        lower_bound,
        algorithm: algorithm.unwrap_or_default(),
    })
}

pub fn parse_solution_str(g: &Graph, text: &str) -> Result<ParsedSolution, StpError> {
    parse_solution(g, text.as_bytes())
}
