//! Graphs, matchings, DIMACS input and the result format.
//!
//! Vertices are numbered `1..=n`; id `0` is never a vertex and is used as the
//! "none" value wherever a sentinel is needed.

use std::collections::HashSet;
use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::matcher::PhaseStats;

pub type Vertex = u32;
pub type EdgeId = u32;

/// Sentinel for "no vertex".
pub const NIL: Vertex = 0;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("line {line}: malformed problem line (expected `p edge <n> <m>`)")]
    BadHeader { line: usize },
    #[error("line {line}: duplicate problem line")]
    DuplicateHeader { line: usize },
    #[error("line {line}: edge before problem line")]
    MissingHeader { line: usize },
    #[error("no problem line found")]
    NoHeader,
    #[error("line {line}: malformed line `{text}`")]
    Malformed { line: usize, text: String },
    #[error("line {line}: vertex {vertex} out of range 1..={n}")]
    VertexOutOfRange { line: usize, vertex: u64, n: u32 },
    #[error("line {line}: self-loop on vertex {vertex}")]
    SelfLoop { line: usize, vertex: u32 },
    #[error("edge count mismatch: header declares {declared}, file has {found}")]
    EdgeCountMismatch { declared: usize, found: usize },
    #[error("line {line}: vertex {vertex} matched twice")]
    DoubleMatched { line: usize, vertex: u32 },
    #[error("line {line}: {u}-{v} is not an edge of the graph")]
    NotAnEdge { line: usize, u: u32, v: u32 },
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GenerateError {
    #[error("cannot place {m} distinct edges on {n} vertices (at most {max})")]
    TooManyEdges { n: u32, m: u64, max: u64 },
}

/// Undirected simple graph with stable edge order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: u32,
    edges: Vec<(Vertex, Vertex)>,
    adj: Vec<Vec<EdgeId>>,
    duplicates: usize,
}

impl Graph {
    pub fn new(n: u32) -> Self {
        Graph {
            n,
            edges: Vec::new(),
            adj: vec![Vec::new(); n as usize + 1],
            duplicates: 0,
        }
    }

    /// Builds a graph from an edge list. Panics on self-loops or out-of-range
    /// endpoints; duplicates are collapsed (first occurrence kept).
    pub fn from_edges(n: u32, edges: &[(Vertex, Vertex)]) -> Self {
        let mut g = Graph::new(n);
        let mut seen = HashSet::new();
        for &(u, v) in edges {
            assert!(u != v, "self-loop on {u}");
            assert!(
                u >= 1 && u <= n && v >= 1 && v <= n,
                "edge {u}-{v} out of range"
            );
            if seen.insert(key(u, v)) {
                g.push_edge(u, v);
            } else {
                g.duplicates += 1;
            }
        }
        g
    }

    fn push_edge(&mut self, u: Vertex, v: Vertex) {
        let id = self.edges.len() as EdgeId;
        self.edges.push((u, v));
        self.adj[u as usize].push(id);
        self.adj[v as usize].push(id);
    }

    pub fn vertex_count(&self) -> u32 {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(Vertex, Vertex)] {
        &self.edges
    }

    pub fn edge(&self, e: EdgeId) -> (Vertex, Vertex) {
        self.edges[e as usize]
    }

    /// Incident edge ids of `v` in insertion order.
    pub fn incident(&self, v: Vertex) -> &[EdgeId] {
        &self.adj[v as usize]
    }

    /// The endpoint of `e` that is not `v`.
    pub fn other(&self, e: EdgeId, v: Vertex) -> Vertex {
        let (a, b) = self.edges[e as usize];
        if a == v {
            b
        } else {
            a
        }
    }

    pub fn vertices(&self) -> impl Iterator<Item = Vertex> {
        1..=self.n
    }

    /// Number of parallel edges dropped while building.
    pub fn duplicates_collapsed(&self) -> usize {
        self.duplicates
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        if u == 0 || v == 0 || u > self.n || v > self.n {
            return false;
        }
        let (a, b) = if self.adj[u as usize].len() <= self.adj[v as usize].len() {
            (u, v)
        } else {
            (v, u)
        };
        self.adj[a as usize].iter().any(|&e| self.other(e, a) == b)
    }

    /// Emits the graph in DIMACS edge format.
    pub fn to_dimacs(&self) -> String {
        let mut out = format!("p edge {} {}\n", self.n, self.edges.len());
        for &(u, v) in &self.edges {
            let _ = writeln!(out, "e {u} {v}");
        }
        out
    }
}

fn key(u: Vertex, v: Vertex) -> (Vertex, Vertex) {
    if u < v {
        (u, v)
    } else {
        (v, u)
    }
}

/// Parses the DIMACS edge format.
///
/// Duplicate edges (in either orientation) are collapsed; the declared edge
/// count must match the number of `e` lines including duplicates.
pub fn parse_dimacs(text: &str) -> Result<Graph, ParseError> {
    let mut graph: Option<Graph> = None;
    let mut declared = 0usize;
    let mut found = 0usize;
    let mut seen = HashSet::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('c') {
            continue;
        }
        let mut fields = trimmed.split_whitespace();
        match fields.next() {
            Some("p") => {
                if graph.is_some() {
                    return Err(ParseError::DuplicateHeader { line });
                }
                let kind = fields.next();
                let n = fields.next().and_then(|s| s.parse::<u32>().ok());
                let m = fields.next().and_then(|s| s.parse::<usize>().ok());
                match (kind, n, m, fields.next()) {
                    (Some("edge"), Some(n), Some(m), None) => {
                        graph = Some(Graph::new(n));
                        declared = m;
                    }
                    _ => return Err(ParseError::BadHeader { line }),
                }
            }
            Some("e") => {
                let g = graph.as_mut().ok_or(ParseError::MissingHeader { line })?;
                let (u, v) = two_vertices(&mut fields, line, trimmed, g.n)?;
                if u == v {
                    return Err(ParseError::SelfLoop { line, vertex: u });
                }
                found += 1;
                if seen.insert(key(u, v)) {
                    g.push_edge(u, v);
                } else {
                    g.duplicates += 1;
                }
            }
            _ => {
                return Err(ParseError::Malformed {
                    line,
                    text: trimmed.to_string(),
                })
            }
        }
    }
    let g = graph.ok_or(ParseError::NoHeader)?;
    if declared != found {
        return Err(ParseError::EdgeCountMismatch { declared, found });
    }
    Ok(g)
}

fn two_vertices<'a>(
    fields: &mut impl Iterator<Item = &'a str>,
    line: usize,
    text: &str,
    n: u32,
) -> Result<(Vertex, Vertex), ParseError> {
    let malformed = || ParseError::Malformed {
        line,
        text: text.to_string(),
    };
    let u = fields
        .next()
        .and_then(|s| s.parse::<u64>().ok())
        .ok_or_else(malformed)?;
    let v = fields
        .next()
        .and_then(|s| s.parse::<u64>().ok())
        .ok_or_else(malformed)?;
    if fields.next().is_some() {
        return Err(malformed());
    }
    for x in [u, v] {
        if x == 0 || x > n as u64 {
            return Err(ParseError::VertexOutOfRange { line, vertex: x, n });
        }
    }
    Ok((u as Vertex, v as Vertex))
}

/// Random simple graph with exactly `m` edges.
///
/// Algorithm (stable): a `ChaCha8Rng` seeded with `seed` draws ordered pairs
/// `(u, v)` uniformly from `1..=n` and keeps each new unordered pair in draw
/// order, until `m` pairs are kept. When `m` exceeds half of all pairs the
/// same procedure selects the `N - m` pairs to leave out instead, and the
/// remaining pairs are emitted in lexicographic order.
pub fn generate_random(n: u32, m: u64, seed: u64) -> Result<Graph, GenerateError> {
    let max = n as u64 * (n as u64).saturating_sub(1) / 2;
    if m > max {
        return Err(GenerateError::TooManyEdges { n, m, max });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let complement = m > max / 2;
    let target = if complement { max - m } else { m };
    let mut chosen = HashSet::with_capacity(target as usize);
    let mut order = Vec::with_capacity(target as usize);
    while (order.len() as u64) < target {
        let u = rng.gen_range(1..=n);
        let v = rng.gen_range(1..=n);
        if u != v && chosen.insert(key(u, v)) {
            order.push((u, v));
        }
    }
    let mut g = Graph::new(n);
    if complement {
        for u in 1..=n {
            for v in u + 1..=n {
                if !chosen.contains(&(u, v)) {
                    g.push_edge(u, v);
                }
            }
        }
    } else {
        for (u, v) in order {
            g.push_edge(u, v);
        }
    }
    Ok(g)
}

/// A matching stored as a symmetric mate array (`NIL` = free).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matching {
    mate: Vec<Vertex>,
}

impl Matching {
    pub fn empty(n: u32) -> Self {
        Matching {
            mate: vec![NIL; n as usize + 1],
        }
    }

    /// Builds a matching from pairs without validating them against a graph.
    /// Panics if a vertex appears twice.
    pub fn from_pairs(n: u32, pairs: &[(Vertex, Vertex)]) -> Self {
        let mut m = Matching::empty(n);
        for &(u, v) in pairs {
            assert!(m.mate[u as usize] == NIL && m.mate[v as usize] == NIL);
            m.mate[u as usize] = v;
            m.mate[v as usize] = u;
        }
        m
    }

    pub fn vertex_count(&self) -> u32 {
        (self.mate.len() - 1) as u32
    }

    pub fn mate(&self, v: Vertex) -> Option<Vertex> {
        match self.mate[v as usize] {
            NIL => None,
            u => Some(u),
        }
    }

    pub(crate) fn mate_raw(&self, v: Vertex) -> Vertex {
        self.mate[v as usize]
    }

    pub fn is_free(&self, v: Vertex) -> bool {
        self.mate[v as usize] == NIL
    }

    pub fn size(&self) -> usize {
        self.mate.iter().skip(1).filter(|&&u| u != NIL).count() / 2
    }

    /// Matched pairs `(u, v)` with `u < v`, ascending.
    pub fn pairs(&self) -> Vec<(Vertex, Vertex)> {
        (1..self.mate.len() as Vertex)
            .filter_map(|u| {
                let v = self.mate[u as usize];
                (v != NIL && u < v).then_some((u, v))
            })
            .collect()
    }

    pub(crate) fn set_pair(&mut self, u: Vertex, v: Vertex) {
        self.mate[u as usize] = v;
        self.mate[v as usize] = u;
    }

    /// Flips an augmenting path given as a vertex sequence whose edges
    /// alternate unmatched/matched, starting and ending with unmatched edges.
    pub fn augment(&mut self, path: &[Vertex]) {
        debug_assert!(path.len().is_multiple_of(2));
        for pair in path.chunks(2) {
            self.set_pair(pair[0], pair[1]);
        }
    }
}

/// Maximal matching by a single pass over edges in insertion order.
pub fn greedy_matching(g: &Graph) -> Matching {
    let mut m = Matching::empty(g.vertex_count());
    for &(u, v) in g.edges() {
        if m.is_free(u) && m.is_free(v) {
            m.set_pair(u, v);
        }
    }
    m
}

/// Outcome of [`validate_matching`]; `problems` is empty iff valid.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Validation {
    pub problems: Vec<String>,
}

impl Validation {
    pub fn is_valid(&self) -> bool {
        self.problems.is_empty()
    }
}

pub fn validate_matching(g: &Graph, m: &Matching) -> Validation {
    let mut problems = Vec::new();
    if m.vertex_count() != g.vertex_count() {
        problems.push(format!(
            "matching covers {} vertices, graph has {}",
            m.vertex_count(),
            g.vertex_count()
        ));
        return Validation { problems };
    }
    for v in g.vertices() {
        let u = m.mate_raw(v);
        if u == NIL {
            continue;
        }
        if u > g.vertex_count() {
            problems.push(format!("mate of {v} is out of range ({u})"));
        } else if m.mate_raw(u) != v {
            problems.push(format!("mate({v})={u} but mate({u})={}", m.mate_raw(u)));
        } else if v < u && !g.has_edge(u, v) {
            problems.push(format!("{v}-{u} is not an edge"));
        }
    }
    Validation { problems }
}

/// Checks pairs for a vertex occurring twice or a non-edge; used for
/// user-supplied matchings before they are turned into a mate array.
pub fn matching_from_pairs(
    g: &Graph,
    pairs: &[(usize, Vertex, Vertex)],
) -> Result<Matching, ParseError> {
    let mut m = Matching::empty(g.vertex_count());
    for &(line, u, v) in pairs {
        for x in [u, v] {
            if x == 0 || x > g.vertex_count() {
                return Err(ParseError::VertexOutOfRange {
                    line,
                    vertex: x as u64,
                    n: g.vertex_count(),
                });
            }
        }
        if !g.has_edge(u, v) {
            return Err(ParseError::NotAnEdge { line, u, v });
        }
        for x in [u, v] {
            if !m.is_free(x) {
                return Err(ParseError::DoubleMatched { line, vertex: x });
            }
        }
        m.set_pair(u, v);
    }
    Ok(m)
}

/// Parses a result/matching file: `s <size>` (optional), `m u v` lines,
/// `c` comments. Returns the matched pairs tagged with their line numbers.
pub fn parse_matching_pairs(text: &str) -> Result<Vec<(usize, Vertex, Vertex)>, ParseError> {
    let mut pairs = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('c') || trimmed.starts_with('s') {
            continue;
        }
        let mut fields = trimmed.split_whitespace();
        if fields.next() != Some("m") {
            return Err(ParseError::Malformed {
                line,
                text: trimmed.to_string(),
            });
        }
        let (u, v) = two_vertices(&mut fields, line, trimmed, u32::MAX)?;
        if u == v {
            return Err(ParseError::SelfLoop { line, vertex: u });
        }
        pairs.push((line, u, v));
    }
    Ok(pairs)
}

/// Result format: `s <size>`, then `m u v` per matched edge (`u < v`,
/// ascending), then optional `c` statistic lines.
pub fn write_result(m: &Matching, stats: Option<&PhaseStats>) -> String {
    let pairs = m.pairs();
    let mut out = format!("s {}\n", pairs.len());
    for (u, v) in pairs {
        let _ = writeln!(out, "m {u} {v}");
    }
    if let Some(stats) = stats {
        let _ = writeln!(out, "c phases {}", stats.phases.len());
        for (i, p) in stats.phases.iter().enumerate() {
            let lm = p.l_m.map_or_else(|| "inf".to_string(), |l| l.to_string());
            let _ = writeln!(
                out,
                "c phase {} l_m {} aps {} edge_scans {} finds {} unions {} grows {}",
                i + 1,
                lm,
                p.aps,
                p.edge_scans,
                p.finds,
                p.unions,
                p.grows
            );
        }
    }
    out
}
