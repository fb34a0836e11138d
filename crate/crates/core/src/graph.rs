//! Simple connected undirected graphs, edge-list I/O, small generators and
//! the triangulation operator.
//!
//! Every [`Graph`] is validated on construction: no self-loops, no parallel
//! edges, at least one edge, and a single connected component. Edges are kept
//! in canonical order, lexicographic on `(min, max)`, and that order fixes the
//! labels of the vertices introduced by [`Graph::triangulate`].

use std::collections::{BTreeSet, VecDeque};
use std::fmt::Write as _;

use num_bigint::BigUint;
use serde::Serialize;
use thiserror::Error;

use crate::count::BigCount;

/// Default refusal threshold, in vertices, for explicitly materialized graphs.
pub const DEFAULT_EXPLICIT_CAP: usize = 20_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("empty input: no edges found")]
    Empty,
    #[error("line {line}: invalid token {token:?} (expected a nonnegative integer vertex label)")]
    InvalidToken { line: usize, token: String },
    #[error("line {line}: expected exactly two vertex labels, found {found}")]
    MalformedLine { line: usize, found: usize },
    #[error("self-loop at vertex {vertex}")]
    SelfLoop { vertex: usize },
    #[error("duplicate edge ({u}, {v})")]
    DuplicateEdge { u: usize, v: usize },
    #[error("edge ({u}, {v}) references a vertex outside 0..{num_vertices}")]
    VertexOutOfRange { u: usize, v: usize, num_vertices: usize },
    #[error("graph is disconnected: {components} components")]
    Disconnected { components: usize },
    #[error("graph needs at least 2 vertices and 1 edge")]
    TooSmall,
    #[error("invalid size {size} for {kind} graph: {reason}")]
    InvalidSize { kind: &'static str, size: usize, reason: &'static str },
    #[error("explicit construction would need {predicted} vertices, above the cap of {cap}")]
    CapExceeded { predicted: BigCount, cap: usize },
}

/// A validated simple connected undirected graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    num_vertices: usize,
    edges: Vec<(usize, usize)>,
    adjacency: Vec<Vec<usize>>,
}

impl Graph {
    /// Builds a graph on vertices `0..num_vertices` from an edge list in any
    /// order and orientation.
    pub fn from_edges(
        num_vertices: usize,
        edges: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self, GraphError> {
        let mut canonical = Vec::new();
        let mut seen = BTreeSet::new();
        for (a, b) in edges {
            if a == b {
                return Err(GraphError::SelfLoop { vertex: a });
            }
            let (u, v) = if a < b { (a, b) } else { (b, a) };
            if v >= num_vertices {
                return Err(GraphError::VertexOutOfRange { u, v, num_vertices });
            }
            if !seen.insert((u, v)) {
                return Err(GraphError::DuplicateEdge { u, v });
            }
            canonical.push((u, v));
        }
        if canonical.is_empty() {
            return Err(GraphError::Empty);
        }
        if num_vertices < 2 {
            return Err(GraphError::TooSmall);
        }
        canonical.sort_unstable();
        Self::from_canonical(num_vertices, canonical)
    }

    // `edges` must already be sorted, deduplicated and oriented u < v.
    fn from_canonical(num_vertices: usize, edges: Vec<(usize, usize)>) -> Result<Self, GraphError> {
        let mut adjacency = vec![Vec::new(); num_vertices];
        for &(u, v) in &edges {
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        let g = Graph { num_vertices, edges, adjacency };
        let components = g.component_count();
        if components != 1 {
            return Err(GraphError::Disconnected { components });
        }
        Ok(g)
    }

    pub fn num_vertices(&self) -> usize {
        self.num_vertices
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    /// Edges in canonical order, each with `u < v`.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Sorted neighbor list of `v`.
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.adjacency.iter().map(Vec::len).collect()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.num_vertices && self.adjacency[u].binary_search(&v).is_ok()
    }

    fn component_count(&self) -> usize {
        let mut seen = vec![false; self.num_vertices];
        let mut components = 0;
        let mut queue = VecDeque::new();
        for start in 0..self.num_vertices {
            if seen[start] {
                continue;
            }
            components += 1;
            seen[start] = true;
            queue.push_back(start);
            while let Some(u) = queue.pop_front() {
                for &w in &self.adjacency[u] {
                    if !seen[w] {
                        seen[w] = true;
                        queue.push_back(w);
                    }
                }
            }
        }
        components
    }

    /// BFS 2-coloring; `true` iff the graph has no odd cycle.
    pub fn is_bipartite(&self) -> bool {
        let mut color: Vec<Option<bool>> = vec![None; self.num_vertices];
        let mut queue = VecDeque::new();
        color[0] = Some(false);
        queue.push_back(0);
        while let Some(u) = queue.pop_front() {
            let cu = color[u].expect("queued vertices are colored");
            for &w in &self.adjacency[u] {
                match color[w] {
                    None => {
                        color[w] = Some(!cu);
                        queue.push_back(w);
                    }
                    Some(cw) if cw == cu => return false,
                    Some(_) => {}
                }
            }
        }
        true
    }

    pub fn analyze(&self) -> GraphAnalysis {
        let degrees = self.degrees();
        GraphAnalysis {
            n_vertices: self.num_vertices,
            n_edges: self.edges.len(),
            connected: true,
            bipartite: self.is_bipartite(),
            min_degree: degrees.iter().copied().min().unwrap_or(0),
            max_degree: degrees.iter().copied().max().unwrap_or(0),
        }
    }

    /// One triangulation step with the default explicit-construction cap.
    pub fn triangulate(&self) -> Result<Graph, GraphError> {
        self.triangulate_with_cap(DEFAULT_EXPLICIT_CAP)
    }

    /// Adds vertex `N + k` for the `k`-th canonical edge `(u, v)` and joins it
    /// to `u` and `v`.
    pub fn triangulate_with_cap(&self, cap: usize) -> Result<Graph, GraphError> {
        let n = self.num_vertices;
        let predicted = n + self.edges.len();
        if predicted > cap {
            return Err(GraphError::CapExceeded { predicted: BigCount::from(predicted), cap });
        }
        let mut edges = Vec::with_capacity(3 * self.edges.len());
        edges.extend_from_slice(&self.edges);
        for (k, &(u, v)) in self.edges.iter().enumerate() {
            edges.push((u, n + k));
            edges.push((v, n + k));
        }
        edges.sort_unstable();
        Graph::from_canonical(predicted, edges)
    }

    /// `τⁿ(self)`, refused up front when the predicted vertex count exceeds
    /// `cap`.
    pub fn iterate_triangulation(&self, n: usize, cap: usize) -> Result<Graph, GraphError> {
        let (predicted, _) = predicted_counts(self.num_vertices, self.edges.len(), n);
        if predicted.0 > BigUint::from(cap) {
            return Err(GraphError::CapExceeded { predicted, cap });
        }
        let mut g = self.clone();
        for _ in 0..n {
            g = g.triangulate_with_cap(cap)?;
        }
        Ok(g)
    }

    /// Edge-list text: a `#` header with the counts, then one `u v` line per
    /// edge in canonical order. Parses back to an identical graph.
    pub fn to_edge_list(&self) -> String {
        let mut out = String::with_capacity(12 * self.edges.len() + 32);
        let _ = writeln!(out, "# vertices {} edges {}", self.num_vertices, self.edges.len());
        for &(u, v) in &self.edges {
            let _ = writeln!(out, "{u} {v}");
        }
        out
    }

    /// Whether every edge `(u, v)` has a common neighbor of `u` and `v`.
    pub fn every_edge_on_triangle(&self) -> bool {
        self.edges.iter().all(|&(u, v)| {
            let (a, b) = (&self.adjacency[u], &self.adjacency[v]);
            let (mut i, mut j) = (0, 0);
            while i < a.len() && j < b.len() {
                match a[i].cmp(&b[j]) {
                    std::cmp::Ordering::Less => i += 1,
                    std::cmp::Ordering::Greater => j += 1,
                    std::cmp::Ordering::Equal => return true,
                }
            }
            false
        })
    }
}

/// Structural summary of a graph.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GraphAnalysis {
    pub n_vertices: usize,
    pub n_edges: usize,
    pub connected: bool,
    /// For a connected graph this is exactly whether 2 is a normalized
    /// Laplacian eigenvalue (with multiplicity one).
    pub bipartite: bool,
    pub min_degree: usize,
    pub max_degree: usize,
}

impl GraphAnalysis {
    /// Multiplicity of the eigenvalue 2 in the normalized Laplacian spectrum.
    pub fn multiplicity_of_two(&self) -> usize {
        usize::from(self.bipartite)
    }
}

/// Parses whitespace-separated `u v` pairs, one edge per line, with 0-based
/// labels. Everything after `#` on a line is ignored. The vertex set is
/// `0..=max_label`.
pub fn parse_edge_list(text: &str) -> Result<Graph, GraphError> {
    let mut edges = Vec::new();
    let mut max_label = 0usize;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let content = raw.split('#').next().unwrap_or("");
        let tokens: Vec<&str> = content.split_whitespace().collect();
        if tokens.is_empty() {
            continue;
        }
        let mut labels = [0usize; 2];
        for (slot, tok) in tokens.iter().take(2).enumerate() {
            labels[slot] = tok.parse::<usize>().map_err(|_| GraphError::InvalidToken {
                line: line_no,
                token: (*tok).to_string(),
            })?;
        }
        if tokens.len() != 2 {
            return Err(GraphError::MalformedLine { line: line_no, found: tokens.len() });
        }
        max_label = max_label.max(labels[0]).max(labels[1]);
        edges.push((labels[0], labels[1]));
    }
    if edges.is_empty() {
        return Err(GraphError::Empty);
    }
    Graph::from_edges(max_label + 1, edges)
}

/// Exact `(N_n, E_n)` after `n` triangulation steps of a seed with `n0`
/// vertices and `e0` edges: `E_n = 3ⁿ·e0`, `N_n = n0 + (3ⁿ − 1)/2 · e0`.
pub fn predicted_counts(n0: usize, e0: usize, n: usize) -> (BigCount, BigCount) {
    let pow3 = BigUint::from(3u32).pow(n as u32);
    let edges = &pow3 * BigUint::from(e0);
    let vertices = BigUint::from(n0) + (pow3 - 1u32) / 2u32 * BigUint::from(e0);
    (BigCount(vertices), BigCount(edges))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GraphKind {
    Complete,
    Path,
    Cycle,
    Star,
    Petersen,
}

impl GraphKind {
    fn name(self) -> &'static str {
        match self {
            GraphKind::Complete => "complete",
            GraphKind::Path => "path",
            GraphKind::Cycle => "cycle",
            GraphKind::Star => "star",
            GraphKind::Petersen => "petersen",
        }
    }
}

/// Canonically labeled small graphs. `size` is the vertex count for every
/// kind; a star of size `s` has center 0 and leaves `1..s`.
pub fn generate(kind: GraphKind, size: usize) -> Result<Graph, GraphError> {
    let invalid = |reason| GraphError::InvalidSize { kind: kind.name(), size, reason };
    let edges: Vec<(usize, usize)> = match kind {
        GraphKind::Complete => {
            if size < 2 {
                return Err(invalid("needs at least 2 vertices"));
            }
            (0..size).flat_map(|u| (u + 1..size).map(move |v| (u, v))).collect()
        }
        GraphKind::Path => {
            if size < 2 {
                return Err(invalid("needs at least 2 vertices"));
            }
            (0..size - 1).map(|u| (u, u + 1)).collect()
        }
        GraphKind::Cycle => {
            if size < 3 {
                return Err(invalid("needs at least 3 vertices"));
            }
            (0..size).map(|u| (u, (u + 1) % size)).collect()
        }
        GraphKind::Star => {
            if size < 2 {
                return Err(invalid("needs at least 2 vertices"));
            }
            (1..size).map(|leaf| (0, leaf)).collect()
        }
        GraphKind::Petersen => {
            if size != 10 {
                return Err(invalid("the Petersen graph has exactly 10 vertices"));
            }
            let mut e = Vec::with_capacity(15);
            for i in 0..5 {
                e.push((i, (i + 1) % 5));
                e.push((i, i + 5));
                e.push((5 + i, 5 + (i + 2) % 5));
            }
            e
        }
    };
    Graph::from_edges(size, edges)
}
