//! Finite simple graphs on dense vertex ids, with edge-list and JSON I/O.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub type Vertex = usize;

/// An undirected edge, always stored with `0 <= u < v`.
pub type Edge = (Vertex, Vertex);

#[inline]
pub fn edge(a: Vertex, b: Vertex) -> Edge {
    if a < b {
        (a, b)
    } else {
        (b, a)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("edge ({0}, {1}) is a loop")]
    Loop(Vertex, Vertex),
    #[error("edge ({0}, {1}) appears twice")]
    DuplicateEdge(Vertex, Vertex),
    #[error("edge ({u}, {v}) has an endpoint outside 0..{n}")]
    EndpointOutOfRange { u: Vertex, v: Vertex, n: usize },
    #[error("label table has {got} entries for {n} vertices")]
    LabelCount { got: usize, n: usize },
}

/// Where a parse error was detected.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub enum Location {
    /// 1-based line of an edge-list document.
    Line(usize),
    /// 0-based index into the `edges` array of a JSON document.
    JsonEdge(usize),
    /// 1-based line reported by the JSON reader.
    JsonLine(usize),
}

impl fmt::Display for Location {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Location::Line(l) => write!(f, "line {l}"),
            Location::JsonEdge(i) => write!(f, "edges[{i}]"),
            Location::JsonLine(l) => write!(f, "line {l}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("{at}: malformed input: {detail}")]
    Malformed { at: Location, detail: String },
    #[error("{at}: {source}")]
    Invalid {
        at: Location,
        #[source]
        source: GraphError,
    },
}

/// A finite simple graph with vertices `0..n`.
///
/// Edges keep their insertion order; several algorithms (the pebble game in
/// particular) process edges in that order.
#[derive(Clone)]
pub struct Graph {
    n: usize,
    edges: Vec<Edge>,
    adj: Vec<Vec<Vertex>>,
    index: HashMap<Edge, usize>,
    labels: Option<Vec<String>>,
}

impl Graph {
    pub fn new(n: usize, edges: impl IntoIterator<Item = (Vertex, Vertex)>) -> Result<Self, GraphError> {
        let mut g = Graph::empty(n);
        for (a, b) in edges {
            g.try_add_edge(a, b)?;
        }
        Ok(g)
    }

    pub fn empty(n: usize) -> Self {
        Graph {
            n,
            edges: Vec::new(),
            adj: vec![Vec::new(); n],
            index: HashMap::new(),
            labels: None,
        }
    }

    fn try_add_edge(&mut self, a: Vertex, b: Vertex) -> Result<(), GraphError> {
        if a == b {
            return Err(GraphError::Loop(a, b));
        }
        if a >= self.n || b >= self.n {
            return Err(GraphError::EndpointOutOfRange { u: a, v: b, n: self.n });
        }
        let e = edge(a, b);
        if self.index.contains_key(&e) {
            return Err(GraphError::DuplicateEdge(e.0, e.1));
        }
        self.index.insert(e, self.edges.len());
        self.edges.push(e);
        let pa = self.adj[a].binary_search(&b).unwrap_err();
        self.adj[a].insert(pa, b);
        let pb = self.adj[b].binary_search(&a).unwrap_err();
        self.adj[b].insert(pb, a);
        Ok(())
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self, GraphError> {
        if labels.len() != self.n {
            return Err(GraphError::LabelCount { got: labels.len(), n: self.n });
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn neighbors(&self, v: Vertex) -> &[Vertex] {
        &self.adj[v]
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, a: Vertex, b: Vertex) -> bool {
        a != b && self.index.contains_key(&edge(a, b))
    }

    pub fn edge_index(&self, a: Vertex, b: Vertex) -> Option<usize> {
        self.index.get(&edge(a, b)).copied()
    }

    pub fn is_complete(&self) -> bool {
        self.m() == self.n * self.n.saturating_sub(1) / 2
    }

    /// Edge set in sorted order, independent of insertion order.
    pub fn sorted_edges(&self) -> Vec<Edge> {
        let mut es = self.edges.clone();
        es.sort_unstable();
        es
    }

    pub fn same_edge_set(&self, other: &Graph) -> bool {
        self.n == other.n && self.m() == other.m() && self.edges.iter().all(|&(a, b)| other.has_edge(a, b))
    }

    /// `G + ab`; returns a clone when the edge is already present.
    pub fn with_edge(&self, a: Vertex, b: Vertex) -> Graph {
        let mut g = self.clone();
        if !g.has_edge(a, b) {
            g.try_add_edge(a, b).expect("valid edge");
        }
        g
    }

    /// `G - ab`; returns a clone when the edge is absent.
    pub fn without_edge(&self, a: Vertex, b: Vertex) -> Graph {
        let target = edge(a, b);
        let mut g = Graph::empty(self.n);
        g.labels = self.labels.clone();
        for &e in self.edges.iter().filter(|&&e| e != target) {
            g.try_add_edge(e.0, e.1).expect("edges of a valid graph");
        }
        g
    }

    /// Graph on the same vertex set spanned by a subset of the edges.
    pub fn spanning_subgraph(&self, keep: impl Fn(usize, Edge) -> bool) -> Graph {
        let mut g = Graph::empty(self.n);
        for (i, &e) in self.edges.iter().enumerate() {
            if keep(i, e) {
                g.try_add_edge(e.0, e.1).expect("edges of a valid graph");
            }
        }
        g
    }

    /// Applies `perm` (old id -> new id) to every vertex.
    pub fn relabel(&self, perm: &[Vertex]) -> Graph {
        assert_eq!(perm.len(), self.n, "permutation length");
        let mut g = Graph::empty(self.n);
        for &(a, b) in &self.edges {
            g.try_add_edge(perm[a], perm[b]).expect("permutation keeps graph simple");
        }
        g
    }

    /// Adds a fresh isolated vertex and returns its id.
    pub fn add_vertex(&mut self) -> Vertex {
        self.adj.push(Vec::new());
        self.n += 1;
        if let Some(l) = self.labels.as_mut() {
            l.push(format!("v{}", self.n - 1));
        }
        self.n - 1
    }

    pub fn add_edge(&mut self, a: Vertex, b: Vertex) -> Result<(), GraphError> {
        self.try_add_edge(a, b)
    }

    /// Lexicographically smallest sorted edge list over all vertex
    /// permutations. Brute force; intended for `n <= 8`.
    pub fn canonical_form(&self) -> Vec<Edge> {
        assert!(self.n <= 8, "canonical_form is brute force; n = {} is too large", self.n);
        let mut perm: Vec<Vertex> = (0..self.n).collect();
        let mut best: Option<Vec<Edge>> = None;
        loop {
            let mut es: Vec<Edge> = self.edges.iter().map(|&(a, b)| edge(perm[a], perm[b])).collect();
            es.sort_unstable();
            if best.as_ref().is_none_or(|b| es < *b) {
                best = Some(es);
            }
            if !next_permutation(&mut perm) {
                break;
            }
        }
        best.unwrap_or_default()
    }
}

impl PartialEq for Graph {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.edges == other.edges && self.labels == other.labels
    }
}

impl Eq for Graph {}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph(n={}, edges={:?})", self.n, self.edges)
    }
}

/// Advances `p` to the next permutation in lexicographic order.
pub fn next_permutation(p: &mut [usize]) -> bool {
    if p.len() < 2 {
        return false;
    }
    let mut i = p.len() - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = p.len() - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

/// A graph that lives inside a larger host graph: `graph` uses compact ids
/// and `origin[i]` is the host id of compact vertex `i`. Compact ids follow
/// the order of host ids.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Piece {
    pub graph: Graph,
    pub origin: Vec<Vertex>,
}

impl Piece {
    /// Builds a piece from host-labelled edges. `extra` vertices are included
    /// even when no edge touches them.
    pub fn from_host_edges(edges: &[Edge], extra: &[Vertex]) -> Piece {
        let mut origin: Vec<Vertex> = edges.iter().flat_map(|&(a, b)| [a, b]).chain(extra.iter().copied()).collect();
        origin.sort_unstable();
        origin.dedup();
        let local: HashMap<Vertex, Vertex> = origin.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let graph = Graph::new(origin.len(), edges.iter().map(|&(a, b)| (local[&a], local[&b]))).expect("host edges form a simple graph");
        Piece { graph, origin }
    }

    pub fn whole(g: &Graph) -> Piece {
        Piece { graph: g.clone(), origin: (0..g.n()).collect() }
    }

    pub fn local_of(&self, host: Vertex) -> Option<Vertex> {
        self.origin.binary_search(&host).ok()
    }

    pub fn host_edges(&self) -> Vec<Edge> {
        self.graph.edges().iter().map(|&(a, b)| edge(self.origin[a], self.origin[b])).collect()
    }

    pub fn host_edges_sorted(&self) -> Vec<Edge> {
        let mut es = self.host_edges();
        es.sort_unstable();
        es
    }
}

// ---------------------------------------------------------------------------
// I/O

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    EdgeList,
    Json,
}

#[derive(Serialize, Deserialize)]
struct JsonGraph {
    n: usize,
    edges: Vec<[Vertex; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    labels: Option<Vec<String>>,
}

/// Parses either supported format, choosing JSON when the first
/// non-whitespace character is `{`.
pub fn parse_graph(text: &str) -> Result<Graph, ParseError> {
    parse_graph_as(text, detect_format(text))
}

pub fn detect_format(text: &str) -> Format {
    if text.trim_start().starts_with('{') {
        Format::Json
    } else {
        Format::EdgeList
    }
}

pub fn parse_graph_as(text: &str, format: Format) -> Result<Graph, ParseError> {
    match format {
        Format::EdgeList => parse_edge_list(text),
        Format::Json => parse_json(text),
    }
}

fn malformed(at: Location, detail: impl Into<String>) -> ParseError {
    ParseError::Malformed { at, detail: detail.into() }
}

fn parse_pair(line: &str, at: Location) -> Result<(usize, usize), ParseError> {
    let mut it = line.split_whitespace();
    let (Some(a), Some(b), None) = (it.next(), it.next(), it.next()) else {
        return Err(malformed(at, format!("expected two integers, got {line:?}")));
    };
    let a = a.parse().map_err(|_| malformed(at, format!("not a non-negative integer: {a:?}")))?;
    let b = b.parse().map_err(|_| malformed(at, format!("not a non-negative integer: {b:?}")))?;
    Ok((a, b))
}

pub fn parse_edge_list(text: &str) -> Result<Graph, ParseError> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l)).filter(|(_, l)| !l.trim().is_empty());
    let Some((hl, header)) = lines.next() else {
        return Err(malformed(Location::Line(1), "empty document"));
    };
    let (n, m) = parse_pair(header, Location::Line(hl))?;
    let mut g = Graph::empty(n);
    let mut last = hl;
    for (ln, line) in lines {
        last = ln;
        if g.m() == m {
            return Err(malformed(Location::Line(ln), format!("more than the declared {m} edges")));
        }
        let (a, b) = parse_pair(line, Location::Line(ln))?;
        g.try_add_edge(a, b).map_err(|source| ParseError::Invalid { at: Location::Line(ln), source })?;
    }
    if g.m() != m {
        return Err(malformed(Location::Line(last), format!("declared {m} edges, found {}", g.m())));
    }
    Ok(g)
}

pub fn parse_json(text: &str) -> Result<Graph, ParseError> {
    let doc: JsonGraph =
        serde_json::from_str(text).map_err(|e| malformed(Location::JsonLine(e.line()), e.to_string()))?;
    let mut g = Graph::empty(doc.n);
    for (i, [a, b]) in doc.edges.into_iter().enumerate() {
        g.try_add_edge(a, b).map_err(|source| ParseError::Invalid { at: Location::JsonEdge(i), source })?;
    }
    match doc.labels {
        Some(l) => g.with_labels(l).map_err(|source| ParseError::Invalid { at: Location::JsonLine(1), source }),
        None => Ok(g),
    }
}

/// Edge-list document: header `n m`, one `u v` line per edge, LF-terminated.
pub fn serialize_edge_list(g: &Graph) -> String {
    let mut s = format!("{} {}\n", g.n(), g.m());
    for &(a, b) in g.edges() {
        s.push_str(&format!("{a} {b}\n"));
    }
    s
}

pub fn serialize_json(g: &Graph) -> String {
    let doc = JsonGraph {
        n: g.n(),
        edges: g.edges().iter().map(|&(a, b)| [a, b]).collect(),
        labels: g.labels.clone(),
    };
    serde_json::to_string(&doc).expect("graph serializes")
}

// ---------------------------------------------------------------------------
// Named families

pub mod families {
    use super::{Graph, Vertex};

    pub fn complete(n: usize) -> Graph {
        Graph::new(n, (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b)))).unwrap()
    }

    pub fn cycle(n: usize) -> Graph {
        assert!(n >= 3);
        Graph::new(n, (0..n).map(|i| (i, (i + 1) % n))).unwrap()
    }

    pub fn path(n: usize) -> Graph {
        Graph::new(n, (1..n).map(|i| (i - 1, i))).unwrap()
    }

    /// Wheel on `n` vertices: hub 0, rim `1..n` in cyclic order.
    pub fn wheel(n: usize) -> Graph {
        assert!(n >= 4);
        let rim = n - 1;
        let spokes = (1..n).map(|i| (0, i));
        let rim_edges = (0..rim).map(move |i| (1 + i, 1 + (i + 1) % rim));
        Graph::new(n, spokes.chain(rim_edges)).unwrap()
    }

    /// Wheel on `n` vertices with the rim edge between vertices 1 and 2 removed.
    pub fn wheel_minus_rim_edge(n: usize) -> Graph {
        wheel(n).without_edge(1, 2)
    }

    pub fn complete_bipartite(a: usize, b: usize) -> Graph {
        Graph::new(a + b, (0..a).flat_map(|i| (a..a + b).map(move |j| (i, j)))).unwrap()
    }

    /// Triangular prism: triangles 0-1-2 and 3-4-5 joined by 0-3, 1-4, 2-5.
    pub fn prism() -> Graph {
        Graph::new(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (0, 3), (1, 4), (2, 5)]).unwrap()
    }

    /// `K4 - ab` on u=0, v=1, a=2, b=3.
    pub fn k4_minus_edge() -> Graph {
        complete(4).without_edge(2, 3)
    }

    /// Two copies of `K4 - uv` glued at u=0, v=1 (second copy on 4, 5).
    pub fn two_k4_minus_uv() -> Graph {
        let mut es: Vec<(Vertex, Vertex)> = Vec::new();
        for (a, b) in [(2, 3), (4, 5)] {
            es.extend([(0, a), (0, b), (1, a), (1, b), (a, b)]);
        }
        Graph::new(6, es).unwrap()
    }

    /// Central triangle 0-1-2 with an outer triangle on each of its sides.
    pub fn triangle_ring() -> Graph {
        Graph::new(6, [(0, 1), (1, 2), (0, 2), (0, 3), (1, 3), (1, 4), (2, 4), (0, 5), (2, 5)]).unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_edge_list() {
        let g = parse_graph("4 5\n0 1\n0 2\n0 3\n1 2\n2 3").unwrap();
        assert_eq!((g.n(), g.m()), (4, 5));
        assert!(g.has_edge(3, 2));
        let k3 = parse_graph("3 3\n0 1\n1 2\n0 2").unwrap();
        assert!(k3.same_edge_set(&families::complete(3)));
    }

    #[test]
    fn reports_duplicate_with_line() {
        let err = parse_graph("2 2\n0 1\n0 1").unwrap_err();
        assert_eq!(
            err,
            ParseError::Invalid { at: Location::Line(3), source: GraphError::DuplicateEdge(0, 1) }
        );
    }

    #[test]
    fn reports_loop_range_and_malformed() {
        assert!(matches!(
            parse_graph("3 1\n1 1").unwrap_err(),
            ParseError::Invalid { at: Location::Line(2), source: GraphError::Loop(1, 1) }
        ));
        assert!(matches!(
            parse_graph("3 1\n1 3").unwrap_err(),
            ParseError::Invalid { at: Location::Line(2), source: GraphError::EndpointOutOfRange { .. } }
        ));
        assert!(matches!(
            parse_graph("3 2\n0 1\n1 x").unwrap_err(),
            ParseError::Malformed { at: Location::Line(3), .. }
        ));
        assert!(matches!(parse_graph("3 2\n0 1").unwrap_err(), ParseError::Malformed { .. }));
        assert!(matches!(parse_graph("").unwrap_err(), ParseError::Malformed { .. }));
    }

    #[test]
    fn parses_json_and_reports_edge_index() {
        let g = parse_graph(r#"{"n": 3, "edges": [[0,1],[1,2],[0,2]]}"#).unwrap();
        assert_eq!(g.m(), 3);
        let err = parse_graph(r#"{"n": 3, "edges": [[0,1],[1,0]]}"#).unwrap_err();
        assert!(matches!(err, ParseError::Invalid { at: Location::JsonEdge(1), .. }));
        assert!(matches!(parse_graph("{\"n\": 3,\n \"edges\": [[0,1],]}"), Err(ParseError::Malformed { .. })));
    }

    #[test]
    fn json_labels_round_trip() {
        let text = r#"{"n":2,"edges":[[0,1]],"labels":["a","b"]}"#;
        let g = parse_graph(text).unwrap();
        assert_eq!(g.labels().unwrap(), ["a", "b"]);
        assert_eq!(serialize_json(&g), text);
    }

    #[test]
    fn canonical_form_identifies_isomorphs() {
        let p = families::path(4);
        let q = Graph::new(4, [(2, 0), (0, 3), (3, 1)]).unwrap();
        assert_eq!(p.canonical_form(), q.canonical_form());
        assert_ne!(p.canonical_form(), families::cycle(4).canonical_form());
    }

    #[test]
    fn piece_uses_order_preserving_ids() {
        let p = Piece::from_host_edges(&[(7, 3), (3, 9)], &[]);
        assert_eq!(p.origin, vec![3, 7, 9]);
        assert_eq!(p.host_edges(), vec![(3, 7), (3, 9)]);
    }

    #[test]
    fn named_families_have_expected_counts() {
        assert_eq!(families::prism().m(), 9);
        assert_eq!(families::wheel(5).m(), 8);
        assert_eq!(families::complete_bipartite(3, 4).m(), 12);
        assert_eq!(families::two_k4_minus_uv().m(), 10);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn arb_graph() -> impl Strategy<Value = Graph> {
            (1usize..9).prop_flat_map(|n| {
                let pairs: Vec<Edge> = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
                let k = pairs.len();
                (Just(pairs), proptest::collection::vec(any::<bool>(), k), Just(n)).prop_map(|(pairs, mask, n)| {
                    Graph::new(n, pairs.into_iter().zip(mask).filter(|(_, keep)| *keep).map(|(e, _)| e)).unwrap()
                })
            })
        }

        proptest! {
            #[test]
            fn serialize_then_parse_is_identity(g in arb_graph()) {
                prop_assert_eq!(parse_graph(&serialize_edge_list(&g)).unwrap(), g.clone());
                prop_assert_eq!(parse_graph(&serialize_json(&g)).unwrap(), g);
            }
        }
    }
}
