//! Simple undirected graphs with stable edge identifiers.
//!
//! Vertices are dense `u32` indices. Every edge carries an [`EdgeId`] that is
//! assigned once at ingestion and survives subgraph extraction, so elements of
//! a separating system built on a subgraph can be checked against the
//! original graph.

use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};

pub type VertexId = u32;

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EdgeId(pub u32);

impl fmt::Display for EdgeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e{}", self.0)
    }
}

/// An edge with `u < v`.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub id: EdgeId,
    pub u: VertexId,
    pub v: VertexId,
}

impl Edge {
    pub fn other(&self, x: VertexId) -> VertexId {
        if x == self.u {
            self.v
        } else {
            self.u
        }
    }

    pub fn touches(&self, x: VertexId) -> bool {
        self.u == x || self.v == x
    }
}

#[derive(Clone, Debug, Default)]
pub struct Graph {
    n: usize,
    /// Sorted by id.
    edges: Vec<Edge>,
    /// Per vertex, `(neighbor, edge)` sorted by neighbor.
    adj: Vec<Vec<(VertexId, EdgeId)>>,
}

impl Graph {
    /// Builds a graph from vertex pairs. Duplicate pairs (in either
    /// orientation) collapse onto the first occurrence; ids follow first
    /// occurrence order. The vertex count is one more than the largest label.
    pub fn from_edge_list<I>(pairs: I) -> Result<Graph>
    where
        I: IntoIterator<Item = (VertexId, VertexId)>,
    {
        let pairs: Vec<_> = pairs.into_iter().collect();
        let n = pairs
            .iter()
            .map(|&(a, b)| a.max(b) as usize + 1)
            .max()
            .unwrap_or(0);
        Graph::with_vertices(n, pairs)
    }

    /// Like [`Graph::from_edge_list`] but with an explicit vertex count, so
    /// isolated vertices are kept.
    pub fn with_vertices<I>(n: usize, pairs: I) -> Result<Graph>
    where
        I: IntoIterator<Item = (VertexId, VertexId)>,
    {
        let mut seen: HashMap<(VertexId, VertexId), EdgeId> = HashMap::new();
        let mut edges = Vec::new();
        for (a, b) in pairs {
            if a == b {
                return Err(Error::Loop(a));
            }
            if a as usize >= n || b as usize >= n {
                return Err(Error::VertexOutOfRange(a.max(b), n));
            }
            let key = (a.min(b), a.max(b));
            if seen.contains_key(&key) {
                continue;
            }
            let id = EdgeId(edges.len() as u32);
            seen.insert(key, id);
            edges.push(Edge { id, u: key.0, v: key.1 });
        }
        Ok(Graph::from_edges_unchecked(n, edges))
    }

    fn from_edges_unchecked(n: usize, edges: Vec<Edge>) -> Graph {
        let mut adj = vec![Vec::new(); n];
        for e in &edges {
            adj[e.u as usize].push((e.v, e.id));
            adj[e.v as usize].push((e.u, e.id));
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        Graph { n, edges, adj }
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    /// Edges in increasing id order.
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, id: EdgeId) -> Option<&Edge> {
        self.edge_index(id).map(|i| &self.edges[i])
    }

    /// Position of `id` in [`Graph::edges`].
    pub fn edge_index(&self, id: EdgeId) -> Option<usize> {
        self.edges.binary_search_by_key(&id, |e| e.id).ok()
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.adj[v as usize].len()
    }

    pub fn incident(&self, v: VertexId) -> &[(VertexId, EdgeId)] {
        &self.adj[v as usize]
    }

    pub fn neighbors(&self, v: VertexId) -> impl Iterator<Item = VertexId> + '_ {
        self.adj[v as usize].iter().map(|&(w, _)| w)
    }

    pub fn edge_between(&self, a: VertexId, b: VertexId) -> Option<EdgeId> {
        let list = self.adj.get(a as usize)?;
        list.binary_search_by_key(&b, |&(w, _)| w)
            .ok()
            .map(|i| list[i].1)
    }

    pub fn has_edge(&self, a: VertexId, b: VertexId) -> bool {
        self.edge_between(a, b).is_some()
    }

    /// Vertices of positive degree, ascending.
    pub fn active_vertices(&self) -> Vec<VertexId> {
        (0..self.n as VertexId)
            .filter(|&v| !self.adj[v as usize].is_empty())
            .collect()
    }

    /// Keeps the edges selected by `keep`; ids and the vertex count are
    /// unchanged.
    pub fn edge_subgraph<F>(&self, mut keep: F) -> Graph
    where
        F: FnMut(&Edge) -> bool,
    {
        let edges = self.edges.iter().filter(|e| keep(e)).copied().collect();
        Graph::from_edges_unchecked(self.n, edges)
    }

    /// Deletes every edge incident to a vertex in `removed` (a predicate over
    /// vertices).
    pub fn without_vertices<F>(&self, removed: F) -> Graph
    where
        F: Fn(VertexId) -> bool,
    {
        self.edge_subgraph(|e| !removed(e.u) && !removed(e.v))
    }

    /// Subgraph spanned by the given edge ids; unknown ids are an error.
    pub fn subgraph_of_ids(&self, ids: &[EdgeId]) -> Result<Graph> {
        let mut edges = Vec::with_capacity(ids.len());
        for &id in ids {
            let e = self.edge(id).ok_or(Error::UnknownEdge(id))?;
            edges.push(*e);
        }
        edges.sort_unstable_by_key(|e| e.id);
        edges.dedup_by_key(|e| e.id);
        Ok(Graph::from_edges_unchecked(self.n, edges))
    }

    /// Maps vertex pairs to edge ids of this graph.
    pub fn ids_of_pairs(&self, pairs: &[(VertexId, VertexId)]) -> Result<Vec<EdgeId>> {
        let mut ids = pairs
            .iter()
            .map(|&(a, b)| self.edge_between(a, b).ok_or(Error::MissingEdge(a, b)))
            .collect::<Result<Vec<_>>>()?;
        ids.sort_unstable();
        ids.dedup();
        Ok(ids)
    }

    /// Connected iff all vertices of positive degree lie in one component.
    pub fn is_connected_on_edges(&self) -> bool {
        let active = self.active_vertices();
        let Some(&start) = active.first() else {
            return true;
        };
        let mut seen = vec![false; self.n];
        let mut stack = vec![start];
        seen[start as usize] = true;
        let mut count = 0;
        while let Some(x) = stack.pop() {
            count += 1;
            for w in self.neighbors(x) {
                if !seen[w as usize] {
                    seen[w as usize] = true;
                    stack.push(w);
                }
            }
        }
        count == active.len()
    }
}

/// A graph read from text, with the original vertex labels.
#[derive(Clone, Debug)]
pub struct LabeledGraph {
    pub graph: Graph,
    pub labels: Vec<String>,
}

impl LabeledGraph {
    /// Parses the edge-list format: one edge per line, two whitespace
    /// separated labels; blank lines and lines starting with `#` are skipped.
    /// Vertex ids follow first appearance.
    pub fn parse(text: &str) -> Result<LabeledGraph> {
        let mut index: HashMap<String, VertexId> = HashMap::new();
        let mut labels = Vec::new();
        let mut pairs = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.len() != 2 {
                return Err(Error::Parse {
                    line: lineno + 1,
                    msg: format!("expected two vertex labels, found {}", fields.len()),
                });
            }
            if fields[0] == fields[1] {
                return Err(Error::Parse {
                    line: lineno + 1,
                    msg: format!("self-loop on {}", fields[0]),
                });
            }
            let mut id_of = |label: &str| {
                *index.entry(label.to_string()).or_insert_with(|| {
                    labels.push(label.to_string());
                    (labels.len() - 1) as VertexId
                })
            };
            let a = id_of(fields[0]);
            let b = id_of(fields[1]);
            pairs.push((a, b));
        }
        let graph = Graph::with_vertices(labels.len(), pairs)?;
        Ok(LabeledGraph { graph, labels })
    }

    /// Writes the edge list back using the original labels, in id order.
    pub fn to_edge_list(&self) -> String {
        let mut out = String::new();
        for e in self.graph.edges() {
            out.push_str(&self.labels[e.u as usize]);
            out.push(' ');
            out.push_str(&self.labels[e.v as usize]);
            out.push('\n');
        }
        out
    }

    /// Labels are the decimal vertex ids.
    pub fn from_graph(graph: Graph) -> LabeledGraph {
        let labels = (0..graph.vertex_count()).map(|v| v.to_string()).collect();
        LabeledGraph { graph, labels }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_input_gives_empty_graph() {
        let g = Graph::from_edge_list([]).unwrap();
        assert_eq!(g.vertex_count(), 0);
        assert_eq!(g.edge_count(), 0);
    }

    #[test]
    fn reversed_pair_is_deduplicated() {
        let g = Graph::from_edge_list([(1, 2), (2, 1)]).unwrap();
        assert_eq!(g.edge_count(), 1);
        assert_eq!(g.edges()[0], Edge { id: EdgeId(0), u: 1, v: 2 });
    }

    #[test]
    fn complete_graph_on_four_vertices() {
        let pairs = [(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)];
        let g = Graph::from_edge_list(pairs).unwrap();
        assert_eq!(g.edge_count(), 6);
        assert!((1..=4).all(|v| g.degree(v) == 3));
    }

    #[test]
    fn loops_are_rejected() {
        assert!(matches!(
            Graph::from_edge_list([(0, 1), (3, 3)]),
            Err(Error::Loop(3))
        ));
    }

    #[test]
    fn ids_survive_subgraph_extraction() {
        let g = Graph::from_edge_list([(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        let sub = g.without_vertices(|v| v == 0);
        let ids: Vec<_> = sub.edges().iter().map(|e| e.id).collect();
        assert_eq!(ids, vec![EdgeId(1), EdgeId(2)]);
        assert_eq!(sub.edge_between(2, 1), Some(EdgeId(1)));
        assert_eq!(sub.vertex_count(), 4);
    }

    #[test]
    fn parse_skips_comments_and_maps_labels() {
        let lg = LabeledGraph::parse("# header\nx y\n\ny z\n  # indented comment\nz x\n").unwrap();
        assert_eq!(lg.labels, vec!["x", "y", "z"]);
        assert_eq!(lg.graph.edge_count(), 3);
        assert_eq!(lg.to_edge_list(), "x y\ny z\nx z\n");
    }

    #[test]
    fn parse_reports_line_of_malformed_record() {
        let err = LabeledGraph::parse("a b\nc\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
        let err = LabeledGraph::parse("a a\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }));
    }
}
