// SPDX-License-Identifier: Apache-2.0

//! Undirected simple graphs with dense node ids.
//!
//! Node ids are assigned in insertion order (`0..n`), which the generators
//! rely on for O(1) uniform node choice. Each adjacency set is an
//! insertion-ordered hash set, so membership is O(1) and iteration order is
//! deterministic for a given construction history.

use std::collections::{HashMap, VecDeque};
use std::fmt::Write as _;

use indexmap::IndexSet;
use thiserror::Error;

pub type NodeId = usize;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("unknown node id {0}")]
    UnknownNode(NodeId),
    #[error("graph has no nodes")]
    Empty,
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Graph {
    adjacency: Vec<IndexSet<NodeId>>,
    edge_count: usize,
}

impl Graph {
    pub fn new() -> Self {
        Self::default()
    }

    /// A graph with `n` isolated nodes.
    pub fn with_nodes(n: usize) -> Self {
        Self {
            adjacency: vec![IndexSet::new(); n],
            edge_count: 0,
        }
    }

    pub fn node_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn is_empty(&self) -> bool {
        self.adjacency.is_empty()
    }

    pub fn nodes(&self) -> std::ops::Range<NodeId> {
        0..self.adjacency.len()
    }

    pub fn add_node(&mut self) -> NodeId {
        self.adjacency.push(IndexSet::new());
        self.adjacency.len() - 1
    }

    /// Adds the undirected edge `{i, j}`.
    ///
    /// Returns `Ok(false)` without touching the graph for self-loops and for
    /// edges that are already present.
    pub fn add_edge(&mut self, i: NodeId, j: NodeId) -> Result<bool, GraphError> {
        self.check(i)?;
        self.check(j)?;
        if i == j || self.adjacency[i].contains(&j) {
            return Ok(false);
        }
        self.adjacency[i].insert(j);
        self.adjacency[j].insert(i);
        self.edge_count += 1;
        Ok(true)
    }

    pub fn has_edge(&self, i: NodeId, j: NodeId) -> bool {
        self.adjacency.get(i).is_some_and(|s| s.contains(&j))
    }

    pub fn neighbors(&self, i: NodeId) -> Result<&IndexSet<NodeId>, GraphError> {
        self.adjacency.get(i).ok_or(GraphError::UnknownNode(i))
    }

    pub fn degree(&self, i: NodeId) -> Result<usize, GraphError> {
        self.neighbors(i).map(IndexSet::len)
    }

    /// Unchecked neighbor access for hot loops; panics on a bad id.
    pub(crate) fn adj(&self, i: NodeId) -> &IndexSet<NodeId> {
        &self.adjacency[i]
    }

    pub(crate) fn deg(&self, i: NodeId) -> usize {
        self.adjacency[i].len()
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.adjacency.iter().map(IndexSet::len).collect()
    }

    /// `2m / n`, or 0 for the empty graph.
    pub fn mean_degree(&self) -> f64 {
        if self.adjacency.is_empty() {
            0.0
        } else {
            2.0 * self.edge_count as f64 / self.adjacency.len() as f64
        }
    }

    /// Each edge once, as `(i, j)` with `i < j`.
    pub fn edges(&self) -> impl Iterator<Item = (NodeId, NodeId)> + '_ {
        self.adjacency
            .iter()
            .enumerate()
            .flat_map(|(i, nb)| nb.iter().filter(move |&&j| j > i).map(move |&j| (i, j)))
    }

    fn check(&self, i: NodeId) -> Result<(), GraphError> {
        if i < self.adjacency.len() {
            Ok(())
        } else {
            Err(GraphError::UnknownNode(i))
        }
    }

    /// Connected components in order of their smallest node id; each
    /// component lists its nodes in ascending order.
    pub fn connected_components(&self) -> Vec<Vec<NodeId>> {
        let n = self.node_count();
        let mut seen = vec![false; n];
        let mut components = Vec::new();
        let mut queue = VecDeque::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            queue.push_back(start);
            let mut members = Vec::new();
            while let Some(v) = queue.pop_front() {
                members.push(v);
                for &u in &self.adjacency[v] {
                    if !seen[u] {
                        seen[u] = true;
                        queue.push_back(u);
                    }
                }
            }
            members.sort_unstable();
            components.push(members);
        }
        components
    }

    pub fn is_connected(&self) -> bool {
        !self.is_empty() && self.connected_components().len() == 1
    }

    /// The largest component as a standalone graph with ids relabeled to
    /// `0..size` in ascending order of the original ids. Ties go to the
    /// component containing the smallest id.
    pub fn largest_component(&self) -> Result<Graph, GraphError> {
        let components = self.connected_components();
        let mut best: Option<&Vec<NodeId>> = None;
        for c in &components {
            if best.is_none_or(|b| c.len() > b.len()) {
                best = Some(c);
            }
        }
        best.map(|c| self.induced_subgraph(c))
            .ok_or(GraphError::Empty)
    }

    /// Subgraph induced by `nodes`, relabeled by position in `nodes`.
    pub fn induced_subgraph(&self, nodes: &[NodeId]) -> Graph {
        let index: HashMap<NodeId, NodeId> = nodes
            .iter()
            .enumerate()
            .map(|(new, &old)| (old, new))
            .collect();
        let mut sub = Graph::with_nodes(nodes.len());
        for (new_i, &old_i) in nodes.iter().enumerate() {
            for old_j in &self.adjacency[old_i] {
                if let Some(&new_j) = index.get(old_j) {
                    if new_i < new_j {
                        sub.adjacency[new_i].insert(new_j);
                        sub.adjacency[new_j].insert(new_i);
                        sub.edge_count += 1;
                    }
                }
            }
        }
        sub
    }

    /// Parses the whitespace-separated `u v` edge-list format.
    pub fn from_edge_list(text: &str) -> Result<EdgeList, GraphError> {
        EdgeList::parse(text)
    }

    /// Renders the graph as an edge list, one `i j` line per edge with `i < j`.
    pub fn to_edge_list(&self) -> String {
        let mut out = String::with_capacity(self.edge_count * 12);
        for (i, j) in self.edges() {
            let _ = writeln!(out, "{i} {j}");
        }
        out
    }
}

/// Result of parsing an edge-list file.
#[derive(Debug, Clone)]
pub struct EdgeList {
    pub graph: Graph,
    /// Original label of each compacted node id.
    pub labels: Vec<u64>,
    pub dropped_duplicates: usize,
    pub dropped_self_loops: usize,
}

impl EdgeList {
    pub fn dropped(&self) -> usize {
        self.dropped_duplicates + self.dropped_self_loops
    }

    /// Node labels are compacted to `0..n` in order of first appearance.
    /// Blank lines and lines starting with `#` are skipped.
    pub fn parse(text: &str) -> Result<Self, GraphError> {
        let mut graph = Graph::new();
        let mut labels = Vec::new();
        let mut ids: HashMap<u64, NodeId> = HashMap::new();
        let mut dropped_duplicates = 0;
        let mut dropped_self_loops = 0;

        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let line_no = lineno + 1;
            let mut tokens = line.split_whitespace();
            let (u, v) = match (tokens.next(), tokens.next(), tokens.next()) {
                (Some(u), Some(v), None) => (u, v),
                _ => {
                    return Err(GraphError::Parse {
                        line: line_no,
                        message: format!("expected two node ids, got {line:?}"),
                    })
                }
            };
            let parse = |tok: &str| {
                tok.parse::<u64>().map_err(|e| GraphError::Parse {
                    line: line_no,
                    message: format!("bad node id {tok:?}: {e}"),
                })
            };
            let (u, v) = (parse(u)?, parse(v)?);
            let mut intern = |label: u64| {
                *ids.entry(label).or_insert_with(|| {
                    labels.push(label);
                    graph.add_node()
                })
            };
            let (i, j) = (intern(u), intern(v));
            if i == j {
                dropped_self_loops += 1;
            } else if !graph.add_edge(i, j).expect("interned ids exist") {
                dropped_duplicates += 1;
            }
        }
        Ok(Self {
            graph,
            labels,
            dropped_duplicates,
            dropped_self_loops,
        })
    }
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::*;

    pub fn from_edges(n: usize, edges: &[(NodeId, NodeId)]) -> Graph {
        let mut g = Graph::with_nodes(n);
        for &(i, j) in edges {
            g.add_edge(i, j).unwrap();
        }
        g
    }

    pub fn complete(n: usize) -> Graph {
        let mut g = Graph::with_nodes(n);
        for i in 0..n {
            for j in i + 1..n {
                g.add_edge(i, j).unwrap();
            }
        }
        g
    }

    pub fn path(n: usize) -> Graph {
        let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        from_edges(n, &edges)
    }

    pub fn cycle(n: usize) -> Graph {
        let mut edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        edges.push((n - 1, 0));
        from_edges(n, &edges)
    }

    pub fn star(leaves: usize) -> Graph {
        let edges: Vec<_> = (1..=leaves).map(|i| (0, i)).collect();
        from_edges(leaves + 1, &edges)
    }
}

#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;

    fn assert_simple(g: &Graph) {
        let mut degree_sum = 0;
        for i in g.nodes() {
            let nb = g.neighbors(i).unwrap();
            assert!(!nb.contains(&i));
            for &j in nb {
                assert!(g.neighbors(j).unwrap().contains(&i));
            }
            degree_sum += nb.len();
        }
        assert_eq!(degree_sum, 2 * g.edge_count());
    }

    #[test]
    fn add_node_assigns_sequential_ids() {
        let mut g = Graph::new();
        assert_eq!(g.add_node(), 0);
        let mut g = Graph::with_nodes(5);
        let a = g.add_node();
        let b = g.add_node();
        assert_eq!(a, 5);
        assert_ne!(a, b);
    }

    #[test]
    fn add_edge_rejects_loops_and_duplicates() {
        let mut g = Graph::with_nodes(2);
        assert_eq!(g.add_edge(0, 1), Ok(true));
        assert_eq!(g.edge_count(), 1);
        assert_eq!(g.add_edge(0, 0), Ok(false));
        assert_eq!(g.add_edge(1, 0), Ok(false));
        assert_eq!(g.edge_count(), 1);
        assert_eq!(g.add_edge(0, 7), Err(GraphError::UnknownNode(7)));
        assert_simple(&g);
    }

    #[test]
    fn degrees() {
        let k3 = complete(3);
        assert!(k3.nodes().all(|i| k3.degree(i) == Ok(2)));
        let mut g = Graph::with_nodes(1);
        assert!(g.neighbors(0).unwrap().is_empty());
        assert_eq!(g.degree(0), Ok(0));
        assert_eq!(g.degree(3), Err(GraphError::UnknownNode(3)));
        g = star(3);
        assert_eq!(g.degree(0), Ok(3));
    }

    #[test]
    fn components() {
        let g = from_edges(4, &[(0, 1), (2, 3)]);
        let c = g.connected_components();
        assert_eq!(c, vec![vec![0, 1], vec![2, 3]]);

        let p = path(6);
        assert_eq!(p.connected_components().len(), 1);
        assert!(p.is_connected());

        assert!(Graph::new().connected_components().is_empty());
        assert_eq!(Graph::new().largest_component(), Err(GraphError::Empty));
    }

    #[test]
    fn largest_component_of_triangle_plus_isolated() {
        // isolated node first so relabeling is exercised
        let g = from_edges(4, &[(1, 2), (2, 3), (1, 3)]);
        let lc = g.largest_component().unwrap();
        assert_eq!(lc.node_count(), 3);
        assert_eq!(lc.edge_count(), 3);
        assert_simple(&lc);
        // brute-force reachability on the original: nodes 1..=3 reach each other, 0 reaches nobody
        for i in 1..4 {
            for j in 1..4 {
                assert!(i == j || g.has_edge(i, j));
            }
            assert!(!g.has_edge(0, i));
        }
    }

    #[test]
    fn edge_list_parse() {
        let el = Graph::from_edge_list("0 1\n1 2").unwrap();
        assert_eq!(el.graph.node_count(), 3);
        assert_eq!(el.graph.edge_count(), 2);

        let el = Graph::from_edge_list("0 1\n0 1\n1 1").unwrap();
        assert_eq!(el.graph.edge_count(), 1);
        assert_eq!(el.dropped(), 2);
        assert_eq!(el.dropped_duplicates, 1);
        assert_eq!(el.dropped_self_loops, 1);
    }

    #[test]
    fn edge_list_compacts_labels_in_first_appearance_order() {
        let el = Graph::from_edge_list("# header\n\n100 7\n  7\t42  \n").unwrap();
        assert_eq!(el.labels, vec![100, 7, 42]);
        assert!(el.graph.has_edge(0, 1));
        assert!(el.graph.has_edge(1, 2));
    }

    #[test]
    fn edge_list_errors_carry_line_numbers() {
        let err = Graph::from_edge_list("0 1\n# c\n1 x\n").unwrap_err();
        assert!(matches!(err, GraphError::Parse { line: 3, .. }), "{err}");
        let err = Graph::from_edge_list("0 1 2").unwrap_err();
        assert!(matches!(err, GraphError::Parse { line: 1, .. }));
        let err = Graph::from_edge_list("5").unwrap_err();
        assert!(matches!(err, GraphError::Parse { line: 1, .. }));
        assert!(Graph::from_edge_list("-1 2").is_err());
    }

    #[test]
    fn edge_list_round_trip() {
        let g = from_edges(5, &[(0, 1), (1, 2), (2, 0), (3, 4), (0, 4)]);
        let back = Graph::from_edge_list(&g.to_edge_list()).unwrap();
        let label = |v: NodeId| back.labels[v] as NodeId;
        let mut a: Vec<_> = g.edges().collect();
        let mut b: Vec<_> = back
            .graph
            .edges()
            .map(|(i, j)| (label(i).min(label(j)), label(i).max(label(j))))
            .collect();
        a.sort();
        b.sort();
        assert_eq!(a, b);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn arbitrary_edge_sequences_stay_simple(
                n in 1usize..30,
                pairs in proptest::collection::vec((0usize..30, 0usize..30), 0..120),
            ) {
                let mut g = Graph::with_nodes(n);
                for (i, j) in pairs {
                    let _ = g.add_edge(i % n, j % n);
                }
                assert_simple(&g);
                let sizes: usize = g.connected_components().iter().map(Vec::len).sum();
                prop_assert_eq!(sizes, n);
                let back = Graph::from_edge_list(&g.to_edge_list()).unwrap();
                prop_assert_eq!(back.graph.edge_count(), g.edge_count());
                prop_assert_eq!(back.dropped(), 0);
            }
        }
    }
}
