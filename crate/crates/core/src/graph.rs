//! Signed graphs with dense vertex ids.
//!
//! A pair of vertices may carry at most one edge of each sign, so a positive
//! and a negative edge between the same endpoints can coexist. Everything is
//! kept in ascending order so that iteration is deterministic.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::GraphError;

/// Edge sign. `Negative < Positive`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Sign {
    #[serde(rename = "-")]
    Negative,
    #[serde(rename = "+")]
    Positive,
}

impl Sign {
    pub fn flipped(self) -> Sign {
        match self {
            Sign::Negative => Sign::Positive,
            Sign::Positive => Sign::Negative,
        }
    }

    pub fn is_negative(self) -> bool {
        self == Sign::Negative
    }

    pub fn symbol(self) -> char {
        match self {
            Sign::Negative => '-',
            Sign::Positive => '+',
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.symbol())
    }
}

/// An undirected signed edge with `u < v`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub sign: Sign,
}

impl Edge {
    /// Builds an edge with endpoints in canonical order.
    pub fn new(a: usize, b: usize, sign: Sign) -> Edge {
        let (u, v) = if a < b { (a, b) } else { (b, a) };
        Edge { u, v, sign }
    }

    pub fn other(&self, x: usize) -> usize {
        if x == self.u {
            self.v
        } else {
            self.u
        }
    }
}

/// Immutable signed graph on vertices `0..n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "GraphRepr", try_from = "GraphRepr")]
pub struct SignedGraph {
    n: usize,
    edges: Vec<Edge>,
    adj: Vec<Vec<(usize, Sign)>>,
}

impl SignedGraph {
    /// The edgeless graph on `n` vertices.
    pub fn empty(n: usize) -> SignedGraph {
        SignedGraph { n, edges: Vec::new(), adj: vec![Vec::new(); n] }
    }

    /// Builds a graph, rejecting loops, out-of-range endpoints and repeated
    /// same-sign edges.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<SignedGraph, GraphError>
    where
        I: IntoIterator<Item = (usize, usize, Sign)>,
    {
        let mut set = BTreeSet::new();
        for (a, b, sign) in edges {
            if a == b {
                return Err(GraphError::Loop { vertex: a });
            }
            if a >= n || b >= n {
                return Err(GraphError::VertexOutOfRange { vertex: a.max(b), n });
            }
            let e = Edge::new(a, b, sign);
            if !set.insert(e) {
                return Err(GraphError::DuplicateEdge { u: e.u, v: e.v, sign });
            }
        }
        Ok(Self::from_sorted_unique(n, set.into_iter().collect()))
    }

    /// Like [`SignedGraph::from_edges`] but silently drops repeated edges.
    /// Loops and out-of-range endpoints are still errors.
    pub fn from_edges_dedup<I>(n: usize, edges: I) -> Result<SignedGraph, GraphError>
    where
        I: IntoIterator<Item = (usize, usize, Sign)>,
    {
        let mut set = BTreeSet::new();
        for (a, b, sign) in edges {
            if a == b {
                return Err(GraphError::Loop { vertex: a });
            }
            if a >= n || b >= n {
                return Err(GraphError::VertexOutOfRange { vertex: a.max(b), n });
            }
            set.insert(Edge::new(a, b, sign));
        }
        Ok(Self::from_sorted_unique(n, set.into_iter().collect()))
    }

    fn from_sorted_unique(n: usize, edges: Vec<Edge>) -> SignedGraph {
        let mut adj = vec![Vec::new(); n];
        for e in &edges {
            adj[e.u].push((e.v, e.sign));
            adj[e.v].push((e.u, e.sign));
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        SignedGraph { n, edges, adj }
    }

    /// Complete graph with every edge of the given sign.
    pub fn complete(n: usize, sign: Sign) -> SignedGraph {
        let edges = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v, sign)));
        Self::from_edges(n, edges).expect("complete graph is simple")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of signed edges; an opposite-sign pair counts twice.
    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// Incident `(neighbor, sign)` pairs, sorted.
    pub fn incident(&self, v: usize) -> &[(usize, Sign)] {
        &self.adj[v]
    }

    /// Number of incident signed edges.
    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    /// Distinct neighbors of `v`, ascending.
    pub fn neighbors(&self, v: usize) -> Vec<usize> {
        let mut out: Vec<usize> = self.adj[v].iter().map(|&(w, _)| w).collect();
        out.dedup();
        out
    }

    /// Neighbors of `v` reached through an edge of sign `sign`.
    pub fn signed_neighbors(&self, v: usize, sign: Sign) -> Vec<usize> {
        self.adj[v].iter().filter(|&&(_, s)| s == sign).map(|&(w, _)| w).collect()
    }

    pub fn adjacent(&self, u: usize, v: usize) -> bool {
        self.adj[u].iter().any(|&(w, _)| w == v)
    }

    pub fn has_edge(&self, u: usize, v: usize, sign: Sign) -> bool {
        self.adj[u].binary_search(&(v, sign)).is_ok()
    }

    /// True if some pair carries both a positive and a negative edge.
    pub fn has_opposite_pair(&self) -> bool {
        self.edges.windows(2).any(|w| w[0].u == w[1].u && w[0].v == w[1].v)
    }

    pub fn has_opposite_pair_between(&self, u: usize, v: usize) -> bool {
        self.has_edge(u, v, Sign::Positive) && self.has_edge(u, v, Sign::Negative)
    }

    pub fn positive_edge_count(&self) -> usize {
        self.edges.iter().filter(|e| e.sign == Sign::Positive).count()
    }

    /// Subgraph induced by `vertices`, relabelled to `0..len` in ascending
    /// order of the original ids.
    pub fn induced(&self, vertices: &[usize]) -> SignedGraph {
        let mut keep: Vec<usize> = vertices.to_vec();
        keep.sort_unstable();
        keep.dedup();
        let mut map = vec![usize::MAX; self.n];
        for (i, &v) in keep.iter().enumerate() {
            map[v] = i;
        }
        let edges = self
            .edges
            .iter()
            .filter(|e| map[e.u] != usize::MAX && map[e.v] != usize::MAX)
            .map(|e| Edge { u: map[e.u], v: map[e.v], sign: e.sign })
            .collect();
        Self::from_sorted_unique(keep.len(), edges)
    }

    /// Deletes `removed` and compacts ids preserving order. The returned map
    /// sends each old id to its new id, or `None` if deleted.
    pub fn without(&self, removed: &[usize]) -> (SignedGraph, Vec<Option<usize>>) {
        let mut gone = vec![false; self.n];
        for &v in removed {
            gone[v] = true;
        }
        let keep: Vec<usize> = (0..self.n).filter(|&v| !gone[v]).collect();
        let mut map = vec![None; self.n];
        for (i, &v) in keep.iter().enumerate() {
            map[v] = Some(i);
        }
        (self.induced(&keep), map)
    }

    /// Flips the sign of every edge with exactly one endpoint in `set`.
    pub fn switch(&self, set: &[usize]) -> SignedGraph {
        let mut inside = vec![false; self.n];
        for &v in set {
            inside[v] = true;
        }
        let mut edges: Vec<Edge> = self
            .edges
            .iter()
            .map(|e| {
                let sign = if inside[e.u] != inside[e.v] { e.sign.flipped() } else { e.sign };
                Edge { sign, ..*e }
            })
            .collect();
        edges.sort_unstable();
        Self::from_sorted_unique(self.n, edges)
    }

    /// Flips every sign.
    pub fn negated(&self) -> SignedGraph {
        let mut edges: Vec<Edge> = self.edges.iter().map(|e| Edge { sign: e.sign.flipped(), ..*e }).collect();
        edges.sort_unstable();
        Self::from_sorted_unique(self.n, edges)
    }

    /// Removes the listed edges (which must exist).
    pub fn without_edges(&self, removed: &[Edge]) -> Result<SignedGraph, GraphError> {
        let mut set: BTreeSet<Edge> = self.edges.iter().copied().collect();
        for e in removed {
            let e = Edge::new(e.u, e.v, e.sign);
            if !set.remove(&e) {
                return Err(GraphError::MissingEdge { u: e.u, v: e.v, sign: e.sign });
            }
        }
        Ok(Self::from_sorted_unique(self.n, set.into_iter().collect()))
    }

    /// Appends a vertex with id `n` and the given incident edges.
    pub fn with_new_vertex(&self, incident: &[(usize, Sign)]) -> Result<SignedGraph, GraphError> {
        let z = self.n;
        let edges = self.edges.iter().map(|e| (e.u, e.v, e.sign)).chain(incident.iter().map(|&(w, s)| (w, z, s)));
        Self::from_edges(self.n + 1, edges)
    }

    /// Disjoint union; the vertices of `other` are shifted by `self.n()`.
    pub fn disjoint_union(&self, other: &SignedGraph) -> SignedGraph {
        let off = self.n;
        let edges: Vec<Edge> = self
            .edges
            .iter()
            .copied()
            .chain(other.edges.iter().map(|e| Edge { u: e.u + off, v: e.v + off, sign: e.sign }))
            .collect();
        Self::from_sorted_unique(self.n + other.n, edges)
    }

    /// Connected components ordered by smallest member; members ascending.
    pub fn connected_components(&self) -> Vec<Vec<usize>> {
        self.components_avoiding(&[])
    }

    /// Components of the graph with `blocked` vertices removed (ids unchanged).
    pub fn components_avoiding(&self, blocked: &[usize]) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.n];
        for &b in blocked {
            seen[b] = true;
        }
        let mut out = Vec::new();
        let mut queue = VecDeque::new();
        for start in 0..self.n {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            queue.push_back(start);
            let mut comp = Vec::new();
            while let Some(x) = queue.pop_front() {
                comp.push(x);
                for &(y, _) in &self.adj[x] {
                    if !seen[y] {
                        seen[y] = true;
                        queue.push_back(y);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    pub fn component_count(&self) -> usize {
        self.connected_components().len()
    }

    /// The empty graph counts as connected.
    pub fn is_connected(&self) -> bool {
        self.component_count() <= 1
    }

    /// Whether `G - blocked` is connected and non-empty.
    pub fn connected_without(&self, blocked: &[usize]) -> bool {
        let comps = self.components_avoiding(blocked);
        comps.len() == 1
    }

    /// Vertices outside `set` adjacent to some member, with the sign used.
    pub fn boundary(&self, set: &[usize], sign: Sign) -> Vec<usize> {
        let mut inside = vec![false; self.n];
        for &v in set {
            inside[v] = true;
        }
        let mut out: Vec<usize> = set
            .iter()
            .flat_map(|&v| self.adj[v].iter())
            .filter(|&&(w, s)| s == sign && !inside[w])
            .map(|&(w, _)| w)
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }
}

#[derive(Serialize, Deserialize)]
struct GraphRepr {
    n: usize,
    edges: Vec<Edge>,
}

impl From<SignedGraph> for GraphRepr {
    fn from(g: SignedGraph) -> GraphRepr {
        GraphRepr { n: g.n, edges: g.edges }
    }
}

impl TryFrom<GraphRepr> for SignedGraph {
    type Error = GraphError;

    fn try_from(r: GraphRepr) -> Result<SignedGraph, GraphError> {
        SignedGraph::from_edges(r.n, r.edges.into_iter().map(|e| (e.u, e.v, e.sign)))
    }
}

/// Instance of the parameterized problem: a graph plus the parameter `k`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Instance {
    pub graph: SignedGraph,
    pub k: i64,
}

impl Instance {
    pub fn new(graph: SignedGraph, k: i64) -> Instance {
        Instance { graph, k }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn neg_path(n: usize) -> SignedGraph {
        SignedGraph::from_edges(n, (1..n).map(|v| (v - 1, v, Sign::Negative))).unwrap()
    }

    #[test]
    fn component_examples() {
        assert_eq!(SignedGraph::complete(5, Sign::Negative).connected_components().len(), 1);
        let two = SignedGraph::from_edges(4, [(0, 1, Sign::Negative), (2, 3, Sign::Negative)]).unwrap();
        assert_eq!(two.connected_components(), vec![vec![0, 1], vec![2, 3]]);
        assert!(SignedGraph::empty(0).connected_components().is_empty());
    }

    #[test]
    fn opposite_pairs_allowed_but_not_duplicates() {
        let g = SignedGraph::from_edges(2, [(0, 1, Sign::Negative), (1, 0, Sign::Positive)]).unwrap();
        assert_eq!(g.m(), 2);
        assert!(g.has_opposite_pair());
        assert_eq!(g.neighbors(0), vec![1]);
        let dup = SignedGraph::from_edges(2, [(0, 1, Sign::Negative), (1, 0, Sign::Negative)]);
        assert!(matches!(dup, Err(GraphError::DuplicateEdge { .. })));
        assert!(matches!(SignedGraph::from_edges(2, [(1, 1, Sign::Positive)]), Err(GraphError::Loop { vertex: 1 })));
    }

    #[test]
    fn switch_examples() {
        let g = neg_path(2);
        assert_eq!(g.switch(&[]), g);
        let s = g.switch(&[0]);
        assert!(s.has_edge(0, 1, Sign::Positive));
        assert_eq!(s.switch(&[0]), g);
    }

    #[test]
    fn without_compacts_in_order() {
        let g = neg_path(4);
        let (h, map) = g.without(&[1]);
        assert_eq!(map, vec![Some(0), None, Some(1), Some(2)]);
        assert_eq!(h.m(), 1);
        assert!(h.has_edge(1, 2, Sign::Negative));
    }

    #[test]
    fn boundary_by_sign() {
        let g = SignedGraph::from_edges(4, [(0, 1, Sign::Negative), (0, 2, Sign::Positive), (1, 3, Sign::Positive)])
            .unwrap();
        assert_eq!(g.boundary(&[0, 1], Sign::Positive), vec![2, 3]);
        assert!(g.boundary(&[0, 1], Sign::Negative).is_empty());
    }
}
