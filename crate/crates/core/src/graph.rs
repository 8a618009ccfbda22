//! Weighted undirected multigraphs.
//!
//! Vertices are dense ids `0..n`. Edges are addressed by their position in
//! the edge list, so parallel edges stay distinguishable through sampling,
//! splitting and contraction. Self-loops never affect a cut and are dropped
//! on construction.

use crate::error::{Error, Result};
use crate::union_find::UnionFind;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub weight: f64,
}

impl Edge {
    pub fn new(u: usize, v: usize, weight: f64) -> Self {
        Self { u, v, weight }
    }

    /// The endpoint opposite to `x`.
    pub fn other(&self, x: usize) -> usize {
        if self.u == x {
            self.v
        } else {
            self.u
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Graph {
    n: usize,
    edges: Vec<Edge>,
}

/// Connected-component labeling: `labels[v]` is in `0..count`, numbered in
/// order of each component's smallest vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Components {
    pub labels: Vec<usize>,
    pub count: usize,
}

impl Components {
    pub fn same(&self, a: usize, b: usize) -> bool {
        self.labels[a] == self.labels[b]
    }
}

/// One side of a bipartition together with the weight crossing it.
#[derive(Clone, Debug, PartialEq)]
pub struct Cut {
    pub side: Vec<bool>,
    pub value: f64,
}

impl Cut {
    pub fn new(g: &Graph, side: Vec<bool>) -> Result<Self> {
        let value = g.cut_value(&side)?;
        Ok(Self { side, value })
    }

    pub fn contains(&self, v: usize) -> bool {
        self.side[v]
    }
}

/// Result of contracting an edge set.
#[derive(Clone, Debug)]
pub struct Contraction {
    pub graph: Graph,
    /// `vertex_map[v]` is the contracted vertex that old vertex `v` became.
    pub vertex_map: Vec<usize>,
    /// `edge_origin[i]` is the index in the input graph of contracted edge `i`.
    pub edge_origin: Vec<usize>,
}

/// A subgraph carrying the ids it had in its parent graph.
#[derive(Clone, Debug)]
pub struct Subgraph {
    pub graph: Graph,
    /// Parent vertex id of each local vertex.
    pub vertices: Vec<usize>,
    /// Parent edge index of each local edge.
    pub edge_origin: Vec<usize>,
}

fn check_weight(edge: usize, weight: f64) -> Result<()> {
    if weight.is_finite() && weight > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidWeight { edge, weight })
    }
}

impl Graph {
    /// Builds a graph, validating endpoints and weights. Self-loops are
    /// silently dropped, which shifts the positions of later edges.
    pub fn new(n: usize, edges: impl IntoIterator<Item = Edge>) -> Result<Self> {
        let mut kept = Vec::new();
        for (i, e) in edges.into_iter().enumerate() {
            for x in [e.u, e.v] {
                if x >= n {
                    return Err(Error::VertexOutOfRange { vertex: x, n });
                }
            }
            check_weight(i, e.weight)?;
            if e.u != e.v {
                kept.push(e);
            }
        }
        Ok(Self { n, edges: kept })
    }

    pub fn from_weighted(n: usize, edges: &[(usize, usize, f64)]) -> Result<Self> {
        Self::new(n, edges.iter().map(|&(u, v, w)| Edge::new(u, v, w)))
    }

    /// Unit-weight graph.
    pub fn from_unweighted(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        Self::new(n, edges.iter().map(|&(u, v)| Edge::new(u, v, 1.0)))
    }

    pub fn empty(n: usize) -> Self {
        Self {
            n,
            edges: Vec::new(),
        }
    }

    /// Construction for edges already known to be valid loop-free edges.
    pub(crate) fn from_parts(n: usize, edges: Vec<Edge>) -> Self {
        debug_assert!(edges
            .iter()
            .all(|e| e.u < n && e.v < n && e.u != e.v && e.weight > 0.0));
        Self { n, edges }
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

    pub fn edge(&self, i: usize) -> &Edge {
        &self.edges[i]
    }

    pub fn weights(&self) -> Vec<f64> {
        self.edges.iter().map(|e| e.weight).collect()
    }

    pub fn total_weight(&self) -> f64 {
        self.edges.iter().map(|e| e.weight).sum()
    }

    pub fn is_unweighted(&self) -> bool {
        self.edges.iter().all(|e| e.weight == 1.0)
    }

    pub fn has_integer_weights(&self) -> bool {
        self.edges.iter().all(|e| e.weight.fract() == 0.0)
    }

    pub fn min_weight(&self) -> Option<f64> {
        self.edges.iter().map(|e| e.weight).reduce(f64::min)
    }

    /// Incidence lists of `(neighbor, edge index)`.
    pub fn adjacency(&self) -> Vec<Vec<(usize, usize)>> {
        let mut adj = vec![Vec::new(); self.n];
        for (i, e) in self.edges.iter().enumerate() {
            adj[e.u].push((e.v, i));
            adj[e.v].push((e.u, i));
        }
        adj
    }

    pub fn weighted_degrees(&self) -> Vec<f64> {
        let mut deg = vec![0.0; self.n];
        for e in &self.edges {
            deg[e.u] += e.weight;
            deg[e.v] += e.weight;
        }
        deg
    }

    /// Total weight of edges with exactly one endpoint in `side`.
    pub fn cut_value(&self, side: &[bool]) -> Result<f64> {
        if side.len() != self.n {
            return Err(Error::LengthMismatch {
                what: "cut side",
                expected: self.n,
                actual: side.len(),
            });
        }
        let inside = side.iter().filter(|&&b| b).count();
        if inside == 0 || inside == self.n {
            return Err(Error::InvalidCut);
        }
        Ok(self.crossing_weight(side))
    }

    /// Crossing weight without the properness check.
    pub(crate) fn crossing_weight(&self, side: &[bool]) -> f64 {
        self.edges
            .iter()
            .filter(|e| side[e.u] != side[e.v])
            .map(|e| e.weight)
            .sum()
    }

    pub fn connected_components(&self) -> Components {
        let mut uf = UnionFind::new(self.n);
        for e in &self.edges {
            uf.union(e.u, e.v);
        }
        let count = uf.count();
        Components {
            labels: uf.labels(),
            count,
        }
    }

    /// Contracts every edge in `subset`. Resulting self-loops are removed,
    /// parallel edges are kept.
    pub fn contract(&self, subset: &[usize]) -> Contraction {
        let mut uf = UnionFind::new(self.n);
        for &i in subset {
            let e = &self.edges[i];
            uf.union(e.u, e.v);
        }
        self.contract_with(&mut uf)
    }

    /// Contracts along the sets of an existing union-find over the vertices.
    pub(crate) fn contract_with(&self, uf: &mut UnionFind) -> Contraction {
        debug_assert_eq!(uf.len(), self.n);
        let vertex_map = uf.labels();
        let n = uf.count();
        let mut edges = Vec::new();
        let mut edge_origin = Vec::new();
        for (i, e) in self.edges.iter().enumerate() {
            let (a, b) = (vertex_map[e.u], vertex_map[e.v]);
            if a != b {
                edges.push(Edge::new(a, b, e.weight));
                edge_origin.push(i);
            }
        }
        Contraction {
            graph: Graph::from_parts(n, edges),
            vertex_map,
            edge_origin,
        }
    }

    /// Pointwise product of the weight vector with `factors`.
    pub fn scale(&self, factors: &[f64]) -> Result<Graph> {
        if factors.len() != self.m() {
            return Err(Error::LengthMismatch {
                what: "scale factors",
                expected: self.m(),
                actual: factors.len(),
            });
        }
        let mut edges = Vec::with_capacity(self.m());
        for (i, (e, &f)) in self.edges.iter().zip(factors).enumerate() {
            if !(f.is_finite() && f > 0.0) {
                return Err(Error::InvalidParameter(format!(
                    "scale factor {f} for edge {i} must be finite and positive"
                )));
            }
            let w = e.weight * f;
            check_weight(i, w)?;
            edges.push(Edge::new(e.u, e.v, w));
        }
        Ok(Graph::from_parts(self.n, edges))
    }

    /// Graph sum: the edge list of `self` followed by that of `other`.
    pub fn add(&self, other: &Graph) -> Result<Graph> {
        if self.n != other.n {
            return Err(Error::VertexCountMismatch {
                left: self.n,
                right: other.n,
            });
        }
        let mut edges = self.edges.clone();
        edges.extend_from_slice(&other.edges);
        Ok(Graph::from_parts(self.n, edges))
    }

    /// Same vertex set, only the edges for which `keep` holds.
    pub fn edge_subgraph(&self, mut keep: impl FnMut(usize) -> bool) -> (Graph, Vec<usize>) {
        let mut edges = Vec::new();
        let mut origin = Vec::new();
        for (i, e) in self.edges.iter().enumerate() {
            if keep(i) {
                edges.push(*e);
                origin.push(i);
            }
        }
        (Graph::from_parts(self.n, edges), origin)
    }

    /// Copy of the graph without the listed edges.
    pub fn without_edges(&self, removed: &[usize]) -> (Graph, Vec<usize>) {
        let mut drop = vec![false; self.m()];
        for &i in removed {
            drop[i] = true;
        }
        self.edge_subgraph(|i| !drop[i])
    }

    /// The connected components that contain at least one edge, each as a
    /// standalone graph.
    pub fn nontrivial_components(&self) -> Vec<Subgraph> {
        let comps = self.connected_components();
        let mut local = vec![usize::MAX; self.n];
        let mut parts: Vec<Subgraph> = Vec::new();
        let mut part_of_label = vec![usize::MAX; comps.count];
        for (i, e) in self.edges.iter().enumerate() {
            let label = comps.labels[e.u];
            if part_of_label[label] == usize::MAX {
                part_of_label[label] = parts.len();
                parts.push(Subgraph {
                    graph: Graph::empty(0),
                    vertices: Vec::new(),
                    edge_origin: Vec::new(),
                });
            }
            let part = &mut parts[part_of_label[label]];
            for x in [e.u, e.v] {
                if local[x] == usize::MAX {
                    local[x] = part.vertices.len();
                    part.vertices.push(x);
                }
            }
            part.graph
                .edges
                .push(Edge::new(local[e.u], local[e.v], e.weight));
            part.edge_origin.push(i);
        }
        for part in &mut parts {
            part.graph.n = part.vertices.len();
        }
        parts
    }
}
