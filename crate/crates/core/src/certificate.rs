//! Sparse connectivity certificates, sparse partitions and weak-edge
//! detection.
//!
//! The certificate comes from a maximum-adjacency scan: vertices are
//! visited in order of largest attachment weight to the visited set, and
//! every edge `(x, y)` scanned from `x` is labelled with `q(e)`, the
//! attachment of `y` right after `e` is counted. The local edge
//! connectivity of `x` and `y` is at least `q(e)`, so an edge with
//! `q(e) > k` crosses no cut of value `k` or less. For unit weights the
//! edges with `q(e) <= k` are exactly the first `k` scan forests.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};
use crate::graph::{Components, Graph};

/// Edge set whose removal leaves `components`.
#[derive(Clone, Debug, PartialEq)]
pub struct PartitionResult {
    /// Sorted edge indices into the input graph.
    pub edges: Vec<usize>,
    /// Components of the input graph minus `edges`.
    pub components: Components,
}

impl PartitionResult {
    /// Number of components `r` left after removing the edges.
    pub fn r(&self) -> usize {
        self.components.count
    }

    pub fn weight(&self, g: &Graph) -> f64 {
        self.edges.iter().map(|&i| g.edge(i).weight).sum()
    }

    fn from_edges(g: &Graph, mut edges: Vec<usize>) -> Self {
        edges.sort_unstable();
        edges.dedup();
        let components = g.without_edges(&edges).0.connected_components();
        Self { edges, components }
    }
}

#[derive(PartialEq)]
struct Attachment {
    weight: f64,
    vertex: usize,
}

impl Eq for Attachment {}

impl Ord for Attachment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.weight
            .total_cmp(&other.weight)
            .then_with(|| other.vertex.cmp(&self.vertex))
    }
}

impl PartialOrd for Attachment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Maximum-adjacency scan labels `q(e)` for every edge. Ties are broken
/// toward the smaller vertex id; a new component starts at its smallest
/// unvisited vertex.
pub fn scan_thresholds(g: &Graph) -> Vec<f64> {
    let adj = g.adjacency();
    let mut attach = vec![0.0f64; g.n()];
    let mut visited = vec![false; g.n()];
    let mut q = vec![f64::NAN; g.m()];
    let mut heap = BinaryHeap::new();
    for start in 0..g.n() {
        if visited[start] {
            continue;
        }
        heap.push(Attachment {
            weight: 0.0,
            vertex: start,
        });
        while let Some(Attachment { weight, vertex: x }) = heap.pop() {
            if visited[x] || weight != attach[x] {
                continue;
            }
            visited[x] = true;
            for &(y, e) in &adj[x] {
                if visited[y] {
                    continue;
                }
                attach[y] += g.edge(e).weight;
                q[e] = attach[y];
                heap.push(Attachment {
                    weight: attach[y],
                    vertex: y,
                });
            }
        }
    }
    q
}

fn check_k(k: f64) -> Result<()> {
    if k.is_finite() && k > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "connectivity threshold k must be finite and positive, got {k}"
        )))
    }
}

/// Sparse `k`-certificate: total weight at most `k(n-1)`, containing every
/// edge that crosses a cut of value at most `k`. Returns sorted edge
/// indices.
pub fn sparse_certificate(g: &Graph, k: f64) -> Result<Vec<usize>> {
    check_k(k)?;
    Ok(certificate_edges(g, k))
}

fn certificate_edges(g: &Graph, k: f64) -> Vec<usize> {
    scan_thresholds(g)
        .into_iter()
        .enumerate()
        .filter(|&(_, q)| q <= k)
        .map(|(i, _)| i)
        .collect()
}

/// Sparse `k`-partition. Repeatedly takes a `k`-certificate and contracts
/// everything outside it until the remaining weight is at most `2k(n'-1)`
/// on the `n'` contracted vertices, then reports the surviving edges by
/// their index in `g`.
pub fn partition(g: &Graph, k: f64) -> Result<PartitionResult> {
    check_k(k)?;
    Ok(partition_unchecked(g, k))
}

fn partition_unchecked(g: &Graph, k: f64) -> PartitionResult {
    let mut cur = g.clone();
    let mut origin: Vec<usize> = (0..g.m()).collect();
    loop {
        let n = cur.n();
        if n <= 1 || cur.total_weight() <= 2.0 * k * (n - 1) as f64 {
            break;
        }
        let mut in_cert = vec![false; cur.m()];
        for i in certificate_edges(&cur, k) {
            in_cert[i] = true;
        }
        let outside: Vec<usize> = (0..cur.m()).filter(|&i| !in_cert[i]).collect();
        // weight above k(n-1) always leaves something outside the certificate
        debug_assert!(!outside.is_empty());
        let c = cur.contract(&outside);
        origin = c.edge_origin.iter().map(|&i| origin[i]).collect();
        cur = c.graph;
    }
    PartitionResult::from_edges(g, origin)
}

/// Number of rounds the weak-edge loop runs on an `n`-vertex graph:
/// `ceil(log2 n)`.
pub fn weak_edge_rounds(n: usize) -> usize {
    if n <= 1 {
        0
    } else {
        (usize::BITS - (n - 1).leading_zeros()) as usize
    }
}

/// Superset of the `k`-weak edges (strength below `k`). Each round removes
/// a sparse `2k`-partition from what is left of the graph.
pub fn weak_edges(g: &Graph, k: f64) -> Result<PartitionResult> {
    check_k(k)?;
    let mut removed = vec![false; g.m()];
    let mut out = Vec::new();
    for _ in 0..weak_edge_rounds(g.n()) {
        let (rest, origin) = g.edge_subgraph(|i| !removed[i]);
        if rest.m() == 0 {
            break;
        }
        for local in partition_unchecked(&rest, 2.0 * k).edges {
            removed[origin[local]] = true;
            out.push(origin[local]);
        }
    }
    Ok(PartitionResult::from_edges(g, out))
}
