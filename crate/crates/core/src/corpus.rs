//! Graph families used by the verification suite and tests.

use rand::Rng;

use crate::graph::{Edge, Graph};
use crate::rng;

pub fn cycle(n: usize) -> Graph {
    let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    Graph::from_unweighted(n, &edges).expect("cycle is well formed")
}

pub fn complete(n: usize) -> Graph {
    multi_complete(n, 1)
}

/// `K_n` with `copies` parallel unit edges per pair.
pub fn multi_complete(n: usize, copies: usize) -> Graph {
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            for _ in 0..copies {
                edges.push((i, j));
            }
        }
    }
    Graph::from_unweighted(n, &edges).expect("clique is well formed")
}

/// Two unit `K_k` on `0..k` and `k..2k` joined by the single edge
/// `(k-1, k)`, which is the last edge.
pub fn bridged_cliques(k: usize) -> Graph {
    let mut edges = Vec::new();
    for base in [0, k] {
        for i in 0..k {
            for j in i + 1..k {
                edges.push((base + i, base + j));
            }
        }
    }
    edges.push((k - 1, k));
    Graph::from_unweighted(2 * k, &edges).expect("bridged cliques are well formed")
}

/// Unit circulant: `i` is joined to `i ± o` for each offset `o`.
pub fn circulant(n: usize, offsets: &[usize]) -> Graph {
    let mut edges = Vec::new();
    for i in 0..n {
        for &o in offsets {
            edges.push((i, (i + o) % n));
        }
    }
    Graph::from_unweighted(n, &edges).expect("circulant is well formed")
}

/// `s = 0`, `t = 1`, and `paths` middle vertices each joined to both.
/// Edges alternate `(s, v_i)`, `(v_i, t)`.
pub fn double_star(paths: usize) -> Graph {
    let mut edges = Vec::new();
    for v in 2..2 + paths {
        edges.push((0, v));
        edges.push((v, 1));
    }
    Graph::from_unweighted(paths + 2, &edges).expect("double star is well formed")
}

/// How random graphs are weighted.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Weights {
    Unit,
    /// Uniform integers in `1..=max`.
    Integer(u32),
    /// Uniform reals in `[low, high)`.
    Real(f64, f64),
    /// `n^3` with probability one half, otherwise 1.
    Spread,
}

/// Erdős–Rényi `G(n, p)` from a fixed seed.
pub fn random_graph(n: usize, p: f64, weights: Weights, seed: u64) -> Graph {
    let mut r = rng::keyed(seed, 0);
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if r.random::<f64>() < p {
                let w = match weights {
                    Weights::Unit => 1.0,
                    Weights::Integer(max) => r.random_range(1..=max) as f64,
                    Weights::Real(lo, hi) => r.random_range(lo..hi),
                    Weights::Spread => {
                        if r.random::<bool>() {
                            (n * n * n) as f64
                        } else {
                            1.0
                        }
                    }
                };
                edges.push(Edge::new(i, j, w));
            }
        }
    }
    Graph::new(n, edges).expect("random graph is well formed")
}

/// Random graph with about `m` distinct unit edges.
pub fn random_sparse(n: usize, m: usize, seed: u64) -> Graph {
    let p = m as f64 / (n * (n - 1) / 2) as f64;
    random_graph(n, p, Weights::Unit, seed)
}

#[derive(Clone, Debug)]
pub struct NamedGraph {
    pub name: String,
    pub graph: Graph,
}

impl NamedGraph {
    fn new(name: impl Into<String>, graph: Graph) -> Self {
        Self {
            name: name.into(),
            graph,
        }
    }
}

/// Cycles `C_4..C_12`, cliques `K_4..K_8`, bridged cliques, the double
/// star, and 50 seeded random graphs on at most 12 vertices (25 unit, 25
/// weighted).
pub fn standard_corpus() -> Vec<NamedGraph> {
    let mut out = Vec::new();
    for n in 4..=12 {
        out.push(NamedGraph::new(format!("C{n}"), cycle(n)));
    }
    for n in 4..=8 {
        out.push(NamedGraph::new(format!("K{n}"), complete(n)));
    }
    for k in [3, 4, 5] {
        out.push(NamedGraph::new(format!("bridged-K{k}"), bridged_cliques(k)));
    }
    out.push(NamedGraph::new("double-star-5", double_star(5)));
    out.extend(random_corpus(50));
    out
}

/// The first `count` seeded random graphs of the standard corpus.
pub fn random_corpus(count: usize) -> Vec<NamedGraph> {
    (0..count)
        .map(|i| {
            let seed = 1000 + i as u64;
            let mut r = rng::keyed(seed, 1);
            let n = r.random_range(5..=12);
            let p = r.random_range(0.3..0.8);
            let weights = match i % 4 {
                0 | 2 => Weights::Unit,
                1 => Weights::Integer(8),
                _ if i % 8 == 3 => Weights::Real(0.5, 5.0),
                _ => Weights::Spread,
            };
            let tag = match weights {
                Weights::Unit => "unit",
                Weights::Integer(_) => "int",
                Weights::Real(..) => "real",
                Weights::Spread => "spread",
            };
            NamedGraph::new(
                format!("er-{tag}-{i}-n{n}"),
                random_graph(n, p, weights, seed),
            )
        })
        .collect()
}

/// A small corpus for quick checks.
pub fn small_corpus() -> Vec<NamedGraph> {
    let mut out = vec![
        NamedGraph::new("C5", cycle(5)),
        NamedGraph::new("C8", cycle(8)),
        NamedGraph::new("K5", complete(5)),
        NamedGraph::new("bridged-K4", bridged_cliques(4)),
        NamedGraph::new("double-star-4", double_star(4)),
        NamedGraph::new("circulant-10", circulant(10, &[1, 2])),
    ];
    out.extend(random_corpus(8));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corpus_shapes() {
        assert_eq!(cycle(5).m(), 5);
        assert_eq!(complete(6).m(), 15);
        assert_eq!(bridged_cliques(4).m(), 13);
        assert_eq!(circulant(16, &[1, 2]).m(), 32);
        assert!(circulant(16, &[1, 2])
            .weighted_degrees()
            .iter()
            .all(|&d| d == 4.0));
        assert_eq!(double_star(5).m(), 10);
        let c = standard_corpus();
        let unit = c.iter().filter(|g| g.name.starts_with("er-unit")).count();
        assert_eq!(unit, 25);
        assert!(c.iter().all(|g| g.graph.n() <= 12));
    }

    #[test]
    fn random_graphs_are_reproducible() {
        let a = random_graph(10, 0.5, Weights::Integer(5), 3);
        let b = random_graph(10, 0.5, Weights::Integer(5), 3);
        assert_eq!(a, b);
        assert_ne!(a, random_graph(10, 0.5, Weights::Integer(5), 4));
    }
}
