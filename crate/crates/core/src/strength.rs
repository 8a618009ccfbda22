//! Edge strength lower bounds.
//!
//! [`estimation`] peels weak edges level by level, doubling the threshold
//! each time; [`window_estimation`] localizes that computation to windows
//! of the maximum-spanning-tree bounds from [`mst_bounds`] so arbitrary
//! weights need only `O(log n)` levels per window.

use std::collections::HashMap;

use crate::certificate::weak_edges;
use crate::error::{Error, Result};
use crate::graph::{Edge, Graph};
use crate::oracle;
use crate::union_find::UnionFind;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LabelKind {
    Exact,
    Estimated,
}

/// Per-edge strength values, indexed like the graph's edges.
#[derive(Clone, Debug, PartialEq)]
pub struct StrengthLabels {
    pub labels: Vec<f64>,
    pub kind: LabelKind,
}

impl StrengthLabels {
    pub fn new(labels: Vec<f64>, kind: LabelKind) -> Self {
        Self { labels, kind }
    }

    /// Checks that there is one finite positive label per edge of `g`.
    pub fn validate(&self, g: &Graph) -> Result<()> {
        if self.labels.len() != g.m() {
            return Err(Error::LengthMismatch {
                what: "strength labels",
                expected: g.m(),
                actual: self.labels.len(),
            });
        }
        match self
            .labels
            .iter()
            .position(|&k| !(k.is_finite() && k > 0.0))
        {
            Some(edge) => Err(Error::InvalidLabel {
                edge,
                label: self.labels[edge],
            }),
            None => Ok(()),
        }
    }

    /// `Σ u_e / k_e`.
    pub fn cost(&self, g: &Graph) -> f64 {
        g.edges()
            .iter()
            .zip(&self.labels)
            .map(|(e, k)| e.weight / k)
            .sum()
    }

    pub fn min(&self) -> Option<f64> {
        self.labels.iter().copied().reduce(f64::min)
    }

    pub fn max(&self) -> Option<f64> {
        self.labels.iter().copied().reduce(f64::max)
    }
}

/// Assigns strength lower bounds to every edge of `g`, assuming every edge
/// has strength at least `k0`. Use `k0 = 1` for unit-weight graphs.
pub fn estimation(g: &Graph, k0: f64) -> Result<StrengthLabels> {
    if !(k0.is_finite() && k0 > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "starting strength must be finite and positive, got {k0}"
        )));
    }
    let mut labels = vec![f64::NAN; g.m()];
    for part in g.nontrivial_components() {
        estimate_component(&part.graph, &part.edge_origin, k0, &mut labels)?;
    }
    debug_assert!(labels.iter().all(|k| k.is_finite()));
    Ok(StrengthLabels::new(labels, LabelKind::Estimated))
}

/// One level for a connected graph `h`: label the `2k`-weak candidates with
/// `k`, then recurse on what stays connected with `2k`.
fn estimate_component(h: &Graph, origin: &[usize], k: f64, labels: &mut [f64]) -> Result<()> {
    let weak = weak_edges(h, 2.0 * k)?;
    if weak.edges.is_empty() && k > h.total_weight() {
        // every edge is 2k-weak here, so weak_edges must have found some
        return Err(Error::NoProgress { k });
    }
    for &e in &weak.edges {
        labels[origin[e]] = k;
    }
    let (rest, rest_origin) = h.without_edges(&weak.edges);
    for part in rest.nontrivial_components() {
        let ids: Vec<usize> = part
            .edge_origin
            .iter()
            .map(|&i| origin[rest_origin[i]])
            .collect();
        estimate_component(&part.graph, &ids, 2.0 * k, labels)?;
    }
    Ok(())
}

/// For each edge, the minimum weight on the maximum-spanning-forest path
/// between its endpoints, with parallel edges merged into one edge per
/// vertex pair. Satisfies `d_e <= k_e <= n² d_e`.
#[derive(Clone, Debug, PartialEq)]
pub struct MstBounds {
    pub d: Vec<f64>,
}

/// Kruskal in decreasing weight order over the pair-merged graph, then
/// path minima over the forest by binary lifting. Tree pairs get their
/// merged weight.
pub fn mst_bounds(g: &Graph) -> MstBounds {
    let n = g.n();
    let mut slot: HashMap<(usize, usize), usize> = HashMap::new();
    let mut pairs: Vec<(usize, usize, f64)> = Vec::new();
    let pair_of: Vec<usize> = g
        .edges()
        .iter()
        .map(|e| {
            let key = (e.u.min(e.v), e.u.max(e.v));
            let j = *slot.entry(key).or_insert_with(|| {
                pairs.push((key.0, key.1, 0.0));
                pairs.len() - 1
            });
            pairs[j].2 += e.weight;
            j
        })
        .collect();

    let mut order: Vec<usize> = (0..pairs.len()).collect();
    order.sort_by(|&a, &b| pairs[b].2.total_cmp(&pairs[a].2).then(a.cmp(&b)));
    let mut uf = UnionFind::new(n);
    let mut tree = vec![false; pairs.len()];
    let mut forest: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
    for &j in &order {
        let (u, v, w) = pairs[j];
        if uf.union(u, v) {
            tree[j] = true;
            forest[u].push((v, w));
            forest[v].push((u, w));
        }
    }

    let lifter = PathMin::new(&forest);
    let pair_d: Vec<f64> = pairs
        .iter()
        .zip(&tree)
        .map(|(&(u, v, w), &t)| if t { w } else { lifter.query(u, v) })
        .collect();
    MstBounds {
        d: pair_of.iter().map(|&j| pair_d[j]).collect(),
    }
}

/// Path-minimum queries on a weighted forest.
struct PathMin {
    depth: Vec<usize>,
    // up[j][v]: 2^j-th ancestor of v; low[j][v]: min weight on that climb
    up: Vec<Vec<usize>>,
    low: Vec<Vec<f64>>,
}

impl PathMin {
    fn new(forest: &[Vec<(usize, f64)>]) -> Self {
        let n = forest.len();
        let levels = (usize::BITS - n.max(1).leading_zeros()) as usize;
        let mut depth = vec![0; n];
        let mut parent = (0..n).collect::<Vec<_>>();
        let mut pw = vec![f64::INFINITY; n];
        let mut seen = vec![false; n];
        for root in 0..n {
            if seen[root] {
                continue;
            }
            seen[root] = true;
            let mut stack = vec![root];
            while let Some(x) = stack.pop() {
                for &(y, w) in &forest[x] {
                    if !seen[y] {
                        seen[y] = true;
                        parent[y] = x;
                        pw[y] = w;
                        depth[y] = depth[x] + 1;
                        stack.push(y);
                    }
                }
            }
        }
        let mut up = vec![parent];
        let mut low = vec![pw];
        for j in 1..levels {
            let (pu, pl) = (&up[j - 1], &low[j - 1]);
            let nu: Vec<usize> = (0..n).map(|v| pu[pu[v]]).collect();
            let nl: Vec<f64> = (0..n).map(|v| pl[v].min(pl[pu[v]])).collect();
            up.push(nu);
            low.push(nl);
        }
        Self { depth, up, low }
    }

    fn query(&self, mut a: usize, mut b: usize) -> f64 {
        let mut best = f64::INFINITY;
        if self.depth[a] < self.depth[b] {
            std::mem::swap(&mut a, &mut b);
        }
        let mut diff = self.depth[a] - self.depth[b];
        let mut j = 0;
        while diff > 0 {
            if diff & 1 == 1 {
                best = best.min(self.low[j][a]);
                a = self.up[j][a];
            }
            diff >>= 1;
            j += 1;
        }
        if a == b {
            return best;
        }
        for j in (0..self.up.len()).rev() {
            if self.up[j][a] != self.up[j][b] {
                best = best.min(self.low[j][a]).min(self.low[j][b]);
                a = self.up[j][a];
                b = self.up[j][b];
            }
        }
        best.min(self.low[0][a]).min(self.low[0][b])
    }
}

/// Strength lower bounds for arbitrary positive weights.
///
/// Edges are admitted in decreasing order of `d_e`. In a phase with
/// `D = max d_e` over unlabelled edges, accumulated edges with
/// `d_e > n²D` are contracted, every edge with `d_e >= D/n` is admitted,
/// and [`estimation`] runs on the accumulated graph from `D/n`. Only the
/// labels of edges admitted in that phase are kept.
pub fn window_estimation(g: &Graph) -> Result<StrengthLabels> {
    let m = g.m();
    let n = g.n() as f64;
    let d = mst_bounds(g).d;
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&a, &b| d[b].total_cmp(&d[a]).then(a.cmp(&b)));

    let mut labels = vec![f64::NAN; m];
    let mut uf = UnionFind::new(g.n());
    let mut active: Vec<usize> = Vec::new();
    let mut next = 0;
    while next < m {
        let top = d[order[next]];
        let heavy = n * n * top;
        active.retain(|&i| {
            if d[i] > heavy {
                let e = g.edge(i);
                uf.union(e.u, e.v);
                false
            } else {
                true
            }
        });
        let floor = top / n;
        let first_new = active.len();
        while next < m && d[order[next]] >= floor {
            active.push(order[next]);
            next += 1;
        }

        let map = uf.labels();
        let mut edges = Vec::with_capacity(active.len());
        let mut slot = vec![usize::MAX; active.len()];
        for (j, &i) in active.iter().enumerate() {
            let e = g.edge(i);
            let (a, b) = (map[e.u], map[e.v]);
            if a != b {
                slot[j] = edges.len();
                edges.push(Edge::new(a, b, e.weight));
            }
        }
        let contracted = Graph::from_parts(uf.count(), edges);
        let phase = estimation(&contracted, floor)?;
        for (j, &i) in active.iter().enumerate().skip(first_new) {
            labels[i] = match slot[j] {
                usize::MAX => {
                    // cannot happen: a new edge's endpoints are never joined
                    // by edges with d > n²D. d_e is still a valid bound.
                    debug_assert!(false, "new edge {i} contracted away");
                    d[i]
                }
                s => phase.labels[s],
            };
        }
    }
    Ok(StrengthLabels::new(labels, LabelKind::Estimated))
}

/// Exact strengths by brute force, for graphs with at most `cap` vertices.
pub fn exact_strengths(g: &Graph, cap: usize) -> Result<StrengthLabels> {
    let labels = oracle::oracle_strengths_capped(g, cap)?;
    Ok(StrengthLabels::new(labels, LabelKind::Exact))
}
