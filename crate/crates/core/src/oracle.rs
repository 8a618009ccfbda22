//! Brute-force ground truth for small graphs.
//!
//! Everything here enumerates vertex subsets and bipartitions directly, so
//! it shares no logic with the certificate, estimation or flow code it is
//! used to check. Cut values are maintained incrementally along a Gray
//! code, one vertex move at a time.

use rand::Rng;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::rng;

/// Default vertex limit for strength and connectivity enumeration.
pub const DEFAULT_ORACLE_CAP: usize = 14;
/// Vertex limit for full cut enumeration.
pub const CUT_ENUMERATION_CAP: usize = 20;

fn check_cap(g: &Graph, cap: usize) -> Result<()> {
    if g.n() > cap {
        Err(Error::SizeCap { n: g.n(), cap })
    } else {
        Ok(())
    }
}

/// Aggregated symmetric weight matrix.
fn weight_matrix(g: &Graph) -> Vec<Vec<f64>> {
    let mut w = vec![vec![0.0; g.n()]; g.n()];
    for e in g.edges() {
        w[e.u][e.v] += e.weight;
        w[e.v][e.u] += e.weight;
    }
    w
}

/// Visits every bipartition of `verts` with `verts[0]` on the outside,
/// passing the inside as a bitmask over positions in `verts` and the
/// crossing weight of the induced subgraph.
fn for_each_cut(w: &[Vec<f64>], verts: &[usize], mut visit: impl FnMut(u32, f64)) {
    let k = verts.len();
    if k < 2 {
        return;
    }
    let mut inside: u32 = 0;
    let mut value = 0.0;
    for step in 1u32..(1u32 << (k - 1)) {
        let pos = step.trailing_zeros() as usize + 1;
        let v = verts[pos];
        let was_in = inside >> pos & 1 == 1;
        for (j, &u) in verts.iter().enumerate() {
            if j == pos {
                continue;
            }
            let u_in = inside >> j & 1 == 1;
            if u_in == was_in {
                value += w[v][u];
            } else {
                value -= w[v][u];
            }
        }
        inside ^= 1 << pos;
        visit(inside, value);
    }
}

fn induced_connectivity(w: &[Vec<f64>], verts: &[usize]) -> f64 {
    let mut best = f64::INFINITY;
    for_each_cut(w, verts, |_, value| best = best.min(value));
    best
}

/// Exact strengths with the default cap.
pub fn oracle_strengths(g: &Graph) -> Result<Vec<f64>> {
    oracle_strengths_capped(g, DEFAULT_ORACLE_CAP)
}

/// `k_e` = max over vertex sets `W` containing both endpoints of the
/// minimum cut of the induced subgraph `g[W]`.
pub fn oracle_strengths_capped(g: &Graph, cap: usize) -> Result<Vec<f64>> {
    check_cap(g, cap.min(30))?;
    let n = g.n();
    let w = weight_matrix(g);
    let mut best = vec![0.0f64; g.m()];
    // vertex-pair bounds: the pair itself is a candidate W
    for (i, e) in g.edges().iter().enumerate() {
        best[i] = w[e.u][e.v];
    }
    let mut masks: Vec<u32> = (0..1u32 << n).filter(|m| m.count_ones() >= 3).collect();
    masks.sort_by_key(|m| std::cmp::Reverse(m.count_ones()));

    let mut verts = Vec::with_capacity(n);
    let mut contained = Vec::new();
    for mask in masks {
        verts.clear();
        verts.extend((0..n).filter(|&v| mask >> v & 1 == 1));
        contained.clear();
        contained.extend(
            g.edges()
                .iter()
                .enumerate()
                .filter(|(_, e)| mask >> e.u & 1 == 1 && mask >> e.v & 1 == 1)
                .map(|(i, _)| i),
        );
        let Some(floor) = contained.iter().map(|&i| best[i]).reduce(f64::min) else {
            continue;
        };
        // connectivity never exceeds the minimum induced degree
        let min_degree = verts
            .iter()
            .map(|&v| verts.iter().map(|&u| w[v][u]).sum::<f64>())
            .fold(f64::INFINITY, f64::min);
        if min_degree <= floor {
            continue;
        }
        let conn = induced_connectivity(&w, &verts);
        for &i in &contained {
            best[i] = best[i].max(conn);
        }
    }
    Ok(best)
}

/// Standard connectivity of edge `edge`: the minimum cut separating its
/// endpoints.
pub fn standard_connectivity(g: &Graph, edge: usize) -> Result<f64> {
    let e = *g.edge(edge);
    min_st_cut(g, e.u, e.v)
}

/// Minimum value of a cut separating `s` and `t`, by enumeration.
pub fn min_st_cut(g: &Graph, s: usize, t: usize) -> Result<f64> {
    check_cap(g, DEFAULT_ORACLE_CAP)?;
    if s == t {
        return Err(Error::SameTerminals(s));
    }
    for x in [s, t] {
        if x >= g.n() {
            return Err(Error::VertexOutOfRange {
                vertex: x,
                n: g.n(),
            });
        }
    }
    let w = weight_matrix(g);
    let verts: Vec<usize> = (0..g.n()).collect();
    let mut best = f64::INFINITY;
    for_each_cut(&w, &verts, |inside, value| {
        let s_in = s != 0 && inside >> s & 1 == 1;
        let t_in = t != 0 && inside >> t & 1 == 1;
        if s_in != t_in {
            best = best.min(value);
        }
    });
    Ok(best)
}

/// A bipartition as a bitmask of the side not containing vertex 0.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CutEntry {
    pub side: u32,
    pub value: f64,
}

impl CutEntry {
    pub fn side_vec(&self, n: usize) -> Vec<bool> {
        (0..n).map(|v| self.side >> v & 1 == 1).collect()
    }

    pub fn side_size(&self) -> usize {
        self.side.count_ones() as usize
    }
}

/// All `2^(n-1) - 1` proper bipartitions with their exact values.
pub fn enumerate_cuts(g: &Graph) -> Result<Vec<CutEntry>> {
    check_cap(g, CUT_ENUMERATION_CAP)?;
    let mut out = Vec::with_capacity((1usize << g.n().saturating_sub(1)).saturating_sub(1));
    cut_values_into(g, |side, value| out.push(CutEntry { side, value }));
    Ok(out)
}

/// Streams every proper bipartition value without materializing them.
pub(crate) fn cut_values_into(g: &Graph, visit: impl FnMut(u32, f64)) {
    let w = weight_matrix(g);
    let verts: Vec<usize> = (0..g.n()).collect();
    for_each_cut(&w, &verts, visit);
}

/// Global minimum cut, `None` below two vertices.
pub fn min_cut(g: &Graph) -> Result<Option<CutEntry>> {
    Ok(enumerate_cuts(g)?
        .into_iter()
        .min_by(|a, b| a.value.total_cmp(&b.value)))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SparsestCut {
    pub cut: CutEntry,
    /// `value / (|S| · |V∖S|)`.
    pub ratio: f64,
}

/// Cut minimizing value over the product of its side sizes.
pub fn sparsest_cut(g: &Graph) -> Result<Option<SparsestCut>> {
    let n = g.n();
    Ok(enumerate_cuts(g)?
        .into_iter()
        .map(|cut| {
            let s = cut.side_size();
            SparsestCut {
                cut,
                ratio: cut.value / (s * (n - s)) as f64,
            }
        })
        .min_by(|a, b| a.ratio.total_cmp(&b.ratio)))
}

/// Everything the oracle knows about a small graph.
#[derive(Clone, Debug)]
pub struct OracleReport {
    pub strengths: Vec<f64>,
    pub min_cut: Option<CutEntry>,
    pub all_cuts: Option<Vec<CutEntry>>,
    pub sparsest: Option<SparsestCut>,
}

pub fn report(g: &Graph, keep_all_cuts: bool) -> Result<OracleReport> {
    let strengths = oracle_strengths(g)?;
    let cuts = enumerate_cuts(g)?;
    let min_cut = cuts
        .iter()
        .copied()
        .min_by(|a, b| a.value.total_cmp(&b.value));
    let sparsest = sparsest_cut(g)?;
    Ok(OracleReport {
        strengths,
        min_cut,
        all_cuts: keep_all_cuts.then_some(cuts),
        sparsest,
    })
}

/// Random edge weight with known mean and maximum.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum EdgeDistribution {
    /// Always the given value.
    Fixed(f64),
    /// `value` with probability `prob`, otherwise 0.
    TwoPoint { value: f64, prob: f64 },
    /// Uniform on `[low, high]`.
    Uniform { low: f64, high: f64 },
}

impl EdgeDistribution {
    pub fn mean(&self) -> f64 {
        match *self {
            Self::Fixed(x) => x,
            Self::TwoPoint { value, prob } => value * prob,
            Self::Uniform { low, high } => (low + high) / 2.0,
        }
    }

    pub fn max(&self) -> f64 {
        match *self {
            Self::Fixed(x) => x,
            Self::TwoPoint { value, .. } => value,
            Self::Uniform { high, .. } => high,
        }
    }

    /// One draw. `TwoPoint` uses a single uniform compared against `prob`,
    /// the same draw compression makes for a kept edge.
    pub fn sample(&self, rng: &mut impl Rng) -> f64 {
        match *self {
            Self::Fixed(x) => x,
            Self::TwoPoint { value, prob } => {
                if rng.random::<f64>() < prob {
                    value
                } else {
                    0.0
                }
            }
            Self::Uniform { low, high } => low + (high - low) * rng.random::<f64>(),
        }
    }

    fn validate(&self) -> Result<()> {
        let ok = match *self {
            Self::Fixed(x) => x.is_finite() && x > 0.0,
            Self::TwoPoint { value, prob } => {
                value.is_finite() && value > 0.0 && prob > 0.0 && prob <= 1.0
            }
            Self::Uniform { low, high } => {
                low.is_finite() && high.is_finite() && 0.0 <= low && low <= high && high > 0.0
            }
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidParameter(format!(
                "edge distribution {self:?} must have a positive mean"
            )))
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct HarnessReport {
    pub trials: usize,
    pub failures: usize,
    pub failure_rate: f64,
    /// Whether `k_e >= 2 m_e ln n / ε²` held for every edge.
    pub precondition_met: bool,
    /// Smallest `k_e / (2 m_e ln n / ε²)` over the edges.
    pub precondition_ratio: f64,
}

/// Samples the random graph whose edge `e` has weight drawn from `dists[e]`
/// and reports how often some cut leaves `(1 ± ε)` of its expectation.
///
/// Trial `t` draws edge `e` from `rng::keyed(rng::derive_seed(seed, t), e)`,
/// the stream compression uses for edge `e` under that seed.
pub fn appendix_harness(
    g: &Graph,
    dists: &[EdgeDistribution],
    epsilon: f64,
    trials: usize,
    seed: u64,
) -> Result<HarnessReport> {
    check_cap(g, 12)?;
    if dists.len() != g.m() {
        return Err(Error::LengthMismatch {
            what: "edge distributions",
            expected: g.m(),
            actual: dists.len(),
        });
    }
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "epsilon must lie in (0, 1), got {epsilon}"
        )));
    }
    for d in dists {
        d.validate()?;
    }
    let means: Vec<f64> = dists.iter().map(EdgeDistribution::mean).collect();
    let expected_graph = g.scale(
        &means
            .iter()
            .zip(g.edges())
            .map(|(m, e)| m / e.weight)
            .collect::<Vec<_>>(),
    )?;
    let strengths = oracle_strengths(&expected_graph)?;
    let ln_n = (g.n() as f64).ln();
    let precondition_ratio = strengths
        .iter()
        .zip(dists)
        .map(|(k, d)| k / (2.0 * d.max() * ln_n / (epsilon * epsilon)))
        .fold(f64::INFINITY, f64::min);

    let mut expected = Vec::new();
    cut_values_into(&expected_graph, |_, v| expected.push(v));

    let mut failures = 0;
    for t in 0..trials {
        let trial_seed = rng::derive_seed(seed, t as u64);
        let edges = g.edges().iter().enumerate().filter_map(|(i, e)| {
            let x = dists[i].sample(&mut rng::keyed(trial_seed, i as u64));
            (x > 0.0).then_some(crate::graph::Edge::new(e.u, e.v, x))
        });
        let sampled = Graph::from_parts(g.n(), edges.collect());
        let mut idx = 0;
        let mut failed = false;
        cut_values_into(&sampled, |_, v| {
            let mu = expected[idx];
            idx += 1;
            if (v - mu).abs() > epsilon * mu {
                failed = true;
            }
        });
        failures += failed as usize;
    }
    Ok(HarnessReport {
        trials,
        failures,
        failure_rate: if trials == 0 {
            0.0
        } else {
            failures as f64 / trials as f64
        },
        precondition_met: precondition_ratio >= 1.0,
        precondition_ratio,
    })
}
