//! Randomized graph transformations: strength-based compression, smoothing,
//! uniform sampling and random division of the edges into groups.
//!
//! All draws for edge `i` come from [`rng::keyed`]`(seed, i)`, so outputs
//! depend only on `(graph, labels, params)` and are listed in original edge
//! order.

use rand::Rng;
use rand_distr::{Binomial, Distribution, Poisson};

use crate::error::{Error, Result};
use crate::graph::{Edge, Graph};
use crate::rng;
use crate::strength::StrengthLabels;

/// How a weighted edge is sampled during compression.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum SamplingMode {
    /// Keep with `p = min(1, ρ/k̃)`, reweight to `u/p`.
    Bernoulli,
    /// Integer weight `u` as `u` unit copies, each kept with `ρ/k̃` and
    /// weighted `k̃/ρ`.
    Binomial,
    /// Keep with `min(1, ρu/k̃)`, weight `k̃/ρ`.
    #[default]
    Simplified,
    /// `Poisson(ρu/k̃)` copies of weight `k̃/ρ`.
    Poisson,
}

impl SamplingMode {
    pub fn name(&self) -> &'static str {
        match self {
            Self::Bernoulli => "bernoulli",
            Self::Binomial => "binomial",
            Self::Simplified => "simplified",
            Self::Poisson => "poisson",
        }
    }
}

impl std::str::FromStr for SamplingMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "bernoulli" => Ok(Self::Bernoulli),
            "binomial" => Ok(Self::Binomial),
            "simplified" => Ok(Self::Simplified),
            "poisson" => Ok(Self::Poisson),
            other => Err(Error::InvalidParameter(format!(
                "unknown sampling mode {other:?}"
            ))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SparsifyParams {
    /// Relative cut error, in `(0, 1)`. Zero means "run exact" for the
    /// flow and cut applications.
    pub epsilon: f64,
    /// Failure exponent: guarantees hold with probability `1 - n^-d`.
    pub d: f64,
    pub seed: u64,
    pub mode: SamplingMode,
    /// Round kept weights down to integers, raising the keep probability
    /// to preserve expectations.
    pub integer_rounding: bool,
}

impl SparsifyParams {
    pub fn new(epsilon: f64, d: f64, seed: u64) -> Self {
        Self {
            epsilon,
            d,
            seed,
            mode: SamplingMode::default(),
            integer_rounding: false,
        }
    }

    pub fn with_mode(mut self, mode: SamplingMode) -> Self {
        self.mode = mode;
        self
    }

    pub fn with_integer_rounding(mut self, on: bool) -> Self {
        self.integer_rounding = on;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn is_exact(&self) -> bool {
        self.epsilon == 0.0
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.epsilon > 0.0 && self.epsilon < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "epsilon must lie in (0, 1), got {}",
                self.epsilon
            )));
        }
        if !(self.d >= 1.0 && self.d.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "failure exponent d must be at least 1, got {}",
                self.d
            )));
        }
        Ok(())
    }

    /// Like [`validate`](Self::validate) but also accepts the exact
    /// sentinel `epsilon == 0`.
    pub fn validate_allow_exact(&self) -> Result<()> {
        if self.is_exact() {
            Self {
                epsilon: 0.5,
                ..*self
            }
            .validate()
        } else {
            self.validate()
        }
    }

    /// Compression factor `ρ = 3(d+4) ln n / ε²`.
    pub fn rho(&self, n: usize) -> f64 {
        3.0 * (self.d + 4.0) * (n as f64).ln() / (self.epsilon * self.epsilon)
    }

    /// The smaller factor `3(d+2) ln n / ε²` that suffices for uniform
    /// sampling of a graph whose minimum cut exceeds it.
    pub fn basic_rho(&self, n: usize) -> f64 {
        3.0 * (self.d + 2.0) * (n as f64).ln() / (self.epsilon * self.epsilon)
    }
}

/// A compressed graph with provenance.
#[derive(Clone, Debug)]
pub struct CompressedGraph {
    pub graph: Graph,
    /// Original edge index of each output edge, increasing.
    pub origin: Vec<usize>,
    /// Probability that each original edge appears in the output.
    pub probabilities: Vec<f64>,
    pub rho: f64,
    pub params: SparsifyParams,
}

impl CompressedGraph {
    /// Expected number of output edges.
    pub fn expected_edges(&self) -> f64 {
        self.probabilities.iter().sum()
    }
}

/// One edge's sampling rule: `draws` independent trials, each succeeding
/// with `rate`, every success adding `unit` to the output weight.
/// `draws == 0` means Poisson with mean `rate`.
struct Rule {
    draws: u64,
    rate: f64,
    unit: f64,
}

fn rule(mode: SamplingMode, u: f64, k: f64, rho: f64, rounding: bool) -> Option<Rule> {
    // None: the edge is kept verbatim
    let (mut rule, per_unit) = match mode {
        SamplingMode::Bernoulli => {
            let p = rho / k;
            (
                Rule {
                    draws: 1,
                    rate: p,
                    unit: u / p,
                },
                p,
            )
        }
        SamplingMode::Simplified => {
            let p = rho * u / k;
            (
                Rule {
                    draws: 1,
                    rate: p,
                    unit: k / rho,
                },
                p,
            )
        }
        SamplingMode::Binomial => {
            let p = rho / k;
            (
                Rule {
                    draws: u as u64,
                    rate: p,
                    unit: k / rho,
                },
                p,
            )
        }
        SamplingMode::Poisson => (
            Rule {
                draws: 0,
                rate: rho * u / k,
                unit: k / rho,
            },
            rho / k,
        ),
    };
    if per_unit >= 1.0 {
        return None;
    }
    if rounding {
        let floor = rule.unit.floor();
        if floor >= 1.0 && floor < rule.unit {
            rule.rate *= rule.unit / floor;
            rule.unit = floor;
            if rule.draws != 0 && rule.rate >= 1.0 {
                return None;
            }
        }
    }
    Some(rule)
}

/// Compresses `g` using strength bounds `labels`: every edge's expected
/// output weight equals its input weight, and edges with small
/// `ρ u_e / k̃_e` are usually dropped. Graphs with fewer than three
/// vertices are returned unchanged.
pub fn compress(
    g: &Graph,
    labels: &StrengthLabels,
    params: &SparsifyParams,
) -> Result<CompressedGraph> {
    params.validate()?;
    labels.validate(g)?;
    if params.mode == SamplingMode::Binomial && !g.has_integer_weights() {
        return Err(Error::InvalidParameter(
            "binomial sampling needs integer edge weights".into(),
        ));
    }
    let rho = params.rho(g.n());
    let mut edges = Vec::new();
    let mut origin = Vec::new();
    let mut probabilities = Vec::with_capacity(g.m());
    for (i, e) in g.edges().iter().enumerate() {
        let r = if g.n() < 3 {
            None
        } else {
            rule(
                params.mode,
                e.weight,
                labels.labels[i],
                rho,
                params.integer_rounding,
            )
        };
        let (weight, prob) = match r {
            None => (e.weight, 1.0),
            Some(r) => {
                let mut rng = rng::keyed(params.seed, i as u64);
                let count = match r.draws {
                    0 => {
                        let lambda = r.rate;
                        Poisson::new(lambda)
                            .map_err(|err| Error::InvalidParameter(err.to_string()))?
                            .sample(&mut rng) as u64
                    }
                    1 => (rng.random::<f64>() < r.rate) as u64,
                    trials => Binomial::new(trials, r.rate)
                        .map_err(|err| Error::InvalidParameter(err.to_string()))?
                        .sample(&mut rng),
                };
                let prob = match r.draws {
                    0 => 1.0 - (-r.rate).exp(),
                    1 => r.rate,
                    trials => 1.0 - (1.0 - r.rate).powi(trials.min(i32::MAX as u64) as i32),
                };
                (count as f64 * r.unit, prob)
            }
        };
        probabilities.push(prob);
        if weight > 0.0 {
            edges.push(Edge::new(e.u, e.v, weight));
            origin.push(i);
        }
    }
    Ok(CompressedGraph {
        graph: Graph::from_parts(g.n(), edges),
        origin,
        probabilities,
        rho,
        params: *params,
    })
}

/// A graph whose edges were split into equal parallel pieces.
#[derive(Clone, Debug)]
pub struct SmoothedGraph {
    pub graph: Graph,
    /// Original edge of each piece.
    pub parent: Vec<usize>,
    /// Strength label inherited by each piece.
    pub labels: StrengthLabels,
    pub c: f64,
}

impl SmoothedGraph {
    /// Number of pieces edge `e` was split into, for every original edge.
    pub fn piece_counts(&self, m: usize) -> Vec<usize> {
        let mut counts = vec![0; m];
        for &p in &self.parent {
            counts[p] += 1;
        }
        counts
    }
}

/// Splits each edge into `⌈c u_e / k̃_e⌉` equal parallel pieces so that
/// every piece satisfies `c · capacity <= k̃_e`.
pub fn smooth(g: &Graph, labels: &StrengthLabels, c: f64) -> Result<SmoothedGraph> {
    labels.validate(g)?;
    if !(c.is_finite() && c > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "smoothness parameter must be finite and positive, got {c}"
        )));
    }
    let mut edges = Vec::new();
    let mut parent = Vec::new();
    let mut piece_labels = Vec::new();
    for (i, e) in g.edges().iter().enumerate() {
        let k = labels.labels[i];
        let mut pieces = (c * e.weight / k).ceil().max(1.0);
        // guard against the ceiling landing one short after rounding
        while c * (e.weight / pieces) > k {
            pieces += 1.0;
        }
        let cap = e.weight / pieces;
        for _ in 0..pieces as usize {
            edges.push(Edge::new(e.u, e.v, cap));
            parent.push(i);
            piece_labels.push(k);
        }
    }
    Ok(SmoothedGraph {
        graph: Graph::from_parts(g.n(), edges),
        parent,
        labels: StrengthLabels::new(piece_labels, labels.kind),
        c,
    })
}

fn check_probability(p: f64) -> Result<()> {
    if p > 0.0 && p <= 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "sampling probability must lie in (0, 1], got {p}"
        )))
    }
}

/// Keeps each edge independently with probability `p`, at its original
/// capacity.
pub fn uniform_sample(g: &Graph, p: f64, seed: u64) -> Result<Graph> {
    check_probability(p)?;
    let (sample, _) =
        g.edge_subgraph(|i| p >= 1.0 || rng::keyed(seed, i as u64).random::<f64>() < p);
    Ok(sample)
}

/// One group of a random division.
#[derive(Clone, Debug)]
pub struct EdgeGroup {
    pub graph: Graph,
    /// Index in the divided graph of each group edge.
    pub origin: Vec<usize>,
}

/// Assigns every edge to one of `groups` groups uniformly at random.
pub fn random_division(g: &Graph, groups: usize, seed: u64) -> Result<Vec<EdgeGroup>> {
    if groups == 0 {
        return Err(Error::InvalidParameter("need at least one group".into()));
    }
    let mut buckets: Vec<(Vec<Edge>, Vec<usize>)> = vec![(Vec::new(), Vec::new()); groups];
    for (i, e) in g.edges().iter().enumerate() {
        let j = if groups == 1 {
            0
        } else {
            rng::keyed(seed, i as u64).random_range(0..groups)
        };
        buckets[j].0.push(*e);
        buckets[j].1.push(i);
    }
    Ok(buckets
        .into_iter()
        .map(|(edges, origin)| EdgeGroup {
            graph: Graph::from_parts(g.n(), edges),
            origin,
        })
        .collect())
}
