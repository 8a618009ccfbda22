//! s–t flows and cuts: an exact blocking-flow solver and the sampling-based
//! approximations built on top of it.

use crate::error::{Error, Result};
use crate::graph::{Cut, Graph};
use crate::sampling::{compress, random_division, smooth, SparsifyParams};
use crate::strength::window_estimation;

/// Augmentations below this fraction of the largest capacity end the
/// solver, and residual arcs below it count as saturated.
pub const CAPACITY_FLOOR: f64 = 1e-12;

/// Relative tolerance for feasibility and conservation checks on
/// real-valued flows.
pub const FLOW_TOLERANCE: f64 = 1e-9;

/// A flow on an undirected graph. `flows[e] > 0` means flow from
/// `edge(e).u` to `edge(e).v`.
#[derive(Clone, Debug, PartialEq)]
pub struct FlowAssignment {
    pub flows: Vec<f64>,
    pub value: f64,
    pub source: usize,
    pub sink: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub enum FlowViolation {
    Capacity {
        edge: usize,
        flow: f64,
        capacity: f64,
    },
    Conservation {
        vertex: usize,
        excess: f64,
    },
    Value {
        reported: f64,
        at_source: f64,
        at_sink: f64,
    },
}

impl FlowAssignment {
    /// Net flow out of every vertex.
    pub fn excess(&self, g: &Graph) -> Vec<f64> {
        let mut out = vec![0.0; g.n()];
        for (e, &f) in g.edges().iter().zip(&self.flows) {
            out[e.u] += f;
            out[e.v] -= f;
        }
        out
    }

    /// Checks capacity, conservation and value consistency, with tolerance
    /// `FLOW_TOLERANCE` relative to the total capacity (at least 1).
    pub fn check(&self, g: &Graph) -> std::result::Result<(), FlowViolation> {
        let tol = FLOW_TOLERANCE * g.total_weight().max(1.0);
        for (i, (e, &f)) in g.edges().iter().zip(&self.flows).enumerate() {
            if f.abs() > e.weight + tol {
                return Err(FlowViolation::Capacity {
                    edge: i,
                    flow: f,
                    capacity: e.weight,
                });
            }
        }
        let excess = self.excess(g);
        for (v, &x) in excess.iter().enumerate() {
            if v != self.source && v != self.sink && x.abs() > tol {
                return Err(FlowViolation::Conservation {
                    vertex: v,
                    excess: x,
                });
            }
        }
        let (at_source, at_sink) = (excess[self.source], -excess[self.sink]);
        if (at_source - self.value).abs() > tol || (at_sink - self.value).abs() > tol {
            return Err(FlowViolation::Value {
                reported: self.value,
                at_source,
                at_sink,
            });
        }
        Ok(())
    }
}

/// Residual network where each undirected edge is a pair of antiparallel
/// arcs sharing one capacity: arc `u→v` has residual `u_e - f_e`, arc
/// `v→u` has `u_e + f_e`.
struct Dinic<'a> {
    g: &'a Graph,
    adj: Vec<Vec<(usize, usize, f64)>>,
    flow: Vec<f64>,
    level: Vec<usize>,
    next: Vec<usize>,
    floor: f64,
}

impl<'a> Dinic<'a> {
    fn new(g: &'a Graph) -> Self {
        let mut adj = vec![Vec::new(); g.n()];
        for (i, e) in g.edges().iter().enumerate() {
            adj[e.u].push((e.v, i, 1.0));
            adj[e.v].push((e.u, i, -1.0));
        }
        let max_cap = g.edges().iter().map(|e| e.weight).fold(0.0, f64::max);
        Self {
            g,
            adj,
            flow: vec![0.0; g.m()],
            level: vec![usize::MAX; g.n()],
            next: vec![0; g.n()],
            floor: CAPACITY_FLOOR * max_cap,
        }
    }

    fn residual(&self, edge: usize, dir: f64) -> f64 {
        self.g.edge(edge).weight - dir * self.flow[edge]
    }

    fn bfs(&mut self, s: usize, t: usize) -> bool {
        self.level.fill(usize::MAX);
        self.level[s] = 0;
        let mut queue = std::collections::VecDeque::from([s]);
        while let Some(x) = queue.pop_front() {
            for &(y, e, dir) in &self.adj[x] {
                if self.level[y] == usize::MAX && self.residual(e, dir) > self.floor {
                    self.level[y] = self.level[x] + 1;
                    queue.push_back(y);
                }
            }
        }
        self.level[t] != usize::MAX
    }

    fn dfs(&mut self, x: usize, t: usize, limit: f64) -> f64 {
        if x == t {
            return limit;
        }
        while self.next[x] < self.adj[x].len() {
            let (y, e, dir) = self.adj[x][self.next[x]];
            let r = self.residual(e, dir);
            if r > self.floor && self.level[y] == self.level[x] + 1 {
                let pushed = self.dfs(y, t, limit.min(r));
                if pushed > 0.0 {
                    self.flow[e] += dir * pushed;
                    return pushed;
                }
            }
            self.next[x] += 1;
        }
        0.0
    }

    fn run(&mut self, s: usize, t: usize) {
        while self.bfs(s, t) {
            self.next.fill(0);
            loop {
                let pushed = self.dfs(s, t, f64::INFINITY);
                if pushed <= self.floor {
                    break;
                }
            }
        }
    }

    /// Vertices reachable from `s` in the residual network.
    fn source_side(&self, s: usize) -> Vec<bool> {
        let mut seen = vec![false; self.g.n()];
        seen[s] = true;
        let mut stack = vec![s];
        while let Some(x) = stack.pop() {
            for &(y, e, dir) in &self.adj[x] {
                if !seen[y] && self.residual(e, dir) > self.floor {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
        seen
    }
}

fn check_terminals(g: &Graph, s: usize, t: usize) -> Result<()> {
    for x in [s, t] {
        if x >= g.n() {
            return Err(Error::VertexOutOfRange {
                vertex: x,
                n: g.n(),
            });
        }
    }
    if s == t {
        return Err(Error::SameTerminals(s));
    }
    Ok(())
}

fn solve(g: &Graph, s: usize, t: usize) -> (FlowAssignment, Vec<bool>) {
    let mut dinic = Dinic::new(g);
    dinic.run(s, t);
    let side = dinic.source_side(s);
    let mut flow = FlowAssignment {
        flows: dinic.flow,
        value: 0.0,
        source: s,
        sink: t,
    };
    flow.value = flow.excess(g)[s];
    (flow, side)
}

/// Exact maximum `s`–`t` flow.
pub fn max_flow(g: &Graph, s: usize, t: usize) -> Result<FlowAssignment> {
    check_terminals(g, s, t)?;
    Ok(solve(g, s, t).0)
}

/// An `s`–`t` cut with its value in the input graph.
#[derive(Clone, Debug)]
pub struct CutResult {
    /// Source side; contains `s`, excludes `t`.
    pub cut: Cut,
    /// Value of the cut in the input graph.
    pub value: f64,
    /// Value of the same bipartition in the compressed graph, when one was
    /// used.
    pub compressed_value: Option<f64>,
    /// Maximum flow proving minimality, for exact runs.
    pub certificate: Option<FlowAssignment>,
}

/// Exact minimum `s`–`t` cut from the residual network of a maximum flow.
pub fn min_cut(g: &Graph, s: usize, t: usize) -> Result<CutResult> {
    check_terminals(g, s, t)?;
    let (flow, side) = solve(g, s, t);
    let value = g.crossing_weight(&side);
    Ok(CutResult {
        cut: Cut { side, value },
        value,
        compressed_value: None,
        certificate: Some(flow),
    })
}

/// Approximate minimum `s`–`t` cut: compress with window-estimated
/// strengths, take the minimum cut of the compressed graph, and report it
/// measured in `g`. `epsilon == 0` runs [`min_cut`] directly.
pub fn approx_min_cut(g: &Graph, s: usize, t: usize, params: &SparsifyParams) -> Result<CutResult> {
    check_terminals(g, s, t)?;
    params.validate_allow_exact()?;
    if params.is_exact() {
        return min_cut(g, s, t);
    }
    let comps = g.connected_components();
    if !comps.same(s, t) {
        let side: Vec<bool> = (0..g.n()).map(|v| comps.same(v, s)).collect();
        return Ok(CutResult {
            cut: Cut { side, value: 0.0 },
            value: 0.0,
            compressed_value: Some(0.0),
            certificate: None,
        });
    }
    let labels = window_estimation(g)?;
    let compressed = compress(g, &labels, params)?;
    let (_, side) = solve(&compressed.graph, s, t);
    let compressed_value = compressed.graph.crossing_weight(&side);
    let value = g.crossing_weight(&side);
    Ok(CutResult {
        cut: Cut { side, value },
        value,
        compressed_value: Some(compressed_value),
        certificate: None,
    })
}

/// How [`approx_max_flow`] produced its flow.
#[derive(Clone, Debug, PartialEq)]
pub struct FlowPlan {
    /// Smoothness parameter `m/n`.
    pub c: f64,
    /// Per-group sampling rate `ρ/c`, before clamping.
    pub p: f64,
    /// 1 when the exact fallback ran.
    pub groups: usize,
    pub pieces: usize,
}

/// Approximate maximum flow by smoothing and random division. Returns a
/// feasible flow in `g`; its value is at least `(1-ε)` times the maximum
/// with high probability.
pub fn approx_max_flow(
    g: &Graph,
    s: usize,
    t: usize,
    params: &SparsifyParams,
) -> Result<FlowAssignment> {
    approx_max_flow_with_plan(g, s, t, params).map(|(f, _)| f)
}

pub fn approx_max_flow_with_plan(
    g: &Graph,
    s: usize,
    t: usize,
    params: &SparsifyParams,
) -> Result<(FlowAssignment, FlowPlan)> {
    check_terminals(g, s, t)?;
    params.validate_allow_exact()?;
    let c = g.m() as f64 / g.n() as f64;
    if params.is_exact() || g.n() < 3 || g.m() == 0 {
        let plan = FlowPlan {
            c,
            p: 1.0,
            groups: 1,
            pieces: g.m(),
        };
        return Ok((solve(g, s, t).0, plan));
    }
    let p = params.rho(g.n()) / c;
    if p >= 1.0 {
        let plan = FlowPlan {
            c,
            p,
            groups: 1,
            pieces: g.m(),
        };
        return Ok((solve(g, s, t).0, plan));
    }
    let labels = window_estimation(g)?;
    let smoothed = smooth(g, &labels, c)?;
    let groups = (1.0 / p).ceil() as usize;
    let mut flows = vec![0.0; g.m()];
    for group in random_division(&smoothed.graph, groups, params.seed)? {
        let (f, _) = solve(&group.graph, s, t);
        for (local, &piece) in group.origin.iter().enumerate() {
            let parent = smoothed.parent[piece];
            let orient = if g.edge(parent).u == group.graph.edge(local).u {
                1.0
            } else {
                -1.0
            };
            flows[parent] += orient * f.flows[local];
        }
    }
    let mut flow = FlowAssignment {
        flows,
        value: 0.0,
        source: s,
        sink: t,
    };
    flow.value = flow.excess(g)[s];
    let plan = FlowPlan {
        c,
        p,
        groups,
        pieces: smoothed.graph.m(),
    };
    Ok((flow, plan))
}
