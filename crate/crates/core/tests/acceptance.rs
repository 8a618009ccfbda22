//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

use std::process::ExitCode;
use std::time::Instant;

use sparsecut::corpus::{self, NamedGraph, Weights};
use sparsecut::oracle::{self, EdgeDistribution};
use sparsecut::rng::derive_seed;
use sparsecut::{
    approx_max_flow_with_plan, approx_min_cut, compress, estimation, max_flow, smooth, weak_edges,
    window_estimation, Graph, SparsifyParams, StrengthLabels,
};

type Criterion<'a> = (&'static str, Box<dyn Fn() -> Outcome + Send + Sync + 'a>);

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn exact_strengths(g: &Graph) -> Vec<f64> {
    oracle::oracle_strengths(g).expect("corpus graphs fit the oracle")
}

fn is_connected(g: &Graph) -> bool {
    g.connected_components().count == 1
}

/// Labels used for compression: estimation on unit graphs, windows otherwise.
fn labels_for(g: &Graph) -> StrengthLabels {
    if g.is_unweighted() {
        estimation(g, 1.0).unwrap()
    } else {
        window_estimation(g).unwrap()
    }
}

fn strength_sum(corpus: &[NamedGraph]) -> Outcome {
    let mut worst = f64::NEG_INFINITY;
    let mut bad = Vec::new();
    for ng in corpus {
        let g = &ng.graph;
        let k = exact_strengths(g);
        let sum: f64 = g.edges().iter().zip(&k).map(|(e, k)| e.weight / k).sum();
        let slack = sum - (g.n() - 1) as f64;
        worst = worst.max(slack);
        if slack > 1e-9 {
            bad.push(ng.name.clone());
        }
    }
    outcome(
        bad.is_empty(),
        format!(
            "{} graphs, max Σu/k - (n-1) = {worst:.3e}, violations {bad:?}",
            corpus.len()
        ),
    )
}

fn unit_min_cut(corpus: &[NamedGraph]) -> Outcome {
    let mut worst = 0.0f64;
    let mut checked = 0;
    for ng in corpus.iter().filter(|ng| is_connected(&ng.graph)) {
        let g = &ng.graph;
        let k = exact_strengths(g);
        let scaled: Vec<_> = g
            .edges()
            .iter()
            .zip(&k)
            .map(|(e, k)| (e.u, e.v, e.weight / k))
            .collect();
        let h = Graph::from_weighted(g.n(), &scaled).unwrap();
        let cut = oracle::min_cut(&h).unwrap().unwrap();
        worst = worst.max((cut.value - 1.0).abs());
        checked += 1;
    }
    outcome(
        worst <= 1e-9,
        format!("{checked} connected graphs, max |mincut - 1| = {worst:.3e}"),
    )
}

fn label_soundness(corpus: &[NamedGraph]) -> Outcome {
    let (mut edges, mut unsound) = (0usize, 0usize);
    let (mut est_ratio, mut win_ratio) = (0.0f64, 0.0f64);
    for ng in corpus {
        let g = &ng.graph;
        let k = exact_strengths(g);
        let bound = (g.n() - 1).max(1) as f64;
        if g.is_unweighted() {
            let l = estimation(g, 1.0).unwrap();
            unsound += l.labels.iter().zip(&k).filter(|(l, k)| l > k).count();
            edges += g.m();
            est_ratio = est_ratio.max(l.cost(g) / (4.0 * bound));
        }
        let l = window_estimation(g).unwrap();
        unsound += l.labels.iter().zip(&k).filter(|(l, k)| l > k).count();
        edges += g.m();
        win_ratio = win_ratio.max(l.cost(g) / (12.0 * bound));
    }
    outcome(
        unsound == 0 && est_ratio <= 1.0 && win_ratio <= 1.0,
        format!(
            "{edges} labels, {unsound} above strength; max cost/4(n-1) = {est_ratio:.3} (estimation), max cost/12(n-1) = {win_ratio:.3} (window)"
        ),
    )
}

fn weak_containment(corpus: &[NamedGraph]) -> Outcome {
    let mut missed = Vec::new();
    let mut over_weight = Vec::new();
    for ng in corpus {
        let g = &ng.graph;
        let strengths = exact_strengths(g);
        for k in [1.0, 2.0, 4.0, 8.0] {
            let w = weak_edges(g, k).unwrap();
            let mut chosen = vec![false; g.m()];
            for &i in &w.edges {
                chosen[i] = true;
            }
            if strengths.iter().zip(&chosen).any(|(&ke, &c)| ke < k && !c) {
                missed.push(format!("{}@{k}", ng.name));
            }
            if w.weight(g) > 4.0 * k * (w.r() as f64 - 1.0) + 1e-9 {
                over_weight.push(format!("{}@{k}", ng.name));
            }
        }
    }
    outcome(
        missed.is_empty() && over_weight.is_empty(),
        format!(
            "{} graphs x 4 thresholds, missed {missed:?}, over weight {over_weight:?}",
            corpus.len()
        ),
    )
}

fn compression_edge_count() -> Outcome {
    let n = 512;
    let params = SparsifyParams::new(0.5, 1.0, 0);
    let rho = params.rho(n);
    let seeds = 30u64;
    let mut total = 0usize;
    let mut input = 0usize;
    for seed in 0..seeds {
        let g = corpus::random_sparse(n, 8000, 7000 + seed);
        input += g.m();
        let labels = estimation(&g, 1.0).unwrap();
        let c = compress(&g, &labels, &params.with_seed(seed)).unwrap();
        total += c.graph.m();
    }
    let mean = total as f64 / seeds as f64;
    let bound = rho * 4.0 * (n - 1) as f64;
    outcome(
        mean <= bound,
        format!(
            "ρ = {rho:.1}, mean input m = {:.0}, mean compressed m = {mean:.1}, bound ρ·4(n-1) = {bound:.0}",
            input as f64 / seeds as f64
        ),
    )
}

/// Cut-accuracy instances: the small corpus graphs plus dense multigraphs
/// whose strengths exceed ρ, so that sampling actually drops edges.
fn accuracy_instances(corpus: &[NamedGraph]) -> Vec<NamedGraph> {
    let mut out: Vec<NamedGraph> = corpus
        .iter()
        .filter(|ng| is_connected(&ng.graph))
        .cloned()
        .collect();
    for (n, copies) in [(6, 60), (8, 40), (10, 30)] {
        out.push(NamedGraph {
            name: format!("K{n}x{copies}"),
            graph: corpus::multi_complete(n, copies),
        });
    }
    out
}

fn cut_accuracy(corpus: &[NamedGraph]) -> Outcome {
    let seeds = 200u64;
    let eps = 0.5;
    let mut worst_rate = 0.0f64;
    let mut failing = Vec::new();
    let mut sampled = 0;
    for ng in accuracy_instances(corpus) {
        let g = &ng.graph;
        let labels = labels_for(g);
        let original = oracle::enumerate_cuts(g).unwrap();
        let mut failures = 0;
        let mut dropped_any = false;
        for seed in 0..seeds {
            let params = SparsifyParams::new(eps, 1.0, derive_seed(17, seed));
            let c = compress(g, &labels, &params).unwrap();
            dropped_any |= c.graph.m() < g.m() || c.graph != *g;
            let cuts = oracle::enumerate_cuts(&c.graph).unwrap();
            let bad = original.iter().zip(&cuts).any(|(a, b)| {
                debug_assert_eq!(a.side, b.side);
                (b.value - a.value).abs() > eps * a.value
            });
            failures += bad as usize;
        }
        sampled += dropped_any as usize;
        let rate = failures as f64 / seeds as f64;
        worst_rate = worst_rate.max(rate * g.n() as f64);
        if rate > 1.0 / g.n() as f64 {
            failing.push(format!("{} ({rate:.3})", ng.name));
        }
    }
    outcome(
        failing.is_empty(),
        format!(
            "max failure rate · n = {worst_rate:.3} over {seeds} seeds, {sampled} instances actually sampled, failing {failing:?}"
        ),
    )
}

fn smoothing(corpus: &[NamedGraph]) -> Outcome {
    let mut bad = Vec::new();
    let mut runs = 0;
    for ng in corpus {
        let g = &ng.graph;
        let labels = labels_for(g);
        let cost = labels.cost(g);
        for c in [0.5, 1.0, g.m() as f64 / g.n() as f64, 7.25] {
            let s = smooth(g, &labels, c).unwrap();
            let count_ok = s.graph.m() as f64 <= g.m() as f64 + c * cost + 1e-9;
            let smooth_ok = s
                .graph
                .edges()
                .iter()
                .zip(&s.parent)
                .all(|(e, &p)| c * e.weight <= labels.labels[p]);
            let mut mass = vec![0.0; g.m()];
            for (e, &p) in s.graph.edges().iter().zip(&s.parent) {
                mass[p] += e.weight;
            }
            let mass_ok = mass
                .iter()
                .zip(g.edges())
                .all(|(m, e)| (m - e.weight).abs() <= 1e-9 * e.weight);
            if !(count_ok && smooth_ok && mass_ok) {
                bad.push(format!("{}@c={c}", ng.name));
            }
            runs += 1;
        }
    }
    outcome(
        bad.is_empty(),
        format!("{runs} smoothings, violations {bad:?}"),
    )
}

fn flow_approximation() -> Outcome {
    let eps = 0.5;
    let mut instances = vec![
        ("circulant-16".to_string(), corpus::circulant(16, &[1, 2])),
        (
            "circulant-16x200".to_string(),
            corpus::circulant(
                16,
                &vec![1; 200]
                    .into_iter()
                    .chain(vec![2; 200])
                    .collect::<Vec<_>>(),
            ),
        ),
    ];
    for (i, n) in [12usize, 16, 20].into_iter().enumerate() {
        instances.push((
            format!("er-{n}"),
            corpus::random_graph(n, 0.4, Weights::Integer(5), 300 + i as u64),
        ));
    }
    let runs = 100u64;
    let mut lines = Vec::new();
    let mut pass = true;
    for (name, g) in &instances {
        let (s, t) = (0, g.n() / 2);
        let v = max_flow(g, s, t).unwrap().value;
        let (mut infeasible, mut short, mut max_groups) = (0, 0, 1);
        for seed in 0..runs {
            let params = SparsifyParams::new(eps, 1.0, derive_seed(99, seed));
            let (f, plan) = approx_max_flow_with_plan(g, s, t, &params).unwrap();
            max_groups = max_groups.max(plan.groups);
            infeasible += f.check(g).is_err() as usize;
            short += (f.value < (1.0 - eps) * v) as usize;
        }
        let ok = infeasible == 0 && short as f64 <= runs as f64 / g.n() as f64;
        pass &= ok;
        lines.push(format!(
            "{name}: groups {max_groups}, infeasible {infeasible}, short {short}"
        ));
    }
    outcome(pass, format!("{runs} runs each; {}", lines.join("; ")))
}

fn approx_min_cut_accuracy() -> Outcome {
    let eps = 0.5;
    let seeds = 200u64;
    let instances = vec![
        ("C10", corpus::cycle(10), 0, 5),
        ("bridged-K5", corpus::bridged_cliques(5), 0, 9),
        ("K10x30", corpus::multi_complete(10, 30), 0, 1),
        ("K8x300", corpus::multi_complete(8, 300), 0, 1),
        (
            "circulant-12x60",
            corpus::circulant(
                12,
                &[1; 60].iter().chain(&[3; 60]).copied().collect::<Vec<_>>(),
            ),
            0,
            6,
        ),
    ];
    let mut lines = Vec::new();
    let mut pass = true;
    for (name, g, s, t) in &instances {
        let v = max_flow(g, *s, *t).unwrap().value;
        let (mut below, mut above, mut sampled) = (0, 0, 0);
        for seed in 0..seeds {
            let params = SparsifyParams::new(eps, 1.0, derive_seed(5, seed));
            let r = approx_min_cut(g, *s, *t, &params).unwrap();
            let value = g.cut_value(&r.cut.side).unwrap();
            below += (value < v * (1.0 - 1e-9)) as usize;
            above += (value > (1.0 + 3.0 * eps) * v) as usize;
            sampled += r.compressed_value.is_some_and(|c| c != value) as usize;
        }
        let ok = below == 0 && above as f64 <= seeds as f64 / g.n() as f64;
        pass &= ok;
        lines.push(format!(
            "{name}: below v {below}, above (1+3ε)v {above}, sampled runs {sampled}"
        ));
    }
    outcome(pass, format!("{seeds} seeds each; {}", lines.join("; ")))
}

fn duality(corpus: &[NamedGraph]) -> Outcome {
    let mut pairs = 0;
    let mut bad = Vec::new();
    for ng in corpus.iter().filter(|ng| ng.graph.n() <= 10) {
        let g = &ng.graph;
        let integral = g.has_integer_weights();
        for s in 0..g.n() {
            for t in s + 1..g.n() {
                let flow = max_flow(g, s, t).unwrap().value;
                let cut = oracle::min_st_cut(g, s, t).unwrap();
                let ok = if integral {
                    flow == cut
                } else {
                    (flow - cut).abs() <= 1e-9 * cut.max(1.0)
                };
                if !ok {
                    bad.push(format!("{} ({s},{t}): {flow} vs {cut}", ng.name));
                }
                pairs += 1;
            }
        }
    }
    outcome(
        bad.is_empty(),
        format!("{pairs} (s,t) pairs, mismatches {bad:?}"),
    )
}

fn appendix_harness() -> Outcome {
    let g = corpus::multi_complete(10, 5);
    let dists = vec![
        EdgeDistribution::TwoPoint {
            value: 2.0,
            prob: 0.5
        };
        g.m()
    ];
    let r = oracle::appendix_harness(&g, &dists, 0.5, 500, 2024).unwrap();
    outcome(
        r.precondition_met && r.failure_rate <= 0.1,
        format!(
            "precondition ratio {:.3}, {} of {} trials failed (rate {:.4}, limit 0.1)",
            r.precondition_ratio, r.failures, r.trials, r.failure_rate
        ),
    )
}

fn main() -> ExitCode {
    let full = corpus::standard_corpus();
    let criteria: Vec<Criterion> = vec![
        ("strength-sum identity", Box::new(|| strength_sum(&full))),
        ("unit min cut", Box::new(|| unit_min_cut(&full))),
        (
            "label soundness and cost",
            Box::new(|| label_soundness(&full)),
        ),
        (
            "weak-edge containment",
            Box::new(|| weak_containment(&full)),
        ),
        ("compression edge count", Box::new(compression_edge_count)),
        ("cut accuracy", Box::new(|| cut_accuracy(&full))),
        ("smoothing", Box::new(|| smoothing(&full))),
        ("flow approximation", Box::new(flow_approximation)),
        ("approximate min cut", Box::new(approx_min_cut_accuracy)),
        ("flow/cut duality", Box::new(|| duality(&full))),
        ("random-weight harness", Box::new(appendix_harness)),
    ];

    let results: Vec<(Outcome, f64)> = std::thread::scope(|scope| {
        let handles: Vec<_> = criteria
            .iter()
            .map(|(_, run)| {
                scope.spawn(move || {
                    let start = Instant::now();
                    let o = run();
                    (o, start.elapsed().as_secs_f64())
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("criterion panicked"))
            .collect()
    });

    let mut failed = 0;
    for (i, ((name, _), (o, secs))) in criteria.iter().zip(&results).enumerate() {
        let status = if o.pass { "PASS" } else { "FAIL" };
        println!(
            "criterion {:>2} {status} {name} [{secs:.1}s]: {}",
            i + 1,
            o.detail
        );
        failed += !o.pass as usize;
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
