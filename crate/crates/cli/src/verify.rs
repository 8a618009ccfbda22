//! The `verify` subcommand: oracle-backed properties over a corpus.

use std::path::Path;
use std::thread;

use sparsecut::certificate::{sparse_certificate, weak_edges};
use sparsecut::corpus::{self, NamedGraph};
use sparsecut::oracle;
use sparsecut::{compress, estimation, max_flow, smooth, window_estimation, Graph, SparsifyParams};

use crate::report::{Check, Report};
use crate::{cost_factors, describe_input, load, CliError, CliResult, CorpusChoice};

const THRESHOLDS: [f64; 4] = [1.0, 2.0, 4.0, 8.0];

/// Outcome of one property on one graph.
struct Row {
    property: &'static str,
    passed: bool,
    invariant: bool,
    detail: String,
}

fn row(property: &'static str, passed: bool, detail: String) -> Row {
    Row {
        property,
        passed,
        invariant: true,
        detail,
    }
}

fn mask(g: &Graph, edges: &[usize]) -> Vec<bool> {
    let mut v = vec![false; g.m()];
    for &i in edges {
        v[i] = true;
    }
    v
}

fn check_graph(g: &Graph, cap: usize, trials: u64, epsilon: f64, seed: u64) -> CliResult<Vec<Row>> {
    if g.n() > cap {
        return Err(CliError::SizeCap(format!(
            "graph has {} vertices, oracle cap is {cap}",
            g.n()
        )));
    }
    let n1 = g.n().saturating_sub(1) as f64;
    let k = oracle::oracle_strengths_capped(g, cap)?;
    let cuts = oracle::enumerate_cuts(g)?;
    let mut rows = Vec::new();

    let sum: f64 = g.edges().iter().zip(&k).map(|(e, k)| e.weight / k).sum();
    rows.push(row(
        "strength-sum",
        sum <= n1 + 1e-9,
        format!("Σu/k = {sum:.6} <= {n1}"),
    ));

    if g.n() >= 2 && g.connected_components().count == 1 {
        let factors: Vec<f64> = k.iter().map(|k| 1.0 / k).collect();
        let unit = g.scale(&factors)?;
        let v = oracle::min_cut(&unit)?.map_or(0.0, |c| c.value);
        rows.push(row(
            "unit-min-cut",
            (v - 1.0).abs() <= 1e-9,
            format!("min cut {v:.12}"),
        ));
    }

    let mut worst = 0.0f64;
    for t in THRESHOLDS.iter().copied().chain(k.iter().copied()) {
        let weak: f64 = g
            .edges()
            .iter()
            .zip(&k)
            .filter(|(_, s)| **s <= t)
            .map(|(e, _)| e.weight)
            .sum();
        if n1 > 0.0 {
            worst = worst.max(weak / (t * n1));
        }
    }
    rows.push(row(
        "k-weak-bound",
        worst <= 1.0 + 1e-9,
        format!("max weight/k(n-1) = {worst:.4}"),
    ));

    let mut label_rows = vec![("window", window_estimation(g)?)];
    if g.is_unweighted() {
        label_rows.push(("estimation", estimation(g, 1.0)?));
    }
    for (name, labels) in &label_rows {
        let (proven, target) = cost_factors(name);
        let above = labels
            .labels
            .iter()
            .zip(&k)
            .filter(|(l, k)| **l > **k * (1.0 + 1e-12))
            .count();
        let cost = labels.cost(g);
        rows.push(row(
            "label-soundness",
            above == 0 && cost <= proven * n1 + 1e-9,
            format!("{name}: {above} above strength, Σu/k̃ = {cost:.3} <= {proven}(n-1)"),
        ));
        rows.push(Row {
            property: "label-cost-target",
            passed: cost <= target * n1 + 1e-9,
            invariant: false,
            detail: format!("{name}: Σu/k̃ = {cost:.3} vs {target}(n-1)"),
        });
    }

    let mut missed = 0;
    let mut heavy = 0;
    for t in THRESHOLDS {
        let w = weak_edges(g, t)?;
        let chosen = mask(g, &w.edges);
        missed += k
            .iter()
            .zip(&chosen)
            .filter(|(s, c)| **s < t && !**c)
            .count();
        heavy += (w.weight(g) > 4.0 * t * (w.r() as f64 - 1.0) + 1e-9) as usize;
    }
    rows.push(row(
        "weak-containment",
        missed == 0 && heavy == 0,
        format!("{missed} weak edges missed, {heavy} outputs over 4k(r-1)"),
    ));

    let mut uncovered = 0;
    for t in THRESHOLDS {
        let kept = mask(g, &sparse_certificate(g, t)?);
        for cut in cuts.iter().filter(|c| c.value <= t + 1e-9) {
            let side = cut.side_vec(g.n());
            uncovered += g
                .edges()
                .iter()
                .enumerate()
                .filter(|(i, e)| side[e.u] != side[e.v] && !kept[*i])
                .count();
        }
    }
    rows.push(row(
        "certificate",
        uncovered == 0,
        format!("{uncovered} small-cut edges outside the certificate"),
    ));

    let mut mismatches = 0;
    for t in 1..g.n() {
        let flow = max_flow(g, 0, t)?;
        let cut = oracle::min_st_cut(g, 0, t)?;
        let ok = flow.check(g).is_ok() && (flow.value - cut).abs() <= 1e-9 * cut.max(1.0);
        mismatches += !ok as usize;
    }
    rows.push(row(
        "duality",
        mismatches == 0,
        format!(
            "{mismatches} of {} pairs (1, v) disagree",
            g.n().saturating_sub(1)
        ),
    ));

    let labels = &label_rows[0].1;
    if g.m() > 0 {
        let c = g.m() as f64 / g.n() as f64;
        let s = smooth(g, labels, c)?;
        let rough = s
            .graph
            .edges()
            .iter()
            .zip(&s.parent)
            .filter(|(e, &p)| c * e.weight > labels.labels[p])
            .count();
        let bound = g.m() as f64 + c * labels.cost(g);
        rows.push(row(
            "smoothing",
            rough == 0 && s.graph.m() as f64 <= bound + 1e-9,
            format!("{} pieces <= {bound:.2}, {rough} rough", s.graph.m()),
        ));
    }

    if trials > 0 && g.n() >= 3 {
        let mut failures = 0;
        for t in 0..trials {
            let params = SparsifyParams::new(epsilon, 1.0, sparsecut::rng::derive_seed(seed, t));
            let c = compress(g, labels, &params)?;
            let after = oracle::enumerate_cuts(&c.graph)?;
            failures += cuts
                .iter()
                .zip(&after)
                .any(|(a, b)| (b.value - a.value).abs() > epsilon * a.value)
                as usize;
        }
        let rate = failures as f64 / trials as f64;
        rows.push(Row {
            property: "cut-accuracy",
            passed: rate <= 1.0 / g.n() as f64,
            invariant: false,
            detail: format!("{failures}/{trials} seeds with a cut outside 1±{epsilon}"),
        });
    }
    Ok(rows)
}

pub(crate) fn cmd_verify(
    path: Option<&Path>,
    choice: CorpusChoice,
    cap: usize,
    trials: u64,
    epsilon: f64,
    seed: u64,
) -> CliResult<Report> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(CliError::Usage(format!(
            "--epsilon must lie in (0, 1), got {epsilon}"
        )));
    }
    let mut r = Report::new("verify");
    let graphs: Vec<NamedGraph> = match choice {
        CorpusChoice::Small => corpus::small_corpus(),
        CorpusChoice::Full => corpus::standard_corpus(),
        CorpusChoice::None => Vec::new(),
    };
    let supplied = match path {
        Some(p) => {
            let input = load(p)?;
            describe_input(&mut r, p, &input);
            Some(input.parsed.graph)
        }
        None => None,
    };
    let corpus_name = match choice {
        CorpusChoice::Small => "small",
        CorpusChoice::Full => "full",
        CorpusChoice::None => "none",
    };
    r.field("params", "corpus", corpus_name)
        .field("params", "corpus_graphs", graphs.len())
        .field("params", "oracle_cap", cap)
        .field("params", "trials", trials)
        .field("params", "epsilon", epsilon)
        .field("params", "seed", seed);

    if let Some(g) = &supplied {
        let subject = path.map(|p| p.display().to_string()).unwrap_or_default();
        for x in check_graph(g, cap, trials, epsilon, seed)? {
            r.check(to_check(&x, &subject));
        }
    }

    let workers = thread::available_parallelism()
        .map_or(1, |n| n.get())
        .min(graphs.len().max(1));
    let results: Vec<CliResult<Vec<Row>>> = thread::scope(|scope| {
        let chunk = graphs.len().div_ceil(workers).max(1);
        let handles: Vec<_> = graphs
            .chunks(chunk)
            .map(|part| {
                scope.spawn(move || {
                    part.iter()
                        .map(|ng| {
                            check_graph(&ng.graph, cap.max(ng.graph.n()), trials, epsilon, seed)
                        })
                        .collect::<Vec<_>>()
                })
            })
            .collect();
        handles
            .into_iter()
            .flat_map(|h| h.join().expect("verification worker panicked"))
            .collect()
    });

    // one row per property, aggregated over the corpus in corpus order
    let mut order: Vec<&'static str> = Vec::new();
    let mut tally: Vec<(usize, usize, bool, Vec<String>)> = Vec::new();
    for (ng, rows) in graphs.iter().zip(results) {
        for x in rows? {
            let idx = match order.iter().position(|p| *p == x.property) {
                Some(i) => i,
                None => {
                    order.push(x.property);
                    tally.push((0, 0, x.invariant, Vec::new()));
                    order.len() - 1
                }
            };
            let t = &mut tally[idx];
            t.0 += 1;
            if x.passed {
                t.1 += 1;
            } else {
                t.3.push(format!("{} ({})", ng.name, x.detail));
            }
        }
    }
    for (property, (total, passed, invariant, failing)) in order.iter().zip(tally) {
        let mut detail = format!("{passed}/{total} cases");
        if !failing.is_empty() {
            detail.push_str(&format!("; failing: {}", failing.join(", ")));
        }
        let subject = format!("corpus:{corpus_name}");
        r.check(if invariant {
            Check::invariant(property, &subject, passed == total, detail)
        } else {
            Check::empirical(property, &subject, passed == total, detail)
        });
    }
    Ok(r)
}

fn to_check(x: &Row, subject: &str) -> Check {
    if x.invariant {
        Check::invariant(x.property, subject, x.passed, x.detail.clone())
    } else {
        Check::empirical(x.property, subject, x.passed, x.detail.clone())
    }
}
