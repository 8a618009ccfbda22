use sparsecut::corpus::{self, NamedGraph, Weights};
use sparsecut::oracle::oracle_strengths;
use sparsecut::{estimation, mst_bounds, window_estimation, Graph};

fn corpus_graphs() -> Vec<NamedGraph> {
    corpus::standard_corpus()
}

#[test]
fn estimation_labels_are_sound_and_cheap() {
    for ng in corpus_graphs()
        .into_iter()
        .filter(|g| g.graph.is_unweighted())
    {
        let g = &ng.graph;
        let exact = oracle_strengths(g).unwrap();
        let est = estimation(g, 1.0).unwrap();
        for (i, (&k, &kt)) in exact.iter().zip(&est.labels).enumerate() {
            assert!(kt <= k, "{}: edge {i} label {kt} > strength {k}", ng.name);
            assert!(kt >= 1.0);
        }
        let bound = 4.0 * (g.n() - 1) as f64;
        assert!(
            est.cost(g) <= bound,
            "{}: cost {} > {bound}",
            ng.name,
            est.cost(g)
        );
    }
}

#[test]
fn window_labels_are_sound_and_cheap() {
    for ng in corpus_graphs() {
        let g = &ng.graph;
        let exact = oracle_strengths(g).unwrap();
        let est = window_estimation(g).unwrap();
        est.validate(g).unwrap();
        for (i, (&k, &kt)) in exact.iter().zip(&est.labels).enumerate() {
            assert!(
                kt <= k * (1.0 + 1e-12),
                "{}: edge {i} label {kt} > strength {k}",
                ng.name
            );
        }
        let bound = 12.0 * (g.n() - 1) as f64;
        assert!(
            est.cost(g) <= bound,
            "{}: cost {} > {bound}",
            ng.name,
            est.cost(g)
        );
    }
}

#[test]
fn window_handles_weights_spanning_n_cubed() {
    // heavy triangle 0-1-2 of weight n^3, unit edges hanging off it
    let n = 6usize;
    let heavy = (n * n * n) as f64;
    let g = Graph::from_weighted(
        n,
        &[
            (0, 1, heavy),
            (1, 2, heavy),
            (0, 2, heavy),
            (2, 3, 1.0),
            (3, 4, 1.0),
            (4, 2, 1.0),
            (4, 5, 1.0),
        ],
    )
    .unwrap();
    let exact = oracle_strengths(&g).unwrap();
    let est = window_estimation(&g).unwrap();
    for (&k, &kt) in exact.iter().zip(&est.labels) {
        assert!(kt <= k);
    }
    // heavy edges are labelled in their own window, at least d/n = 36
    assert!(est.labels[..3].iter().all(|&k| k >= 36.0));
    assert!(est.labels[3] <= 2.0);
}

#[test]
fn mst_bounds_bracket_strengths() {
    for ng in corpus_graphs() {
        let g = &ng.graph;
        let exact = oracle_strengths(g).unwrap();
        let d = mst_bounds(g).d;
        let n2 = (g.n() * g.n()) as f64;
        for (i, (&k, &de)) in exact.iter().zip(&d).enumerate() {
            assert!(
                de <= k && k <= n2 * de,
                "{}: edge {i} d={de} k={k}",
                ng.name
            );
        }
    }
}

#[test]
fn strength_sum_identity_with_oracle() {
    for ng in corpus_graphs() {
        let g = &ng.graph;
        let exact = oracle_strengths(g).unwrap();
        let total: f64 = g
            .edges()
            .iter()
            .zip(&exact)
            .map(|(e, k)| e.weight / k)
            .sum();
        assert!(total <= (g.n() - 1) as f64 + 1e-9, "{}: {total}", ng.name);
    }
    // forests meet it with equality
    let tree =
        Graph::from_weighted(5, &[(0, 1, 2.0), (1, 2, 0.5), (1, 3, 7.0), (3, 4, 1.0)]).unwrap();
    let exact = oracle_strengths(&tree).unwrap();
    let total: f64 = tree
        .edges()
        .iter()
        .zip(&exact)
        .map(|(e, k)| e.weight / k)
        .sum();
    assert_eq!(total, 4.0);
}

#[test]
fn contracting_heavy_edges_keeps_lighter_strengths() {
    for seed in 0..30 {
        let g = corpus::random_graph(8, 0.5, Weights::Integer(6), 500 + seed);
        let exact = oracle_strengths(&g).unwrap();
        for threshold in [3.0, 5.0] {
            let heavy: Vec<usize> = (0..g.m())
                .filter(|&i| g.edge(i).weight >= threshold)
                .collect();
            let c = g.contract(&heavy);
            let after = oracle_strengths(&c.graph).unwrap();
            for (j, &orig) in c.edge_origin.iter().enumerate() {
                if exact[orig] < threshold {
                    assert_eq!(after[j], exact[orig], "seed {seed} edge {orig}");
                }
            }
        }
    }
}

/// Strengths by recursive minimum-cut splitting: an edge's strength is the
/// largest minimum cut among the nested components containing it before
/// some minimum cut separates its endpoints.
fn strengths_by_splitting(g: &Graph) -> Vec<f64> {
    fn split(g: &Graph, ids: &[usize], floor: f64, out: &mut [f64]) {
        let comps = g.connected_components();
        if comps.count > 1 {
            for part in g.nontrivial_components() {
                let sub: Vec<usize> = part.edge_origin.iter().map(|&i| ids[i]).collect();
                split(&part.graph, &sub, floor, out);
            }
            return;
        }
        if g.m() == 0 {
            return;
        }
        let cut = sparsecut::oracle::min_cut(g).unwrap().unwrap();
        let level = floor.max(cut.value);
        let side = cut.side_vec(g.n());
        let mut crossing = Vec::new();
        for (i, e) in g.edges().iter().enumerate() {
            if side[e.u] != side[e.v] {
                out[ids[i]] = level;
                crossing.push(i);
            }
        }
        let (rest, origin) = g.without_edges(&crossing);
        let sub: Vec<usize> = origin.iter().map(|&i| ids[i]).collect();
        split(&rest, &sub, level, out);
    }
    let mut out = vec![0.0; g.m()];
    let ids: Vec<usize> = (0..g.m()).collect();
    split(g, &ids, 0.0, &mut out);
    out
}

#[test]
fn oracle_agrees_with_recursive_min_cut_splitting() {
    for ng in corpus_graphs() {
        let g = &ng.graph;
        let a = oracle_strengths(g).unwrap();
        let b = strengths_by_splitting(g);
        for (i, (x, y)) in a.iter().zip(&b).enumerate() {
            assert!(
                (x - y).abs() <= 1e-9 * x.max(1.0),
                "{}: edge {i} {x} vs {y}",
                ng.name
            );
        }
    }
}

#[test]
fn estimation_cost_on_dense_multigraphs() {
    // labels are powers of two below the strength 7·copies; the cost stays
    // within the 8(n-1) that the doubling recursion guarantees
    for (n, copies) in [(6, 200), (8, 100), (10, 50), (12, 40)] {
        let g = corpus::multi_complete(n, copies);
        let est = estimation(&g, 1.0).unwrap();
        let strength = ((n - 1) * copies) as f64;
        assert!(est.labels.iter().all(|&l| l <= strength));
        assert!(
            est.cost(&g) <= 8.0 * (n - 1) as f64,
            "K{n}x{copies}: {}",
            est.cost(&g)
        );
        let win = window_estimation(&g).unwrap();
        assert!(win.labels.iter().all(|&l| l <= strength));
        assert!(
            win.cost(&g) <= 12.0 * (n - 1) as f64,
            "K{n}x{copies}: {}",
            win.cost(&g)
        );
    }
}

#[test]
fn at_most_n_minus_1_distinct_strengths() {
    for ng in corpus_graphs() {
        let g = &ng.graph;
        let mut k = oracle_strengths(g).unwrap();
        k.sort_by(f64::total_cmp);
        k.dedup();
        assert!(k.len() < g.n().max(2), "{}: {} distinct values", ng.name, k.len());
    }
}
