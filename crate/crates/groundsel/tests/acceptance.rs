//! Acceptance suite: nine end-to-end criteria covering the incremental
//! inverse, the pseudo-inverse bootstrap, optimizer exactness and budgets,
//! optimality deviations, the distributed pipeline, scaling exponents, and
//! naive/accelerated oracle equivalence.
//!
//! Each test prints one `criterion N PASS` line with the measured
//! quantities (visible with `cargo test --test acceptance -- --nocapture`);
//! a failure panics with the offending measurement.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use groundsel::bench::fit_scaling_exponent;
use groundsel::graph::{
    barabasi_albert, erdos_renyi, random_geometric, stochastic_block_model, Graph, NodePartition,
    SbmParams,
};
use groundsel::greedy::{
    distributed_greedy, lazy_greedy, ordinary_greedy, stochastic_greedy, InnerAlgorithm,
    SelectionTrace,
};
use groundsel::linalg::{ground_from_pinv, pinv_laplacian, woodbury_remove, DenseMatrix};
use groundsel::oracle::{brute_force_optimum, OracleKind};

fn rel_max_norm(a: &DenseMatrix, b: &DenseMatrix) -> f64 {
    a.max_abs_diff(b) / b.max_abs().max(f64::MIN_POSITIVE)
}

/// Criterion 1: chained Woodbury removals match fresh factorizations within
/// 1e-8 relative max-norm on 100 seeded connected ER graphs, n in [5, 60].
/// Removal sequences of length <= 5 are enumerated exhaustively where
/// feasible (n <= 8) and sampled (seeded) otherwise, checked after every
/// chained step.
#[test]
fn criterion_1_woodbury_vs_direct_chained() {
    fn check_step(
        a: &DenseMatrix,
        a_inv: &DenseMatrix,
        m: usize,
        worst: &mut f64,
        checks: &mut u64,
    ) -> (DenseMatrix, DenseMatrix) {
        let fast = woodbury_remove(a_inv, a, m).expect("legal removal");
        let reduced = a.delete_row_col(m).expect("legal removal");
        let direct = reduced.inverse().expect("invertible");
        let rel = rel_max_norm(&fast, &direct);
        assert!(rel <= 1e-8, "removal m={m} rel err {rel}");
        *worst = worst.max(rel);
        *checks += 1;
        (reduced, fast)
    }

    fn explore_all(
        a: &DenseMatrix,
        a_inv: &DenseMatrix,
        depth: usize,
        worst: &mut f64,
        checks: &mut u64,
    ) {
        if depth == 5 || a.rows() < 2 {
            return;
        }
        for m in 0..a.rows() {
            let (reduced, fast) = check_step(a, a_inv, m, worst, checks);
            explore_all(&reduced, &fast, depth + 1, worst, checks);
        }
    }

    let mut worst = 0.0f64;
    let mut checks = 0u64;
    let mut rng = ChaCha8Rng::seed_from_u64(900);
    for i in 0..100u64 {
        let n = if i < 12 {
            5 + (i as usize % 4)
        } else {
            9 + ((i as usize * 53) % 52)
        };
        let p = (4.0 / n as f64).clamp(0.2, 1.0);
        let graph = erdos_renyi(n, p, 9000 + i).expect("connected graph");
        let grounded = graph
            .laplacian()
            .delete_row_col(i as usize % n)
            .expect("in range");
        let inverse = grounded.inverse().expect("grounded Laplacian invertible");

        if n <= 8 {
            explore_all(&grounded, &inverse, 0, &mut worst, &mut checks);
        } else {
            for _ in 0..3 {
                let mut a = grounded.clone();
                let mut a_inv = inverse.clone();
                for _ in 0..5 {
                    if a.rows() < 2 {
                        break;
                    }
                    let m = rng.gen_range(0..a.rows());
                    let (reduced, fast) = check_step(&a, &a_inv, m, &mut worst, &mut checks);
                    a = reduced;
                    a_inv = fast;
                }
            }
        }
    }
    println!(
        "criterion 1 PASS: {checks} chained removal checks over 100 graphs, worst rel err {worst:.3e}"
    );
}

/// Criterion 2: the pseudo-inverse satisfies the four Moore-Penrose
/// conditions within 1e-8, and grounding any node off it inverts the
/// reduced Laplacian within 1e-8, on seeded graphs n in {5, 20, 50}.
#[test]
fn criterion_2_pseudoinverse_bootstrap() {
    let mut worst_mp = 0.0f64;
    let mut worst_ground = 0.0f64;
    for (n, p, seed) in [(5, 0.6, 21u64), (20, 0.25, 22), (50, 0.12, 23)] {
        let graph = erdos_renyi(n, p, seed).expect("connected graph");
        let laplacian = graph.laplacian();
        let pinv = pinv_laplacian(&laplacian).expect("connected");

        let lpl = laplacian.matmul(&pinv).unwrap().matmul(&laplacian).unwrap();
        let plp = pinv.matmul(&laplacian).unwrap().matmul(&pinv).unwrap();
        let lp = laplacian.matmul(&pinv).unwrap();
        let pl = pinv.matmul(&laplacian).unwrap();
        for (residual, what) in [
            (lpl.max_abs_diff(&laplacian), "L P L = L"),
            (plp.max_abs_diff(&pinv), "P L P = P"),
            (lp.max_abs_diff(&lp.transpose()), "L P symmetric"),
            (pl.max_abs_diff(&pl.transpose()), "P L symmetric"),
        ] {
            assert!(residual <= 1e-8, "n={n}: {what} residual {residual}");
            worst_mp = worst_mp.max(residual);
        }

        for m in 0..n {
            let grounded_inv = ground_from_pinv(&pinv, m).expect("in range");
            let grounded = laplacian.delete_row_col(m).expect("in range");
            let product = grounded_inv.matmul(&grounded).unwrap();
            let residual = product.max_abs_diff(&DenseMatrix::identity(n - 1));
            assert!(residual <= 1e-8, "n={n} m={m}: grounding residual {residual}");
            worst_ground = worst_ground.max(residual);
        }
    }
    println!(
        "criterion 2 PASS: Moore-Penrose worst residual {worst_mp:.3e}, grounding worst residual {worst_ground:.3e}"
    );
}

/// Criterion 3: lazy greedy reproduces ordinary greedy exactly (selections
/// and objective trajectories) on 50 seeded instances across topologies,
/// never spends more oracle calls, and its call-count advantage grows with
/// k in aggregate.
#[test]
fn criterion_3_lazy_exactness() {
    let ks = [5usize, 10, 20, 30];
    let ns = [100usize, 200, 300];
    let mut ratios_by_k: Vec<Vec<f64>> = vec![Vec::new(); ks.len()];
    for i in 0..50usize {
        let k = ks[i % 4];
        let n = ns[(i / 12) % 3];
        let seed = 3000 + i as u64;
        let graph = match i % 3 {
            0 => erdos_renyi(n, 0.08, seed),
            1 => barabasi_albert(n, 2, seed),
            _ => random_geometric(n, 0.18, seed),
        }
        .expect("connected graph");

        let ordinary = ordinary_greedy(&graph, k, OracleKind::Accelerated).unwrap();
        let lazy = lazy_greedy(&graph, k, OracleKind::Accelerated).unwrap();

        assert_eq!(
            ordinary.selections(),
            lazy.selections(),
            "instance {i}: selection sequences differ"
        );
        for (a, b) in ordinary.records.iter().zip(&lazy.records) {
            let rel = (a.objective - b.objective).abs() / (1.0 + a.objective.abs());
            assert!(rel <= 1e-12, "instance {i}: objective trajectories differ");
        }
        assert!(
            lazy.total_calls() <= ordinary.total_calls(),
            "instance {i}: lazy used more calls"
        );
        ratios_by_k[i % 4].push(ordinary.total_calls() as f64 / lazy.total_calls() as f64);
    }

    let means: Vec<f64> = ratios_by_k
        .iter()
        .map(|r| r.iter().sum::<f64>() / r.len() as f64)
        .collect();
    for w in means.windows(2) {
        assert!(
            w[1] > w[0],
            "lazy advantage should grow with k: means {means:?}"
        );
    }
    println!(
        "criterion 3 PASS: 50 instances exact; mean call ratio by k {:?}",
        ks.iter()
            .zip(&means)
            .map(|(k, m)| format!("k={k}: {m:.2}"))
            .collect::<Vec<_>>()
    );
}

/// Criterion 4: at n = 1000, k = 10, eps = 0.01 the sampling factor is
/// 2.17 +- 0.005, the stochastic call count equals the per-iteration ceil
/// sum exactly, and the ordinary/stochastic call ratio lands in [2.0, 2.4].
#[test]
fn criterion_4_stochastic_call_budget() {
    let n = 1000usize;
    let k = 10usize;
    let epsilon = 0.01f64;
    let beta = k as f64 / (1.0 / epsilon).ln();
    assert!(
        (beta - 2.17).abs() <= 0.005,
        "sampling factor beta {beta} outside 2.17 +- 0.005"
    );

    let graph = erdos_renyi(n, 0.05, 1).expect("connected graph");
    let stochastic = stochastic_greedy(&graph, k, epsilon, 1, OracleKind::Accelerated).unwrap();
    let expected: u64 = (0..k as u64)
        .map(|i| ((n as u64 - i) as f64 / beta).ceil() as u64)
        .sum();
    assert_eq!(
        stochastic.total_calls(),
        expected,
        "stochastic calls differ from the ceil sum"
    );

    let ordinary = ordinary_greedy(&graph, k, OracleKind::Accelerated).unwrap();
    let closed_form: u64 = (0..k as u64).map(|i| n as u64 - i).sum();
    assert_eq!(ordinary.total_calls(), closed_form);
    let ratio = ordinary.total_calls() as f64 / stochastic.total_calls() as f64;
    assert!(
        (2.0..=2.4).contains(&ratio),
        "call ratio {ratio} outside [2.0, 2.4]"
    );
    println!(
        "criterion 4 PASS: beta {beta:.5}, stochastic calls {} (= ceil sum), ordinary {}, ratio {ratio:.4}",
        stochastic.total_calls(),
        ordinary.total_calls()
    );
}

/// Criterion 5: on a 300-node ER graph with k = 12, eps = 0.5 and 100
/// sampling seeds, the mean percentage deviation of the stochastic final
/// objective from the ordinary baseline is below 2%, and the deviation
/// curve shrinks as k grows.
#[test]
fn criterion_5_optimality_deviation() {
    let k = 12usize;
    let graph = erdos_renyi(300, 0.05, 7).expect("connected graph");
    let baseline = ordinary_greedy(&graph, k, OracleKind::Accelerated).unwrap();

    let seeds: Vec<u64> = (1..=100).collect();
    let mut per_iteration = vec![Vec::with_capacity(seeds.len()); k];
    for &seed in &seeds {
        let trace = stochastic_greedy(&graph, k, 0.5, seed, OracleKind::Accelerated).unwrap();
        for iter in 1..=k {
            let b = baseline.objective_at(iter).unwrap();
            let c = trace.objective_at(iter).unwrap();
            per_iteration[iter - 1].push(100.0 * (c - b) / b);
        }
    }
    let curve: Vec<f64> = per_iteration
        .iter()
        .map(|v| v.iter().sum::<f64>() / v.len() as f64)
        .collect();

    let mean_at_k = curve[k - 1];
    assert!(
        mean_at_k < 2.0,
        "mean deviation at k={k} is {mean_at_k}% (>= 2%)"
    );
    assert!(
        curve[0] > curve[k - 1],
        "deviation should shrink with k: {curve:?}"
    );
    let head = (curve[0] + curve[1] + curve[2]) / 3.0;
    let tail = (curve[k - 3] + curve[k - 2] + curve[k - 1]) / 3.0;
    assert!(
        head > tail,
        "deviation should shrink with k: head {head}%, tail {tail}%"
    );
    println!(
        "criterion 5 PASS: 100 seeds, mean deviation at k=12 is {mean_at_k:.3}% (curve head {head:.2}% -> tail {tail:.2}%)"
    );
}

/// Criterion 6: on 30 seeded brute-forceable instances, ordinary greedy's
/// objective stays within 1.10x of the exhaustive optimum.
///
/// The family is pre-registered: ER(p = 0.5), n cycling 10..12, k cycling
/// 1..3, seeds 0..29. The 1.10 factor is an empirical observation for
/// moderately dense instances, not a theorem: wider scans (3360 sparse
/// instances, n <= 12) show ratios up to 1.73, concentrated at n <= 9.
#[test]
fn criterion_6_greedy_vs_brute_force() {
    let mut worst: f64 = 1.0;
    for i in 0..30u64 {
        let n = 10 + (i % 3) as usize;
        let k = 1 + (i % 3) as usize;
        let graph = erdos_renyi(n, 0.5, i).expect("connected graph");
        let greedy = ordinary_greedy(&graph, k, OracleKind::Naive).unwrap();
        let (_, optimal) = brute_force_optimum(&graph, k).unwrap();
        let ratio = greedy.final_objective() / optimal;
        assert!(
            ratio <= 1.10,
            "instance {i} (n={n}, k={k}): greedy/optimal ratio {ratio}"
        );
        worst = worst.max(ratio);
    }
    println!("criterion 6 PASS: 30 instances, worst greedy/optimal objective ratio {worst:.4}");
}

/// Criterion 7: the distributed pipeline (stage-wise stochastic, eps = 0.5)
/// lands within 2% of the full-graph ordinary baseline at k = 10, both on a
/// clustered block model with its ground-truth partition and on the
/// homogeneous variant (p_out = p_in) with an arbitrary equal partition.
#[test]
fn criterion_7_distributed_deviation() {
    let k = 10usize;
    let inner = InnerAlgorithm::Stochastic { epsilon: 0.5 };
    let mut reported = Vec::new();
    for (label, p_out, equal_partition) in
        [("clustered", 0.02, false), ("homogeneous", 0.05, true)]
    {
        let params = SbmParams {
            clusters: 4,
            nodes_per_cluster: 100,
            p_in: 0.05,
            p_out,
        };
        let (graph, ground_truth) = stochastic_block_model(&params, 11).expect("connected graph");
        let partition = if equal_partition {
            NodePartition::equal(&graph, 4, 11).unwrap()
        } else {
            ground_truth
        };
        let baseline = ordinary_greedy(&graph, k, OracleKind::Accelerated).unwrap();
        let distributed =
            distributed_greedy(&graph, k, &partition, &inner, 1, OracleKind::Accelerated).unwrap();
        let deviation = 100.0 * (distributed.final_objective() - baseline.final_objective())
            / baseline.final_objective();
        assert!(
            deviation.abs() <= 2.0,
            "{label}: deviation {deviation}% exceeds 2%"
        );
        reported.push(format!("{label} {deviation:.3}%"));
    }
    println!(
        "criterion 7 PASS: distributed vs ordinary deviation at k=10: {}",
        reported.join(", ")
    );
}

/// Criterion 8: with the accelerated oracle and k = 5% of n over
/// n in {100, 200, 400, 800}, the fitted call-count exponent is 1.0 +- 0.15
/// for stochastic greedy and 2.0 +- 0.15 for ordinary greedy; call counts
/// match their closed forms exactly. Wall-time exponents are printed but
/// not asserted.
#[test]
fn criterion_8_scaling_exponents() {
    let sizes = [100usize, 200, 400, 800];
    let epsilon = 0.01;
    let mut ordinary_calls = Vec::new();
    let mut stochastic_calls = Vec::new();
    let mut ordinary_times = Vec::new();
    let mut stochastic_times = Vec::new();
    for &n in &sizes {
        let k = (0.05 * n as f64).round() as usize;
        let graph = erdos_renyi(n, 0.05, 1).expect("connected graph");

        let ordinary = ordinary_greedy(&graph, k, OracleKind::Accelerated).unwrap();
        let closed_form: u64 = (0..k as u64).map(|i| n as u64 - i).sum();
        assert_eq!(ordinary.total_calls(), closed_form);
        ordinary_calls.push((n as f64, ordinary.total_calls() as f64));
        ordinary_times.push((n as f64, ordinary.total_seconds()));

        let stochastic =
            stochastic_greedy(&graph, k, epsilon, 1, OracleKind::Accelerated).unwrap();
        let beta = k as f64 / (1.0 / epsilon).ln();
        let ceil_sum: u64 = (0..k as u64)
            .map(|i| ((n as u64 - i) as f64 / beta).ceil() as u64)
            .sum();
        assert_eq!(stochastic.total_calls(), ceil_sum);
        stochastic_calls.push((n as f64, stochastic.total_calls() as f64));
        stochastic_times.push((n as f64, stochastic.total_seconds()));
    }

    let fit_ordinary = fit_scaling_exponent(&ordinary_calls).unwrap();
    let fit_stochastic = fit_scaling_exponent(&stochastic_calls).unwrap();
    assert!(
        (fit_ordinary.exponent - 2.0).abs() <= 0.15,
        "ordinary call-count exponent {} outside 2.0 +- 0.15",
        fit_ordinary.exponent
    );
    assert!(
        (fit_stochastic.exponent - 1.0).abs() <= 0.15,
        "stochastic call-count exponent {} outside 1.0 +- 0.15",
        fit_stochastic.exponent
    );
    let time_ordinary = fit_scaling_exponent(&ordinary_times).unwrap();
    let time_stochastic = fit_scaling_exponent(&stochastic_times).unwrap();
    println!(
        "criterion 8 PASS: call-count exponents ordinary {:.4}, stochastic {:.4} \
         (informational wall-time exponents: ordinary {:.2}, stochastic {:.2})",
        fit_ordinary.exponent,
        fit_stochastic.exponent,
        time_ordinary.exponent,
        time_stochastic.exponent
    );
}

/// Criterion 9: every optimizer produces identical selections (and
/// objectives within 1e-8 relative) under the naive and accelerated oracles
/// across 30 seeded instances.
#[test]
fn criterion_9_oracle_kind_equivalence() {
    fn assert_equivalent(label: &str, i: usize, naive: &SelectionTrace, accel: &SelectionTrace) {
        assert_eq!(
            naive.selections(),
            accel.selections(),
            "instance {i} {label}: selections differ between oracles"
        );
        for (a, b) in naive.records.iter().zip(&accel.records) {
            let rel = (a.objective - b.objective).abs() / (1.0 + a.objective.abs());
            assert!(
                rel <= 1e-8,
                "instance {i} {label}: objectives differ by {rel}"
            );
        }
    }

    for i in 0..30usize {
        let n = 20 + (i * 40) / 29;
        let k = 2 + i % 5;
        let seed = 7000 + i as u64;
        let graph = match i % 3 {
            0 => erdos_renyi(n, 0.2, seed),
            1 => barabasi_albert(n, 2, seed),
            _ => random_geometric(n, 0.3, seed),
        }
        .expect("connected graph");

        let runs: Vec<(&str, Box<dyn Fn(&Graph, OracleKind) -> SelectionTrace>)> = vec![
            (
                "ordinary",
                Box::new(move |g, kind| ordinary_greedy(g, k, kind).unwrap()),
            ),
            (
                "lazy",
                Box::new(move |g, kind| lazy_greedy(g, k, kind).unwrap()),
            ),
            (
                "stochastic",
                Box::new(move |g, kind| stochastic_greedy(g, k, 0.5, seed, kind).unwrap()),
            ),
            (
                "distributed",
                Box::new(move |g, kind| {
                    let partition = NodePartition::equal(g, 3, seed).unwrap();
                    distributed_greedy(
                        g,
                        k,
                        &partition,
                        &InnerAlgorithm::Stochastic { epsilon: 0.5 },
                        seed,
                        kind,
                    )
                    .unwrap()
                }),
            ),
        ];
        for (label, run) in runs {
            let naive = run(&graph, OracleKind::Naive);
            let accelerated = run(&graph, OracleKind::Accelerated);
            assert_equivalent(label, i, &naive, &accelerated);
        }
    }
    println!("criterion 9 PASS: 30 instances, all four optimizers agree across oracle kinds");
}
