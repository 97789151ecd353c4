//! Experiment execution: builds the cell grid for each experiment kind,
//! runs every cell deterministically from its seeds (independent units may
//! run in parallel on the ambient rayon pool), and assembles aggregates and
//! scaling fits.

use std::collections::BTreeMap;
use std::fs;


use rayon::prelude::*;

use crate::graph::{
    barabasi_albert, erdos_renyi, random_geometric, stochastic_block_model, write_edge_list,
    write_partition, Graph, NodePartition,
};
use crate::greedy::{
    distributed_greedy, lazy_greedy, ordinary_greedy, stochastic_greedy, Algorithm, GreedyError,
    SelectionTrace,
};
use crate::oracle::OracleKind;

use super::config::{
    ExperimentConfig, ExperimentKind, GeneratorParams, PartitionMode, Topology,
};
use super::fit::{fit_scaling_exponent, summarize};
use super::report::{
    fmt_sig12, AggregateRow, CellOutcome, CellResult, ExperimentReport, FitRow, Prediction,
};
use super::BenchError;

fn generate(
    topology: Topology,
    n: usize,
    params: &GeneratorParams,
    seed: u64,
) -> Result<(Graph, String), BenchError> {
    let (graph, instance) = match topology {
        Topology::Er => (
            erdos_renyi(n, params.er_p, seed)?,
            format!("er(n={n},p={},seed={seed})", params.er_p),
        ),
        Topology::Ba => (
            barabasi_albert(n, params.ba_m, seed)?,
            format!("ba(n={n},m={},seed={seed})", params.ba_m),
        ),
        Topology::Rg => (
            random_geometric(n, params.rg_radius, seed)?,
            format!("rg(n={n},r={},seed={seed})", params.rg_radius),
        ),
    };
    Ok((graph, instance))
}

/// Runs one non-distributed optimizer, with an optional discarded warm-up.
fn run_simple(
    graph: &Graph,
    instance: &str,
    algorithm: Algorithm,
    k: usize,
    epsilon: Option<f64>,
    seed: u64,
    oracle: OracleKind,
    warmup: bool,
) -> Result<SelectionTrace, GreedyError> {
    let run = || -> Result<SelectionTrace, GreedyError> {
        match algorithm {
            Algorithm::Ordinary => ordinary_greedy(graph, k, oracle),
            Algorithm::Lazy => lazy_greedy(graph, k, oracle),
            Algorithm::Stochastic => {
                let epsilon = epsilon.expect("validated: stochastic has epsilon");
                stochastic_greedy(graph, k, epsilon, seed, oracle)
            }
            Algorithm::Distributed => unreachable!("distributed runs under the sbm experiment"),
        }
    };
    if warmup {
        run()?;
    }
    Ok(run()?.with_instance(instance))
}

struct CellParams {
    topology: Option<Topology>,
    n: usize,
    k: usize,
    epsilon: Option<f64>,
    seed: u64,
    algorithm: Algorithm,
    oracle: OracleKind,
    p_out_factor: Option<f64>,
}

fn cell_id(p: &CellParams) -> String {
    let mut id = String::new();
    if let Some(t) = p.topology {
        id.push_str(&format!("{t}-"));
    }
    if let Some(f) = p.p_out_factor {
        id.push_str(&format!("pout{}-", fmt_sig12(f)));
    }
    id.push_str(&format!("n{}-k{}", p.n, p.k));
    if let Some(e) = p.epsilon {
        id.push_str(&format!("-eps{}", fmt_sig12(e)));
    }
    id.push_str(&format!("-seed{}-{}-{}", p.seed, p.algorithm, p.oracle));
    id
}

fn make_cell(p: CellParams, outcome: Result<SelectionTrace, GreedyError>) -> CellResult {
    let outcome = match outcome {
        Ok(trace) => CellOutcome::Ok { trace },
        Err(e) => CellOutcome::Failed {
            error: e.to_string(),
        },
    };
    CellResult {
        id: cell_id(&p),
        topology: p.topology,
        n: p.n,
        k: p.k,
        epsilon: p.epsilon,
        seed: p.seed,
        algorithm: p.algorithm,
        oracle: p.oracle,
        p_out_factor: p.p_out_factor,
        outcome,
    }
}

fn failed_unit(params: Vec<CellParams>, error: &BenchError) -> Vec<CellResult> {
    params
        .into_iter()
        .map(|p| {
            make_cell(
                p,
                Err(GreedyError::Oracle(crate::oracle::OracleError::Disconnected)),
            )
        })
        .map(|mut cell| {
            cell.outcome = CellOutcome::Failed {
                error: error.to_string(),
            };
            cell
        })
        .collect()
}

fn sanitize(name: &str) -> String {
    name.chars()
        .map(|c| {
            if c.is_ascii_alphanumeric() || c == '.' || c == '=' || c == '-' {
                c
            } else {
                '-'
            }
        })
        .collect::<String>()
        .trim_matches('-')
        .to_string()
}

fn dump_graph(
    cfg: &ExperimentConfig,
    instance: &str,
    graph: &Graph,
    partition: Option<&NodePartition>,
) -> Result<(), BenchError> {
    if !cfg.output.dump_graphs {
        return Ok(());
    }
    let dir = cfg
        .output
        .dir
        .as_ref()
        .ok_or_else(|| BenchError::Config("dump_graphs requires an output directory".into()))?
        .join("graphs");
    fs::create_dir_all(&dir)?;
    let base = sanitize(instance);
    let mut file = fs::File::create(dir.join(format!("{base}.edges")))?;
    write_edge_list(graph, &mut file)?;
    if let Some(p) = partition {
        let mut file = fs::File::create(dir.join(format!("{base}.part")))?;
        write_partition(p, &mut file)?;
    }
    Ok(())
}

/// Executes an experiment configuration: every cell deterministically from
/// its seeds, per-cell failures recorded without aborting the run, wall
/// times and call counts captured per iteration.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentReport, BenchError> {
    cfg.validate()?;
    if cfg.output.dump_graphs && cfg.output.dir.is_none() {
        return Err(BenchError::Config(
            "dump_graphs requires an output directory".into(),
        ));
    }
    let cells = match cfg.kind {
        ExperimentKind::Scaling => run_scaling(cfg),
        ExperimentKind::LazyProfile => run_lazy_profile(cfg),
        ExperimentKind::EpsilonSweep => run_epsilon_sweep(cfg),
        ExperimentKind::MonteCarlo => run_monte_carlo(cfg)?,
        ExperimentKind::Sbm => run_sbm(cfg),
    };
    let (aggregates, fits) = match cfg.kind {
        ExperimentKind::Scaling => aggregate_scaling(cfg, &cells),
        ExperimentKind::LazyProfile => (aggregate_lazy_profile(&cells), Vec::new()),
        ExperimentKind::EpsilonSweep => (aggregate_epsilon_sweep(cfg, &cells), Vec::new()),
        ExperimentKind::MonteCarlo => (aggregate_monte_carlo(cfg, &cells), Vec::new()),
        ExperimentKind::Sbm => (aggregate_sbm(cfg, &cells), Vec::new()),
    };
    let failed_cells = cells
        .iter()
        .filter(|c| matches!(c.outcome, CellOutcome::Failed { .. }))
        .count();
    Ok(ExperimentReport {
        config: cfg.clone(),
        cells,
        aggregates,
        fits,
        failed_cells,
    })
}

fn run_scaling(cfg: &ExperimentConfig) -> Vec<CellResult> {
    // A unit owns one generated graph and runs every algorithm on it.
    let mut units = Vec::new();
    for &topology in &cfg.topologies {
        for &n in &cfg.n {
            for k in cfg.ks_for(n) {
                for &seed in &cfg.seed_list() {
                    units.push((topology, n, k, seed));
                }
            }
        }
    }
    units
        .par_iter()
        .map(|&(topology, n, k, seed)| {
            let mut params = Vec::new();
            for spec in &cfg.algorithms {
                let oracle = cfg.oracle_for(spec);
                let epsilons: Vec<Option<f64>> = if spec.algorithm == Algorithm::Stochastic {
                    cfg.epsilon.iter().map(|&e| Some(e)).collect()
                } else {
                    vec![None]
                };
                for epsilon in epsilons {
                    params.push(CellParams {
                        topology: Some(topology),
                        n,
                        k,
                        epsilon,
                        seed,
                        algorithm: spec.algorithm,
                        oracle,
                        p_out_factor: None,
                    });
                }
            }
            let (graph, instance) = match generate(topology, n, &cfg.generator, seed) {
                Ok(pair) => pair,
                Err(e) => return failed_unit(params, &e),
            };
            if let Err(e) = dump_graph(cfg, &instance, &graph, None) {
                return failed_unit(params, &e);
            }
            params
                .into_iter()
                .map(|p| {
                    let outcome = run_simple(
                        &graph,
                        &instance,
                        p.algorithm,
                        p.k,
                        p.epsilon,
                        p.seed,
                        p.oracle,
                        cfg.warmup,
                    );
                    make_cell(p, outcome)
                })
                .collect()
        })
        .flatten()
        .collect()
}

fn run_lazy_profile(cfg: &ExperimentConfig) -> Vec<CellResult> {
    let n = cfg.n[0];
    let mut units = Vec::new();
    for &topology in &cfg.topologies {
        for &k in &cfg.k {
            for &seed in &cfg.seed_list() {
                units.push((topology, k, seed));
            }
        }
    }
    units
        .par_iter()
        .map(|&(topology, k, seed)| {
            let params: Vec<CellParams> = [Algorithm::Ordinary, Algorithm::Lazy]
                .into_iter()
                .map(|algorithm| CellParams {
                    topology: Some(topology),
                    n,
                    k,
                    epsilon: None,
                    seed,
                    algorithm,
                    oracle: cfg.oracle,
                    p_out_factor: None,
                })
                .collect();
            let (graph, instance) = match generate(topology, n, &cfg.generator, seed) {
                Ok(pair) => pair,
                Err(e) => return failed_unit(params, &e),
            };
            if let Err(e) = dump_graph(cfg, &instance, &graph, None) {
                return failed_unit(params, &e);
            }
            params
                .into_iter()
                .map(|p| {
                    let outcome = run_simple(
                        &graph, &instance, p.algorithm, p.k, None, p.seed, p.oracle, cfg.warmup,
                    );
                    make_cell(p, outcome)
                })
                .collect()
        })
        .flatten()
        .collect()
}

fn run_epsilon_sweep(cfg: &ExperimentConfig) -> Vec<CellResult> {
    let n = cfg.n[0];
    let k = cfg.ks_for(n)[0];
    let mut units = Vec::new();
    for &topology in &cfg.topologies {
        for &seed in &cfg.seed_list() {
            units.push((topology, seed));
        }
    }
    units
        .par_iter()
        .map(|&(topology, seed)| {
            let mut params = vec![CellParams {
                topology: Some(topology),
                n,
                k,
                epsilon: None,
                seed,
                algorithm: Algorithm::Ordinary,
                oracle: cfg.oracle,
                p_out_factor: None,
            }];
            for &epsilon in &cfg.epsilon {
                params.push(CellParams {
                    topology: Some(topology),
                    n,
                    k,
                    epsilon: Some(epsilon),
                    seed,
                    algorithm: Algorithm::Stochastic,
                    oracle: cfg.oracle,
                    p_out_factor: None,
                });
            }
            let (graph, instance) = match generate(topology, n, &cfg.generator, seed) {
                Ok(pair) => pair,
                Err(e) => return failed_unit(params, &e),
            };
            if let Err(e) = dump_graph(cfg, &instance, &graph, None) {
                return failed_unit(params, &e);
            }
            params
                .into_iter()
                .map(|p| {
                    let outcome = run_simple(
                        &graph,
                        &instance,
                        p.algorithm,
                        p.k,
                        p.epsilon,
                        p.seed,
                        p.oracle,
                        false,
                    );
                    make_cell(p, outcome)
                })
                .collect()
        })
        .flatten()
        .collect()
}

fn run_monte_carlo(cfg: &ExperimentConfig) -> Result<Vec<CellResult>, BenchError> {
    let topology = cfg.topologies[0];
    let n = cfg.n[0];
    let k = cfg.ks_for(n)[0];
    let epsilon = cfg.epsilon[0];
    let seeds = cfg.seed_list();
    let graph_seed = cfg.graph_seed.unwrap_or(seeds[0]);

    // One fixed graph and one baseline run; the seeds drive the sampling.
    let (graph, instance) = generate(topology, n, &cfg.generator, graph_seed)?;
    dump_graph(cfg, &instance, &graph, None)?;
    let baseline_params = CellParams {
        topology: Some(topology),
        n,
        k,
        epsilon: None,
        seed: graph_seed,
        algorithm: Algorithm::Ordinary,
        oracle: cfg.oracle,
        p_out_factor: None,
    };
    let baseline = make_cell(
        baseline_params,
        run_simple(
            &graph,
            &instance,
            Algorithm::Ordinary,
            k,
            None,
            graph_seed,
            cfg.oracle,
            false,
        ),
    );

    let mut cells = vec![baseline];
    cells.par_extend(seeds.par_iter().map(|&seed| {
        let p = CellParams {
            topology: Some(topology),
            n,
            k,
            epsilon: Some(epsilon),
            seed,
            algorithm: Algorithm::Stochastic,
            oracle: cfg.oracle,
            p_out_factor: None,
        };
        let outcome = run_simple(
            &graph,
            &instance,
            Algorithm::Stochastic,
            k,
            Some(epsilon),
            seed,
            cfg.oracle,
            false,
        );
        make_cell(p, outcome)
    }));
    Ok(cells)
}

fn run_sbm(cfg: &ExperimentConfig) -> Vec<CellResult> {
    let n = cfg.sbm.clusters * cfg.sbm.nodes_per_cluster;
    let k = cfg.first_k().expect("validated");
    let mut units = Vec::new();
    for &factor in &cfg.sbm.p_out_factors {
        for &seed in &cfg.seed_list() {
            units.push((factor, seed));
        }
    }
    units
        .par_iter()
        .map(|&(factor, seed)| {
            let baseline_params = CellParams {
                topology: None,
                n,
                k,
                epsilon: None,
                seed,
                algorithm: Algorithm::Ordinary,
                oracle: cfg.oracle,
                p_out_factor: Some(factor),
            };
            let dist_params = CellParams {
                topology: None,
                n,
                k,
                epsilon: cfg.distributed.inner_epsilon_if_stochastic(),
                seed,
                algorithm: Algorithm::Distributed,
                oracle: cfg.oracle,
                p_out_factor: Some(factor),
            };
            let params = cfg.sbm.params_for_factor(factor);
            let instance = format!(
                "sbm(c={},nc={},pin={},pout={},seed={seed})",
                params.clusters,
                params.nodes_per_cluster,
                fmt_sig12(params.p_in),
                fmt_sig12(params.p_out),
            );
            let (graph, ground_truth) = match stochastic_block_model(&params, seed) {
                Ok(pair) => pair,
                Err(e) => {
                    return failed_unit(vec![baseline_params, dist_params], &BenchError::Graph(e))
                }
            };
            let partition = match cfg.sbm.partition {
                PartitionMode::GroundTruth => Ok(ground_truth),
                PartitionMode::EqualRandom => {
                    NodePartition::equal(&graph, cfg.sbm.clusters, seed).map_err(BenchError::Graph)
                }
            };
            let partition = match partition {
                Ok(p) => p,
                Err(e) => return failed_unit(vec![baseline_params, dist_params], &e),
            };
            if let Err(e) = dump_graph(cfg, &instance, &graph, Some(&partition)) {
                return failed_unit(vec![baseline_params, dist_params], &e);
            }

            let inner = match cfg.distributed.inner_algorithm() {
                Ok(inner) => inner,
                Err(e) => return failed_unit(vec![baseline_params, dist_params], &e),
            };
            let baseline_outcome = run_simple(
                &graph,
                &instance,
                Algorithm::Ordinary,
                k,
                None,
                seed,
                cfg.oracle,
                false,
            );
            let dist_outcome = distributed_greedy(&graph, k, &partition, &inner, seed, cfg.oracle)
                .map(|t| t.with_instance(&instance));
            vec![
                make_cell(baseline_params, baseline_outcome),
                make_cell(dist_params, dist_outcome),
            ]
        })
        .flatten()
        .collect()
}

// --- aggregation ---

type Labels = BTreeMap<String, String>;

fn labels(pairs: &[(&str, String)]) -> Labels {
    pairs
        .iter()
        .map(|(k, v)| (k.to_string(), v.clone()))
        .collect()
}

fn mean(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len() as f64
}

fn aggregate_scaling(
    cfg: &ExperimentConfig,
    cells: &[CellResult],
) -> (Vec<AggregateRow>, Vec<FitRow>) {
    // Group means over seeds at each (topology, algorithm, oracle, eps, n, k).
    let mut groups: BTreeMap<(String, String, String, usize, usize), (Vec<f64>, Vec<f64>)> =
        BTreeMap::new();
    for cell in cells {
        let Some(trace) = cell.trace() else { continue };
        let key = (
            cell.topology.map(|t| t.to_string()).unwrap_or_default(),
            cell.algorithm.to_string(),
            format!(
                "{}{}",
                cell.oracle,
                cell.epsilon
                    .map(|e| format!(",eps={}", fmt_sig12(e)))
                    .unwrap_or_default()
            ),
            cell.n,
            cell.k,
        );
        let entry = groups.entry(key).or_default();
        entry.0.push(trace.total_seconds());
        entry.1.push(trace.total_calls() as f64);
    }

    let mut aggregates = Vec::new();
    // Points per (topology, algorithm, oracle/eps) across n for the fits.
    let mut fit_points: BTreeMap<(String, String, String), Vec<(f64, f64, f64)>> = BTreeMap::new();
    for ((topology, algorithm, oracle), n, k) in groups.keys().map(|k| ((k.0.clone(), k.1.clone(), k.2.clone()), k.3, k.4)) {
        let (seconds, calls) = &groups[&(topology.clone(), algorithm.clone(), oracle.clone(), n, k)];
        let mean_seconds = mean(seconds);
        let mean_calls = mean(calls);
        aggregates.push(AggregateRow {
            table: "scaling".into(),
            labels: labels(&[
                ("topology", topology.clone()),
                ("algorithm", algorithm.clone()),
                ("oracle", oracle.clone()),
                ("n", n.to_string()),
                ("k", k.to_string()),
            ]),
            metrics: [
                ("mean_seconds".to_string(), mean_seconds),
                ("mean_calls".to_string(), mean_calls),
                ("runs".to_string(), seconds.len() as f64),
            ]
            .into(),
        });
        fit_points
            .entry((topology, algorithm, oracle))
            .or_default()
            .push((n as f64, mean_seconds, mean_calls));
    }

    let mut fits = Vec::new();
    for ((topology, algorithm, oracle), mut points) in fit_points {
        points.sort_by(|a, b| a.0.total_cmp(&b.0));
        if points.len() < 3 {
            continue;
        }
        let group_labels = labels(&[
            ("topology", topology),
            ("algorithm", algorithm),
            ("oracle", oracle),
        ]);
        let tables: [(&str, Vec<(f64, f64)>); 2] = [
            (
                "wall_time_vs_n",
                points.iter().map(|p| (p.0, p.1)).collect(),
            ),
            (
                "call_count_vs_n",
                points.iter().map(|p| (p.0, p.2)).collect(),
            ),
        ];
        for (table, data) in tables {
            if let Ok(fit) = fit_scaling_exponent(&data) {
                let predictions = cfg
                    .extrapolate
                    .iter()
                    .map(|&n| Prediction {
                        n,
                        value: fit.predict(n as f64),
                    })
                    .collect();
                fits.push(FitRow {
                    table: table.into(),
                    labels: group_labels.clone(),
                    fit,
                    predictions,
                });
            }
        }
    }
    (aggregates, fits)
}

fn aggregate_lazy_profile(cells: &[CellResult]) -> Vec<AggregateRow> {
    // Pair ordinary/lazy runs per (topology, k, seed).
    let mut pairs: BTreeMap<(String, usize, u64), (Option<&SelectionTrace>, Option<&SelectionTrace>)> =
        BTreeMap::new();
    for cell in cells {
        let Some(trace) = cell.trace() else { continue };
        let key = (
            cell.topology.map(|t| t.to_string()).unwrap_or_default(),
            cell.k,
            cell.seed,
        );
        let entry = pairs.entry(key).or_default();
        match cell.algorithm {
            Algorithm::Ordinary => entry.0 = Some(trace),
            Algorithm::Lazy => entry.1 = Some(trace),
            _ => {}
        }
    }
    let mut groups: BTreeMap<(String, usize), Vec<(f64, f64, f64, f64)>> = BTreeMap::new();
    for ((topology, k, _seed), (ord, lazy)) in pairs {
        let (Some(ord), Some(lazy)) = (ord, lazy) else { continue };
        groups.entry((topology, k)).or_default().push((
            ord.total_calls() as f64 / lazy.total_calls() as f64,
            ord.total_seconds() / lazy.total_seconds(),
            ord.total_calls() as f64,
            lazy.total_calls() as f64,
        ));
    }
    groups
        .into_iter()
        .map(|((topology, k), rows)| AggregateRow {
            table: "lazy_speedup".into(),
            labels: labels(&[("topology", topology), ("k", k.to_string())]),
            metrics: [
                (
                    "mean_call_ratio".to_string(),
                    mean(&rows.iter().map(|r| r.0).collect::<Vec<_>>()),
                ),
                (
                    "mean_time_ratio".to_string(),
                    mean(&rows.iter().map(|r| r.1).collect::<Vec<_>>()),
                ),
                (
                    "mean_ordinary_calls".to_string(),
                    mean(&rows.iter().map(|r| r.2).collect::<Vec<_>>()),
                ),
                (
                    "mean_lazy_calls".to_string(),
                    mean(&rows.iter().map(|r| r.3).collect::<Vec<_>>()),
                ),
                ("runs".to_string(), rows.len() as f64),
            ]
            .into(),
        })
        .collect()
}

/// Per-iteration percentage deviations of candidate cells against the
/// baseline cell that shares their group key.
fn deviation_rows(
    cells: &[CellResult],
    table: &str,
    baseline_of: impl Fn(&CellResult) -> Option<String>,
    candidate_of: impl Fn(&CellResult) -> Option<(String, String)>,
) -> Vec<AggregateRow> {
    let mut baselines: BTreeMap<String, &SelectionTrace> = BTreeMap::new();
    for cell in cells {
        if let (Some(key), Some(trace)) = (baseline_of(cell), cell.trace()) {
            baselines.insert(key, trace);
        }
    }
    // group label -> iteration -> deviations
    let mut deviations: BTreeMap<String, BTreeMap<usize, Vec<f64>>> = BTreeMap::new();
    for cell in cells {
        let Some((baseline_key, group)) = candidate_of(cell) else {
            continue;
        };
        let (Some(trace), Some(base)) = (cell.trace(), baselines.get(&baseline_key)) else {
            continue;
        };
        for iteration in 1..=trace.records.len() {
            let (Some(c), Some(b)) = (trace.objective_at(iteration), base.objective_at(iteration))
            else {
                continue;
            };
            deviations
                .entry(group.clone())
                .or_default()
                .entry(iteration)
                .or_default()
                .push(100.0 * (c - b) / b);
        }
    }
    let mut rows = Vec::new();
    for (group, by_iteration) in deviations {
        for (iteration, values) in by_iteration {
            let mut lbs: Labels = group
                .split(';')
                .filter(|s| !s.is_empty())
                .filter_map(|kv| kv.split_once('='))
                .map(|(k, v)| (k.to_string(), v.to_string()))
                .collect();
            lbs.insert("iteration".into(), iteration.to_string());
            rows.push(AggregateRow {
                table: table.to_string(),
                labels: lbs,
                metrics: [
                    ("mean_deviation_pct".to_string(), mean(&values)),
                    (
                        "max_deviation_pct".to_string(),
                        values.iter().fold(f64::NEG_INFINITY, |a, &b| a.max(b)),
                    ),
                    ("runs".to_string(), values.len() as f64),
                ]
                .into(),
            });
        }
    }
    rows
}

fn aggregate_epsilon_sweep(cfg: &ExperimentConfig, cells: &[CellResult]) -> Vec<AggregateRow> {
    let mut rows = deviation_rows(
        cells,
        "deviation_vs_k",
        |cell| {
            (cell.algorithm == Algorithm::Ordinary).then(|| {
                format!(
                    "{}-{}",
                    cell.topology.map(|t| t.to_string()).unwrap_or_default(),
                    cell.seed
                )
            })
        },
        |cell| {
            (cell.algorithm == Algorithm::Stochastic).then(|| {
                let topology = cell.topology.map(|t| t.to_string()).unwrap_or_default();
                (
                    format!("{topology}-{}", cell.seed),
                    format!(
                        "topology={topology};epsilon={}",
                        fmt_sig12(cell.epsilon.unwrap_or(f64::NAN))
                    ),
                )
            })
        },
    );
    // Call-budget ratios per epsilon.
    let mut by_eps: BTreeMap<String, (Vec<f64>, Vec<f64>)> = BTreeMap::new();
    let mut baseline_calls: BTreeMap<u64, f64> = BTreeMap::new();
    for cell in cells {
        if cell.algorithm == Algorithm::Ordinary {
            if let Some(t) = cell.trace() {
                baseline_calls.insert(cell.seed, t.total_calls() as f64);
            }
        }
    }
    for cell in cells {
        if cell.algorithm != Algorithm::Stochastic {
            continue;
        }
        let (Some(trace), Some(&base)) = (cell.trace(), baseline_calls.get(&cell.seed)) else {
            continue;
        };
        let entry = by_eps
            .entry(fmt_sig12(cell.epsilon.unwrap_or(f64::NAN)))
            .or_default();
        entry.0.push(base / trace.total_calls() as f64);
        entry.1.push(trace.total_calls() as f64);
    }
    let _ = cfg;
    for (eps, (ratios, calls)) in by_eps {
        rows.push(AggregateRow {
            table: "stochastic_call_budget".into(),
            labels: labels(&[("epsilon", eps)]),
            metrics: [
                ("mean_call_ratio_vs_ordinary".to_string(), mean(&ratios)),
                ("mean_calls".to_string(), mean(&calls)),
                ("runs".to_string(), ratios.len() as f64),
            ]
            .into(),
        });
    }
    rows
}

fn aggregate_monte_carlo(cfg: &ExperimentConfig, cells: &[CellResult]) -> Vec<AggregateRow> {
    let k = cfg.first_k().unwrap_or(1);
    let at_k = cfg.at_k.unwrap_or(k);
    let mut rows = deviation_rows(
        cells,
        "deviation_vs_k",
        |cell| (cell.algorithm == Algorithm::Ordinary).then(|| "baseline".to_string()),
        |cell| {
            (cell.algorithm == Algorithm::Stochastic).then(|| {
                (
                    "baseline".to_string(),
                    format!(
                        "epsilon={}",
                        fmt_sig12(cell.epsilon.unwrap_or(f64::NAN))
                    ),
                )
            })
        },
    );

    let baseline = cells
        .iter()
        .find(|c| c.algorithm == Algorithm::Ordinary)
        .and_then(|c| c.trace());
    let Some(baseline) = baseline else { return rows };
    let Some(base_value) = baseline.objective_at(at_k) else {
        return rows;
    };
    let deviations: Vec<f64> = cells
        .iter()
        .filter(|c| c.algorithm == Algorithm::Stochastic)
        .filter_map(|c| c.trace())
        .filter_map(|t| t.objective_at(at_k))
        .map(|v| 100.0 * (v - base_value) / base_value)
        .collect();
    let Ok(summary) = summarize(&deviations) else {
        return rows;
    };
    rows.push(AggregateRow {
        table: "deviation_stats".into(),
        labels: labels(&[("at_k", at_k.to_string())]),
        metrics: [
            ("count".to_string(), summary.count as f64),
            ("mean".to_string(), summary.mean),
            ("min".to_string(), summary.min),
            ("max".to_string(), summary.max),
            ("p50".to_string(), summary.p50),
            ("p90".to_string(), summary.p90),
            ("p95".to_string(), summary.p95),
        ]
        .into(),
    });

    // Fixed-width histogram over the observed range.
    let bins = 12usize;
    let (lo, hi) = (summary.min, summary.max);
    let width = if hi > lo { (hi - lo) / bins as f64 } else { 1.0 };
    let mut counts = vec![0usize; bins];
    for &d in &deviations {
        let idx = (((d - lo) / width) as usize).min(bins - 1);
        counts[idx] += 1;
    }
    for (i, &count) in counts.iter().enumerate() {
        rows.push(AggregateRow {
            table: "deviation_histogram".into(),
            labels: labels(&[("bin", format!("{i:02}"))]),
            metrics: [
                ("low".to_string(), lo + i as f64 * width),
                ("high".to_string(), lo + (i + 1) as f64 * width),
                ("count".to_string(), count as f64),
            ]
            .into(),
        });
    }
    rows
}

fn aggregate_sbm(cfg: &ExperimentConfig, cells: &[CellResult]) -> Vec<AggregateRow> {
    let k = cfg.first_k().unwrap_or(1);
    let at_k = cfg.at_k.unwrap_or(k);
    // (factor) -> per-seed (deviation at k, call ratio, time ratio)
    let mut baselines: BTreeMap<(String, u64), &SelectionTrace> = BTreeMap::new();
    for cell in cells {
        if cell.algorithm == Algorithm::Ordinary {
            if let (Some(f), Some(t)) = (cell.p_out_factor, cell.trace()) {
                baselines.insert((fmt_sig12(f), cell.seed), t);
            }
        }
    }
    let mut groups: BTreeMap<String, Vec<(f64, f64, f64)>> = BTreeMap::new();
    for cell in cells {
        if cell.algorithm != Algorithm::Distributed {
            continue;
        }
        let Some(f) = cell.p_out_factor else { continue };
        let key = (fmt_sig12(f), cell.seed);
        let (Some(trace), Some(base)) = (cell.trace(), baselines.get(&key)) else {
            continue;
        };
        let (Some(c), Some(b)) = (trace.objective_at(at_k), base.objective_at(at_k)) else {
            continue;
        };
        groups.entry(key.0).or_default().push((
            100.0 * (c - b) / b,
            base.total_calls() as f64 / trace.total_calls() as f64,
            base.total_seconds() / trace.total_seconds(),
        ));
    }
    let partition = match cfg.sbm.partition {
        PartitionMode::GroundTruth => "ground-truth",
        PartitionMode::EqualRandom => "equal-random",
    };
    groups
        .into_iter()
        .map(|(factor, rows)| AggregateRow {
            table: "sbm_deviation".into(),
            labels: labels(&[
                ("p_out_factor", factor),
                ("partition", partition.to_string()),
                ("at_k", at_k.to_string()),
            ]),
            metrics: [
                (
                    "mean_deviation_pct".to_string(),
                    mean(&rows.iter().map(|r| r.0).collect::<Vec<_>>()),
                ),
                (
                    "max_deviation_pct".to_string(),
                    rows.iter().fold(f64::NEG_INFINITY, |a, r| a.max(r.0)),
                ),
                (
                    "mean_call_ratio".to_string(),
                    mean(&rows.iter().map(|r| r.1).collect::<Vec<_>>()),
                ),
                (
                    "mean_time_ratio".to_string(),
                    mean(&rows.iter().map(|r| r.2).collect::<Vec<_>>()),
                ),
                ("runs".to_string(), rows.len() as f64),
            ]
            .into(),
        })
        .collect()
}

impl super::config::DistributedConfig {
    fn inner_epsilon_if_stochastic(&self) -> Option<f64> {
        match self.inner {
            Algorithm::Stochastic => Some(self.inner_epsilon),
            _ => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::super::config::ReportFormat;
    use super::super::report::emit_report;
    use super::*;

    fn tiny_scaling_config() -> ExperimentConfig {
        ExperimentConfig::from_toml(
            r#"
kind = "scaling"
n = [30, 50]
k = [5]
seeds = [1]
algorithms = ["ordinary"]
warmup = false
[generator]
er_p = 0.3
"#,
        )
        .unwrap()
    }

    #[test]
    fn scaling_report_structure() {
        let cfg = tiny_scaling_config();
        let report = run_experiment(&cfg).unwrap();
        assert_eq!(report.cells.len(), 2);
        assert_eq!(report.failed_cells, 0);
        for cell in &report.cells {
            let trace = cell.trace().expect("cell succeeded");
            assert_eq!(trace.records.len(), 5);
        }
        // Only two n values: no fit (needs three points).
        assert!(report.fits.is_empty());
        assert_eq!(report.aggregates.len(), 2);
    }

    #[test]
    fn scaling_fit_emitted_with_three_points() {
        let cfg = ExperimentConfig::from_toml(
            r#"
kind = "scaling"
n = [30, 45, 60]
k = [4]
seeds = [1]
algorithms = ["ordinary"]
warmup = false
extrapolate = [100]
[generator]
er_p = 0.3
"#,
        )
        .unwrap();
        let report = run_experiment(&cfg).unwrap();
        let calls_fit = report
            .fits
            .iter()
            .find(|f| f.table == "call_count_vs_n")
            .expect("call count fit");
        // Ordinary calls with fixed k are nearly linear in n.
        assert!((calls_fit.fit.exponent - 1.0).abs() < 0.2);
        assert_eq!(calls_fit.predictions.len(), 1);
    }

    #[test]
    fn reruns_are_identical_apart_from_wall_times() {
        let cfg = tiny_scaling_config();
        let a = run_experiment(&cfg).unwrap();
        let b = run_experiment(&cfg).unwrap();
        for (ca, cb) in a.cells.iter().zip(&b.cells) {
            let (ta, tb) = (ca.trace().unwrap(), cb.trace().unwrap());
            assert_eq!(ta.selections(), tb.selections());
            assert_eq!(ta.total_calls(), tb.total_calls());
            for (ra, rb) in ta.records.iter().zip(&tb.records) {
                assert_eq!(ra.objective, rb.objective);
            }
        }
    }

    #[test]
    fn emit_same_report_twice_is_byte_identical() {
        let cfg = tiny_scaling_config();
        let report = run_experiment(&cfg).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let a = emit_report(&report, ReportFormat::Json, &dir.path().join("a")).unwrap();
        let b = emit_report(&report, ReportFormat::Json, &dir.path().join("b")).unwrap();
        assert_eq!(fs::read(&a[0]).unwrap(), fs::read(&b[0]).unwrap());

        let c = emit_report(&report, ReportFormat::Csv, &dir.path().join("c")).unwrap();
        let d = emit_report(&report, ReportFormat::Csv, &dir.path().join("d")).unwrap();
        for (x, y) in c.iter().zip(&d) {
            assert_eq!(fs::read(x).unwrap(), fs::read(y).unwrap());
        }
    }

    #[test]
    fn epsilon_sweep_structure() {
        let cfg = ExperimentConfig::from_toml(
            r#"
kind = "epsilon-sweep"
n = [40]
k = [4]
epsilon = [0.3, 0.5]
seeds = [1, 2]
[generator]
er_p = 0.25
"#,
        )
        .unwrap();
        let report = run_experiment(&cfg).unwrap();
        // Per seed: one baseline + two stochastic runs.
        assert_eq!(report.cells.len(), 6);
        let dev_rows: Vec<_> = report
            .aggregates
            .iter()
            .filter(|a| a.table == "deviation_vs_k")
            .collect();
        // Two epsilons x four iterations.
        assert_eq!(dev_rows.len(), 8);
        for row in dev_rows {
            assert_eq!(row.metrics["runs"], 2.0);
        }
    }

    #[test]
    fn monte_carlo_structure() {
        let cfg = ExperimentConfig::from_toml(
            r#"
kind = "monte-carlo"
n = [40]
k = [4]
epsilon = [0.5]
seed_range = { start = 1, count = 10 }
graph_seed = 99
[generator]
er_p = 0.25
"#,
        )
        .unwrap();
        let report = run_experiment(&cfg).unwrap();
        assert_eq!(report.cells.len(), 11);
        let stats = report
            .aggregates
            .iter()
            .find(|a| a.table == "deviation_stats")
            .expect("summary row");
        assert_eq!(stats.metrics["count"], 10.0);
        let hist_total: f64 = report
            .aggregates
            .iter()
            .filter(|a| a.table == "deviation_histogram")
            .map(|a| a.metrics["count"])
            .sum();
        assert_eq!(hist_total, 10.0);
    }

    #[test]
    fn sbm_structure() {
        let cfg = ExperimentConfig::from_toml(
            r#"
kind = "sbm"
k = [4]
seeds = [3]
[sbm]
clusters = 3
nodes_per_cluster = 12
p_in = 0.5
p_out_factors = [0.4, 1.0]
"#,
        )
        .unwrap();
        let report = run_experiment(&cfg).unwrap();
        assert_eq!(report.cells.len(), 4);
        assert_eq!(report.failed_cells, 0);
        let rows: Vec<_> = report
            .aggregates
            .iter()
            .filter(|a| a.table == "sbm_deviation")
            .collect();
        assert_eq!(rows.len(), 2);
    }

    #[test]
    fn cell_failures_recorded_without_aborting() {
        // p_out factor 0 on a multi-cluster model can never connect.
        let cfg = ExperimentConfig::from_toml(
            r#"
kind = "sbm"
k = [2]
seeds = [1]
[sbm]
clusters = 2
nodes_per_cluster = 5
p_in = 1.0
p_out_factors = [0.0, 1.0]
"#,
        )
        .unwrap();
        let report = run_experiment(&cfg).unwrap();
        assert_eq!(report.cells.len(), 4);
        assert_eq!(report.failed_cells, 2);
        let failed: Vec<_> = report
            .cells
            .iter()
            .filter(|c| matches!(c.outcome, CellOutcome::Failed { .. }))
            .collect();
        assert!(failed.iter().all(|c| c.p_out_factor == Some(0.0)));
    }

    #[test]
    fn dump_graphs_writes_fixtures() {
        let dir = tempfile::tempdir().unwrap();
        let mut cfg = tiny_scaling_config();
        cfg.output.dump_graphs = true;
        cfg.output.dir = Some(dir.path().to_path_buf());
        let report = run_experiment(&cfg).unwrap();
        assert_eq!(report.failed_cells, 0);
        let graphs: Vec<_> = fs::read_dir(dir.path().join("graphs"))
            .unwrap()
            .collect::<std::io::Result<Vec<_>>>()
            .unwrap();
        assert_eq!(graphs.len(), 2);
        let path = &graphs[0].path();
        let parsed = crate::graph::read_edge_list(
            std::io::BufReader::new(fs::File::open(path).unwrap()),
        )
        .unwrap();
        assert!(parsed.is_connected());
    }
}
