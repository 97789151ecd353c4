//! The four greedy optimizers over the leader-selection objective:
//!
//! * [`ordinary_greedy`] — evaluates every remaining candidate each
//!   iteration and commits the best; the baseline.
//! * [`lazy_greedy`] — exact same selections, but caches gains in a priority
//!   queue and re-evaluates only entries whose cached upper bound could
//!   still win. Gains never increase as the set grows, so stale cached
//!   values are valid upper bounds.
//! * [`stochastic_greedy`] — evaluates a uniform without-replacement sample
//!   of the remaining candidates each iteration, sized by
//!   `beta = k / ln(1/epsilon)`; trades a bounded optimality loss for an
//!   O(n) call budget.
//! * [`distributed_greedy`] — two stages: an inner optimizer restricted to
//!   each cluster of a node partition collects `k` picks per cluster, then
//!   the inner optimizer selects the final `k` from the union. Gains are
//!   always evaluated with the full-graph objective; only the candidate
//!   pool is restricted.
//!
//! Every optimizer runs against either oracle kind and emits a full
//! [`SelectionTrace`]. Ties are broken toward the lowest node id within an
//! absolute tolerance of [`TIE_TOLERANCE`], which makes lazy/ordinary and
//! naive/accelerated runs agree exactly.

use std::collections::BinaryHeap;
use std::time::Instant;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Graph, GraphError, NodePartition};
use crate::oracle::{FirstIteration, LeaderSet, OracleError, OracleKind};

/// Gains within this absolute tolerance of the best are ties; the lowest
/// node id wins.
pub const TIE_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Error)]
pub enum GreedyError {
    #[error("cardinality {k} out of range (need 1 <= k <= n-1 and k <= pool size {pool}, n={n})")]
    InvalidCardinality { k: usize, n: usize, pool: usize },
    #[error("epsilon {epsilon} outside (0, 1)")]
    InvalidEpsilon { epsilon: f64 },
    #[error("candidate pool is empty")]
    EmptyPool,
    #[error("candidate pool node {node} invalid (out of range or duplicate)")]
    InvalidPoolNode { node: usize },
    #[error("sample size undefined for zero remaining candidates")]
    NoRemainingCandidates,
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

pub type Result<T> = std::result::Result<T, GreedyError>;

/// Optimizer identifiers, as they appear in traces and reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    Ordinary,
    Lazy,
    Stochastic,
    Distributed,
}

impl std::fmt::Display for Algorithm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Algorithm::Ordinary => write!(f, "ordinary"),
            Algorithm::Lazy => write!(f, "lazy"),
            Algorithm::Stochastic => write!(f, "stochastic"),
            Algorithm::Distributed => write!(f, "distributed"),
        }
    }
}

/// Inner optimizer for the two distributed stages.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", tag = "algorithm")]
pub enum InnerAlgorithm {
    Ordinary,
    Lazy,
    Stochastic { epsilon: f64 },
}

impl InnerAlgorithm {
    pub fn epsilon(&self) -> Option<f64> {
        match self {
            InnerAlgorithm::Stochastic { epsilon } => Some(*epsilon),
            _ => None,
        }
    }
}

/// One committed iteration of an optimizer run.
#[derive(Debug, Clone, Serialize)]
pub struct IterationRecord {
    /// 1-based iteration number.
    pub iteration: usize,
    /// Node committed this iteration.
    pub node: usize,
    /// Objective value after the commit.
    pub objective: f64,
    /// Marginal gain of the committed node; `None` for iteration one, where
    /// the empty-set objective is undefined.
    pub gain: Option<f64>,
    /// Oracle evaluations so far (first-iteration evaluations included).
    pub cumulative_calls: u64,
    /// Wall-clock seconds since the optimizer started.
    pub cumulative_seconds: f64,
    /// Gain re-evaluations this iteration (lazy runs only).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub recomputations: Option<u64>,
    /// Candidate sample size this iteration (stochastic runs only).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sample_size: Option<usize>,
}

/// Full per-iteration record of one optimizer run.
#[derive(Debug, Clone, Serialize)]
pub struct SelectionTrace {
    pub algorithm: Algorithm,
    /// Instance descriptor; generator-aware callers may overwrite it.
    pub instance: String,
    pub oracle: OracleKind,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub k: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub clusters: Option<usize>,
    pub records: Vec<IterationRecord>,
    /// Stage-one traces of a distributed run, one per cluster that ran the
    /// inner optimizer (clusters smaller than `k` contribute their nodes
    /// directly and produce no trace).
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub stage_one: Vec<SelectionTrace>,
}

impl SelectionTrace {
    pub fn selections(&self) -> Vec<usize> {
        self.records.iter().map(|r| r.node).collect()
    }

    pub fn leader_set(&self) -> LeaderSet {
        LeaderSet::new(self.selections()).expect("selections are distinct")
    }

    pub fn final_objective(&self) -> f64 {
        self.records.last().expect("at least one record").objective
    }

    /// Objective after the given 1-based iteration.
    pub fn objective_at(&self, iteration: usize) -> Option<f64> {
        self.records
            .get(iteration.checked_sub(1)?)
            .map(|r| r.objective)
    }

    /// Total oracle calls, stage-one work included for distributed runs.
    pub fn total_calls(&self) -> u64 {
        self.records.last().map_or(0, |r| r.cumulative_calls)
    }

    pub fn total_seconds(&self) -> f64 {
        self.records.last().map_or(0.0, |r| r.cumulative_seconds)
    }

    pub fn with_instance(mut self, instance: &str) -> Self {
        self.instance = instance.to_string();
        for t in &mut self.stage_one {
            t.instance = instance.to_string();
        }
        self
    }
}

fn instance_tag(graph: &Graph) -> String {
    format!("graph(n={}, m={})", graph.node_count(), graph.edge_count())
}

/// Candidate sample size for one stochastic iteration:
/// `clamp(ceil(remaining / beta), 1, remaining)` with
/// `beta = k / ln(1/epsilon)`; `beta <= 1` disables subsampling.
pub fn sample_size(remaining: usize, k: usize, epsilon: f64) -> Result<usize> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(GreedyError::InvalidEpsilon { epsilon });
    }
    if remaining == 0 {
        return Err(GreedyError::NoRemainingCandidates);
    }
    let beta = k as f64 / (1.0 / epsilon).ln();
    if beta <= 1.0 {
        return Ok(remaining);
    }
    let size = (remaining as f64 / beta).ceil() as usize;
    Ok(size.clamp(1, remaining))
}

/// Lowest node id among the candidates whose value is within
/// [`TIE_TOLERANCE`] of the maximum.
fn argmax_with_tol(pairs: &[(usize, f64)]) -> (usize, f64) {
    debug_assert!(!pairs.is_empty());
    let best = pairs
        .iter()
        .map(|&(_, v)| v)
        .fold(f64::NEG_INFINITY, f64::max);
    let node = pairs
        .iter()
        .filter(|&&(_, v)| v >= best - TIE_TOLERANCE)
        .map(|&(n, _)| n)
        .min()
        .expect("non-empty");
    let value = pairs
        .iter()
        .find(|&&(n, _)| n == node)
        .expect("winner present")
        .1;
    (node, value)
}

fn validate_pool(graph: &Graph, k: usize, pool: &[usize]) -> Result<()> {
    let n = graph.node_count();
    if pool.is_empty() {
        return Err(GreedyError::EmptyPool);
    }
    let mut seen = vec![false; n];
    for &v in pool {
        if v >= n || seen[v] {
            return Err(GreedyError::InvalidPoolNode { node: v });
        }
        seen[v] = true;
    }
    if k == 0 || k >= n || k > pool.len() {
        return Err(GreedyError::InvalidCardinality {
            k,
            n,
            pool: pool.len(),
        });
    }
    Ok(())
}

/// Ordinary greedy over the full node set.
pub fn ordinary_greedy(graph: &Graph, k: usize, kind: OracleKind) -> Result<SelectionTrace> {
    let pool: Vec<usize> = (0..graph.node_count()).collect();
    ordinary_greedy_over(graph, k, kind, &pool)
}

/// Ordinary greedy restricted to a candidate pool; the objective is still
/// evaluated on the full graph.
pub fn ordinary_greedy_over(
    graph: &Graph,
    k: usize,
    kind: OracleKind,
    pool: &[usize],
) -> Result<SelectionTrace> {
    validate_pool(graph, k, pool)?;
    let started = Instant::now();
    let first = FirstIteration::new(graph, kind)?;

    let mut gains: Vec<(usize, f64)> = Vec::with_capacity(pool.len());
    for &v in pool {
        gains.push((v, -first.single_leader_objective(v)?));
    }
    let calls = pool.len() as u64;
    let (winner, _) = argmax_with_tol(&gains);
    let mut state = first.state_after(winner, calls)?;
    let mut records = vec![IterationRecord {
        iteration: 1,
        node: winner,
        objective: state.objective(),
        gain: None,
        cumulative_calls: calls,
        cumulative_seconds: started.elapsed().as_secs_f64(),
        recomputations: None,
        sample_size: None,
    }];

    let mut remaining: Vec<usize> = pool.iter().copied().filter(|&v| v != winner).collect();
    for iteration in 2..=k {
        let mut gains: Vec<(usize, f64)> = Vec::with_capacity(remaining.len());
        for &v in &remaining {
            gains.push((v, state.marginal_gain(v)?));
        }
        let (winner, gain) = argmax_with_tol(&gains);
        state = state.commit(winner)?;
        remaining.retain(|&v| v != winner);
        records.push(IterationRecord {
            iteration,
            node: winner,
            objective: state.objective(),
            gain: Some(gain),
            cumulative_calls: state.call_count(),
            cumulative_seconds: started.elapsed().as_secs_f64(),
            recomputations: None,
            sample_size: None,
        });
    }

    Ok(SelectionTrace {
        algorithm: Algorithm::Ordinary,
        instance: instance_tag(graph),
        oracle: kind,
        seed: None,
        k,
        epsilon: None,
        clusters: None,
        records,
        stage_one: Vec::new(),
    })
}

#[derive(Debug, PartialEq)]
struct QueueEntry {
    delta: f64,
    node: usize,
}

impl Eq for QueueEntry {}

impl Ord for QueueEntry {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        // Max-heap: highest delta first, lowest node id among equals.
        self.delta
            .total_cmp(&other.delta)
            .then_with(|| other.node.cmp(&self.node))
    }
}

impl PartialOrd for QueueEntry {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Priority map of cached marginal gains plus per-node validity flags.
///
/// Cached values are upper bounds on the true current gains (gains only
/// shrink as the leader set grows); stale entries must be re-evaluated
/// before they can win. Pop order is descending gain with lowest-node-id
/// tie-break.
pub struct LazyQueue {
    heap: BinaryHeap<QueueEntry>,
    delta: Vec<f64>,
    fresh: Vec<bool>,
    alive: Vec<bool>,
}

impl LazyQueue {
    /// Queue over `nodes`, every entry starting stale at `+inf` (anything
    /// not yet evaluated could still be the best).
    pub fn new(node_bound: usize, nodes: &[usize]) -> Self {
        let mut q = Self {
            heap: BinaryHeap::with_capacity(nodes.len()),
            delta: vec![f64::NEG_INFINITY; node_bound],
            fresh: vec![false; node_bound],
            alive: vec![false; node_bound],
        };
        for &v in nodes {
            q.delta[v] = f64::INFINITY;
            q.alive[v] = true;
            q.heap.push(QueueEntry {
                delta: f64::INFINITY,
                node: v,
            });
        }
        q
    }

    pub fn len(&self) -> usize {
        self.alive.iter().filter(|&&a| a).count()
    }

    pub fn is_empty(&self) -> bool {
        self.alive.iter().all(|&a| !a)
    }

    pub fn mark_all_stale(&mut self) {
        for f in &mut self.fresh {
            *f = false;
        }
    }

    pub fn is_fresh(&self, node: usize) -> bool {
        self.fresh[node]
    }

    pub fn cached(&self, node: usize) -> f64 {
        self.delta[node]
    }

    /// Records a freshly evaluated gain.
    pub fn refresh(&mut self, node: usize, gain: f64) {
        debug_assert!(self.alive[node]);
        self.delta[node] = gain;
        self.fresh[node] = true;
        self.heap.push(QueueEntry { delta: gain, node });
    }

    /// Pops the live entry with the highest cached gain, skipping entries
    /// outdated by later refreshes.
    pub fn pop_top(&mut self) -> Option<(usize, f64)> {
        while let Some(entry) = self.heap.pop() {
            if self.alive[entry.node] && entry.delta == self.delta[entry.node] {
                return Some((entry.node, entry.delta));
            }
        }
        None
    }

    /// Highest live cached gain without popping.
    pub fn peek_top(&mut self) -> Option<(usize, f64)> {
        loop {
            let valid = match self.heap.peek() {
                Some(entry) => self.alive[entry.node] && entry.delta == self.delta[entry.node],
                None => return None,
            };
            if valid {
                let entry = self.heap.peek().expect("just peeked");
                return Some((entry.node, entry.delta));
            }
            self.heap.pop();
        }
    }

    /// Puts a popped entry back without changing its value or freshness.
    pub fn push_back(&mut self, node: usize) {
        debug_assert!(self.alive[node]);
        self.heap.push(QueueEntry {
            delta: self.delta[node],
            node,
        });
    }

    /// Removes a committed node from the queue.
    pub fn remove(&mut self, node: usize) {
        self.alive[node] = false;
    }
}

/// Lazy greedy: identical selections and objective trajectory to
/// [`ordinary_greedy`] on the same input, with at most as many oracle calls.
pub fn lazy_greedy(graph: &Graph, k: usize, kind: OracleKind) -> Result<SelectionTrace> {
    let pool: Vec<usize> = (0..graph.node_count()).collect();
    lazy_greedy_over(graph, k, kind, &pool)
}

/// Lazy greedy restricted to a candidate pool.
pub fn lazy_greedy_over(
    graph: &Graph,
    k: usize,
    kind: OracleKind,
    pool: &[usize],
) -> Result<SelectionTrace> {
    validate_pool(graph, k, pool)?;
    let started = Instant::now();
    let first = FirstIteration::new(graph, kind)?;

    // Iteration one: the empty-set objective is undefined, so every pool
    // node is evaluated through the bootstrap. The single-leader objectives
    // do not bound later gains, so the queue starts at +inf (stale).
    let mut gains: Vec<(usize, f64)> = Vec::with_capacity(pool.len());
    for &v in pool {
        gains.push((v, -first.single_leader_objective(v)?));
    }
    let calls = pool.len() as u64;
    let (winner, _) = argmax_with_tol(&gains);
    let mut state = first.state_after(winner, calls)?;
    let mut records = vec![IterationRecord {
        iteration: 1,
        node: winner,
        objective: state.objective(),
        gain: None,
        cumulative_calls: calls,
        cumulative_seconds: started.elapsed().as_secs_f64(),
        recomputations: Some(pool.len() as u64),
        sample_size: None,
    }];

    let survivors: Vec<usize> = pool.iter().copied().filter(|&v| v != winner).collect();
    let mut queue = LazyQueue::new(graph.node_count(), &survivors);

    for iteration in 2..=k {
        queue.mark_all_stale();
        let mut recomputations: u64 = 0;
        let (winner, gain) = loop {
            let (top, top_delta) = queue.pop_top().expect("queue holds the remaining pool");
            if !queue.is_fresh(top) {
                let gain = state.marginal_gain(top)?;
                recomputations += 1;
                queue.refresh(top, gain);
                continue;
            }
            // Fresh top: gather everything within the tie tolerance so the
            // winner matches ordinary greedy's tolerance-aware argmax,
            // refreshing any stale member of the group first.
            let mut group: Vec<(usize, f64)> = vec![(top, top_delta)];
            while let Some((next, next_delta)) = queue.peek_top() {
                if next_delta < top_delta - TIE_TOLERANCE {
                    break;
                }
                queue.pop_top();
                if queue.is_fresh(next) {
                    group.push((next, next_delta));
                } else {
                    let gain = state.marginal_gain(next)?;
                    recomputations += 1;
                    queue.refresh(next, gain);
                }
            }
            let (winner, gain) = argmax_with_tol(&group);
            for &(node, _) in &group {
                if node != winner {
                    queue.push_back(node);
                }
            }
            queue.remove(winner);
            break (winner, gain);
        };
        state = state.commit(winner)?;
        records.push(IterationRecord {
            iteration,
            node: winner,
            objective: state.objective(),
            gain: Some(gain),
            cumulative_calls: state.call_count(),
            cumulative_seconds: started.elapsed().as_secs_f64(),
            recomputations: Some(recomputations),
            sample_size: None,
        });
    }

    Ok(SelectionTrace {
        algorithm: Algorithm::Lazy,
        instance: instance_tag(graph),
        oracle: kind,
        seed: None,
        k,
        epsilon: None,
        clusters: None,
        records,
        stage_one: Vec::new(),
    })
}

/// First `size` elements of a seeded partial Fisher–Yates shuffle: a uniform
/// without-replacement sample.
fn sample_without_replacement(
    candidates: &[usize],
    size: usize,
    rng: &mut ChaCha8Rng,
) -> Vec<usize> {
    debug_assert!(size <= candidates.len());
    let mut pool = candidates.to_vec();
    for j in 0..size {
        let pick = rng.gen_range(j..pool.len());
        pool.swap(j, pick);
    }
    pool.truncate(size);
    pool
}

/// Stochastic greedy over the full node set.
pub fn stochastic_greedy(
    graph: &Graph,
    k: usize,
    epsilon: f64,
    seed: u64,
    kind: OracleKind,
) -> Result<SelectionTrace> {
    let pool: Vec<usize> = (0..graph.node_count()).collect();
    stochastic_greedy_over(graph, k, epsilon, seed, kind, &pool)
}

/// Stochastic greedy restricted to a candidate pool.
///
/// Every iteration — the first included — draws its sample before any
/// evaluation, then evaluates gains only on the sample. Deterministic given
/// the seed.
pub fn stochastic_greedy_over(
    graph: &Graph,
    k: usize,
    epsilon: f64,
    seed: u64,
    kind: OracleKind,
    pool: &[usize],
) -> Result<SelectionTrace> {
    validate_pool(graph, k, pool)?;
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(GreedyError::InvalidEpsilon { epsilon });
    }
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let first = FirstIteration::new(graph, kind)?;

    let size = sample_size(pool.len(), k, epsilon)?;
    let sample = sample_without_replacement(pool, size, &mut rng);
    let mut gains: Vec<(usize, f64)> = Vec::with_capacity(size);
    for &v in &sample {
        gains.push((v, -first.single_leader_objective(v)?));
    }
    let calls = size as u64;
    let (winner, _) = argmax_with_tol(&gains);
    let mut state = first.state_after(winner, calls)?;
    let mut records = vec![IterationRecord {
        iteration: 1,
        node: winner,
        objective: state.objective(),
        gain: None,
        cumulative_calls: calls,
        cumulative_seconds: started.elapsed().as_secs_f64(),
        recomputations: None,
        sample_size: Some(size),
    }];

    let mut remaining: Vec<usize> = pool.iter().copied().filter(|&v| v != winner).collect();
    for iteration in 2..=k {
        let size = sample_size(remaining.len(), k, epsilon)?;
        let sample = sample_without_replacement(&remaining, size, &mut rng);
        let mut gains: Vec<(usize, f64)> = Vec::with_capacity(size);
        for &v in &sample {
            gains.push((v, state.marginal_gain(v)?));
        }
        let (winner, gain) = argmax_with_tol(&gains);
        state = state.commit(winner)?;
        remaining.retain(|&v| v != winner);
        records.push(IterationRecord {
            iteration,
            node: winner,
            objective: state.objective(),
            gain: Some(gain),
            cumulative_calls: state.call_count(),
            cumulative_seconds: started.elapsed().as_secs_f64(),
            recomputations: None,
            sample_size: Some(size),
        });
    }

    Ok(SelectionTrace {
        algorithm: Algorithm::Stochastic,
        instance: instance_tag(graph),
        oracle: kind,
        seed: Some(seed),
        k,
        epsilon: Some(epsilon),
        clusters: None,
        records,
        stage_one: Vec::new(),
    })
}

fn run_inner(
    graph: &Graph,
    k: usize,
    inner: &InnerAlgorithm,
    seed: u64,
    kind: OracleKind,
    pool: &[usize],
) -> Result<SelectionTrace> {
    match inner {
        InnerAlgorithm::Ordinary => ordinary_greedy_over(graph, k, kind, pool),
        InnerAlgorithm::Lazy => lazy_greedy_over(graph, k, kind, pool),
        InnerAlgorithm::Stochastic { epsilon } => {
            stochastic_greedy_over(graph, k, *epsilon, seed, kind, pool)
        }
    }
}

/// Two-stage distributed greedy over a node partition.
///
/// Stage one runs the inner optimizer once per cluster with the candidate
/// pool restricted to that cluster (cluster `j` uses `seed + j`); clusters
/// smaller than `k` contribute all their nodes without a run. Stage two
/// runs the inner optimizer (with `seed`) over the union of the stage-one
/// picks. The returned trace holds the stage-two records, with cumulative
/// calls and seconds continuing from the stage-one totals, and the
/// stage-one traces attached.
pub fn distributed_greedy(
    graph: &Graph,
    k: usize,
    partition: &NodePartition,
    inner: &InnerAlgorithm,
    seed: u64,
    kind: OracleKind,
) -> Result<SelectionTrace> {
    partition.check_matches(graph)?;
    let n = graph.node_count();
    if k == 0 || k >= n {
        return Err(GreedyError::InvalidCardinality { k, n, pool: n });
    }

    let mut stage_one = Vec::new();
    let mut pool2: Vec<usize> = Vec::new();
    let mut stage_calls: u64 = 0;
    let mut stage_seconds: f64 = 0.0;
    for (cluster, members) in partition.members().into_iter().enumerate() {
        if members.len() < k {
            pool2.extend(members);
            continue;
        }
        let trace = run_inner(
            graph,
            k,
            inner,
            seed.wrapping_add(cluster as u64),
            kind,
            &members,
        )?;
        pool2.extend(trace.selections());
        stage_calls += trace.total_calls();
        stage_seconds += trace.total_seconds();
        stage_one.push(trace);
    }
    pool2.sort_unstable();

    let mut final_trace = run_inner(graph, k, inner, seed, kind, &pool2)?;
    for record in &mut final_trace.records {
        record.cumulative_calls += stage_calls;
        record.cumulative_seconds += stage_seconds;
    }

    Ok(SelectionTrace {
        algorithm: Algorithm::Distributed,
        instance: instance_tag(graph),
        oracle: kind,
        seed: Some(seed),
        k,
        epsilon: inner.epsilon(),
        clusters: Some(partition.cluster_count()),
        records: final_trace.records,
        stage_one,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::erdos_renyi;

    fn p3() -> Graph {
        Graph::from_edges(3, &[(0, 1), (1, 2)]).unwrap()
    }

    fn star4() -> Graph {
        Graph::from_edges(4, &[(0, 1), (0, 2), (0, 3)]).unwrap()
    }

    #[test]
    fn ordinary_p3_single() {
        let trace = ordinary_greedy(&p3(), 1, OracleKind::Accelerated).unwrap();
        assert_eq!(trace.selections(), vec![1]);
        assert!((trace.final_objective() - 1.0).abs() < 1e-10);
        assert_eq!(trace.total_calls(), 3);
    }

    #[test]
    fn ordinary_p3_pair_breaks_tie_low() {
        // Second step: grounding 0 or 2 both leave one follower with
        // objective 0.5 (gain tie); the lower id wins.
        let trace = ordinary_greedy(&p3(), 2, OracleKind::Naive).unwrap();
        assert_eq!(trace.selections(), vec![1, 0]);
        assert!((trace.objective_at(2).unwrap() - 0.5).abs() < 1e-10);
    }

    #[test]
    fn ordinary_star_center() {
        let trace = ordinary_greedy(&star4(), 1, OracleKind::Accelerated).unwrap();
        assert_eq!(trace.selections(), vec![0]);
        assert!((trace.final_objective() - 1.5).abs() < 1e-10);
    }

    #[test]
    fn ordinary_call_count_closed_form() {
        let g = erdos_renyi(30, 0.2, 5).unwrap();
        let k = 6;
        let trace = ordinary_greedy(&g, k, OracleKind::Accelerated).unwrap();
        let expect: u64 = (0..k as u64).map(|i| 30 - i).sum();
        assert_eq!(trace.total_calls(), expect);
        // Per-iteration counters are the partial sums.
        for (i, r) in trace.records.iter().enumerate() {
            let partial: u64 = (0..=i as u64).map(|j| 30 - j).sum();
            assert_eq!(r.cumulative_calls, partial);
        }
    }

    #[test]
    fn ordinary_rejects_bad_k() {
        let g = p3();
        assert!(matches!(
            ordinary_greedy(&g, 0, OracleKind::Naive),
            Err(GreedyError::InvalidCardinality { .. })
        ));
        assert!(matches!(
            ordinary_greedy(&g, 3, OracleKind::Naive),
            Err(GreedyError::InvalidCardinality { .. })
        ));
    }

    #[test]
    fn lazy_matches_ordinary_and_saves_calls() {
        for seed in [1u64, 2, 3] {
            let g = erdos_renyi(50, 0.1, seed).unwrap();
            let ord = ordinary_greedy(&g, 5, OracleKind::Accelerated).unwrap();
            let lazy = lazy_greedy(&g, 5, OracleKind::Accelerated).unwrap();
            assert_eq!(lazy.selections(), ord.selections());
            for (a, b) in lazy.records.iter().zip(&ord.records) {
                assert!((a.objective - b.objective).abs() < 1e-12);
            }
            assert!(lazy.total_calls() <= ord.total_calls());
        }
    }

    #[test]
    fn lazy_records_recomputations() {
        let g = erdos_renyi(40, 0.15, 9).unwrap();
        let trace = lazy_greedy(&g, 4, OracleKind::Accelerated).unwrap();
        assert_eq!(trace.records[0].recomputations, Some(40));
        let total: u64 = trace
            .records
            .iter()
            .map(|r| r.recomputations.unwrap())
            .sum();
        assert_eq!(total, trace.total_calls());
    }

    #[test]
    fn sample_size_examples() {
        // beta = 10 / ln(100) = 2.171...; ceil(1000 / beta) = 461.
        assert_eq!(sample_size(1000, 10, 0.01).unwrap(), 461);
        // beta = 1 / ln 2 = 1.442...; ceil(100 / beta) = 70.
        assert_eq!(sample_size(100, 1, 0.5).unwrap(), 70);
        // beta >> remaining clamps to the floor of 1.
        assert_eq!(sample_size(5, 100, 0.5).unwrap(), 1);
        // beta <= 1 disables subsampling.
        assert_eq!(sample_size(50, 1, 0.01).unwrap(), 50);
        assert!(matches!(
            sample_size(10, 5, 0.0),
            Err(GreedyError::InvalidEpsilon { .. })
        ));
        assert!(matches!(
            sample_size(10, 5, 1.0),
            Err(GreedyError::InvalidEpsilon { .. })
        ));
    }

    #[test]
    fn stochastic_exhaustive_sample_is_ordinary() {
        // k=1, eps=0.5 on n=3: sample size = remaining, so the run matches
        // ordinary greedy exactly.
        let g = p3();
        let st = stochastic_greedy(&g, 1, 0.5, 42, OracleKind::Accelerated).unwrap();
        assert_eq!(st.selections(), vec![1]);
        assert_eq!(st.records[0].sample_size, Some(3));

        // Same with a k >= 2 run where beta <= 1.
        let g = erdos_renyi(20, 0.3, 4).unwrap();
        let ord = ordinary_greedy(&g, 2, OracleKind::Accelerated).unwrap();
        let st = stochastic_greedy(&g, 2, 0.1, 7, OracleKind::Accelerated).unwrap();
        assert_eq!(st.selections(), ord.selections());
        assert_eq!(st.total_calls(), ord.total_calls());
    }

    #[test]
    fn stochastic_deterministic_and_counts_samples() {
        let g = erdos_renyi(60, 0.1, 2).unwrap();
        let a = stochastic_greedy(&g, 6, 0.5, 11, OracleKind::Accelerated).unwrap();
        let b = stochastic_greedy(&g, 6, 0.5, 11, OracleKind::Accelerated).unwrap();
        assert_eq!(a.selections(), b.selections());

        let mut expect: u64 = 0;
        let mut remaining = 60usize;
        for r in &a.records {
            let s = sample_size(remaining, 6, 0.5).unwrap();
            assert_eq!(r.sample_size, Some(s));
            expect += s as u64;
            assert_eq!(r.cumulative_calls, expect);
            remaining -= 1;
        }
    }

    #[test]
    fn stochastic_rejects_bad_epsilon() {
        let g = p3();
        assert!(matches!(
            stochastic_greedy(&g, 1, 0.0, 0, OracleKind::Naive),
            Err(GreedyError::InvalidEpsilon { .. })
        ));
    }

    #[test]
    fn objectives_strictly_decrease() {
        let g = erdos_renyi(40, 0.15, 8).unwrap();
        for trace in [
            ordinary_greedy(&g, 8, OracleKind::Accelerated).unwrap(),
            lazy_greedy(&g, 8, OracleKind::Accelerated).unwrap(),
            stochastic_greedy(&g, 8, 0.5, 3, OracleKind::Accelerated).unwrap(),
        ] {
            assert_eq!(trace.records.len(), 8);
            for pair in trace.records.windows(2) {
                assert!(pair[1].objective < pair[0].objective);
                assert!(pair[1].cumulative_calls >= pair[0].cumulative_calls);
                assert!(pair[1].cumulative_seconds >= pair[0].cumulative_seconds);
            }
        }
    }

    #[test]
    fn distributed_single_cluster_matches_direct_run() {
        let g = erdos_renyi(30, 0.2, 6).unwrap();
        let partition = NodePartition::equal(&g, 1, 0).unwrap();
        let inner = InnerAlgorithm::Stochastic { epsilon: 0.5 };
        let dist =
            distributed_greedy(&g, 4, &partition, &inner, 9, OracleKind::Accelerated).unwrap();
        let direct = stochastic_greedy(&g, 4, 0.5, 9, OracleKind::Accelerated).unwrap();
        let mut a = dist.selections();
        let mut b = direct.selections();
        a.sort_unstable();
        b.sort_unstable();
        assert_eq!(a, b);
        assert!((dist.final_objective() - direct.final_objective()).abs() < 1e-9);
        assert_eq!(dist.stage_one.len(), 1);
    }

    #[test]
    fn distributed_small_clusters_contribute_all_nodes() {
        let g = erdos_renyi(12, 0.4, 3).unwrap();
        // Six clusters of two nodes, k = 3: every cluster is smaller than k.
        let partition = NodePartition::equal(&g, 6, 1).unwrap();
        let dist = distributed_greedy(
            &g,
            3,
            &partition,
            &InnerAlgorithm::Ordinary,
            0,
            OracleKind::Naive,
        )
        .unwrap();
        assert!(dist.stage_one.is_empty());
        assert_eq!(dist.records.len(), 3);
        // Stage two saw the whole node set, so this equals a direct run.
        let direct = ordinary_greedy(&g, 3, OracleKind::Naive).unwrap();
        assert_eq!(dist.selections(), direct.selections());
    }

    #[test]
    fn distributed_stage_two_pool_bounded() {
        let g = erdos_renyi(40, 0.2, 12).unwrap();
        let partition = NodePartition::equal(&g, 4, 5).unwrap();
        let k = 5;
        let dist = distributed_greedy(
            &g,
            k,
            &partition,
            &InnerAlgorithm::Lazy,
            0,
            OracleKind::Accelerated,
        )
        .unwrap();
        assert_eq!(dist.records.len(), k);
        assert_eq!(dist.stage_one.len(), 4);
        let pool2: usize = dist.stage_one.iter().map(|t| t.records.len()).sum();
        assert!(pool2 <= 4 * k);
        // Cumulative calls continue from stage one.
        let stage_calls: u64 = dist.stage_one.iter().map(|t| t.total_calls()).sum();
        assert!(dist.records[0].cumulative_calls > stage_calls);
    }

    #[test]
    fn lazy_queue_pop_order() {
        let mut q = LazyQueue::new(5, &[0, 1, 2, 3, 4]);
        q.refresh(3, 2.0);
        q.refresh(1, 5.0);
        q.refresh(4, 5.0);
        q.refresh(0, 1.0);
        q.refresh(2, 5.0);
        // Descending gain; ties pop lowest node id first.
        assert_eq!(q.pop_top().unwrap(), (1, 5.0));
        assert_eq!(q.pop_top().unwrap(), (2, 5.0));
        assert_eq!(q.pop_top().unwrap(), (4, 5.0));
        assert_eq!(q.pop_top().unwrap(), (3, 2.0));
        assert_eq!(q.pop_top().unwrap(), (0, 1.0));
        assert!(q.pop_top().is_none());
    }

    #[test]
    fn lazy_queue_outdated_entries_skipped() {
        let mut q = LazyQueue::new(3, &[0, 1, 2]);
        q.refresh(0, 4.0);
        q.refresh(0, 1.0);
        q.refresh(1, 2.0);
        q.refresh(2, 0.5);
        assert_eq!(q.pop_top().unwrap(), (1, 2.0));
        q.remove(1);
        assert_eq!(q.pop_top().unwrap(), (0, 1.0));
    }
}
