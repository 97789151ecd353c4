//! Seeded random-graph generators.
//!
//! All generators are deterministic functions of their parameters and seed,
//! and all return connected graphs: models that can come out disconnected
//! are rejection-sampled with successor seeds (`seed + attempt`), bounded at
//! [`MAX_CONNECTIVITY_ATTEMPTS`].

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{Graph, GraphError, NodePartition, Result, SbmParams, MAX_CONNECTIVITY_ATTEMPTS};

fn rejection_sample<F>(seed: u64, mut build: F) -> Result<Graph>
where
    F: FnMut(u64) -> Result<Graph>,
{
    for attempt in 0..MAX_CONNECTIVITY_ATTEMPTS {
        let g = build(seed.wrapping_add(attempt))?;
        if g.is_connected() {
            return Ok(g);
        }
    }
    Err(GraphError::ConnectivityRetriesExhausted {
        attempts: MAX_CONNECTIVITY_ATTEMPTS,
    })
}

/// Connected Erdős–Rényi graph `G(n, p)` with unit weights.
pub fn erdos_renyi(n: usize, p: f64, seed: u64) -> Result<Graph> {
    if n < 2 {
        return Err(GraphError::TooFewNodes { n, min: 2 });
    }
    if !(p > 0.0 && p <= 1.0) {
        return Err(GraphError::InvalidProbability { p });
    }
    rejection_sample(seed, |s| {
        let mut rng = ChaCha8Rng::seed_from_u64(s);
        let mut edges = Vec::new();
        for u in 0..n {
            for v in (u + 1)..n {
                if rng.gen_bool(p) {
                    edges.push((u, v));
                }
            }
        }
        Graph::from_edges(n, &edges)
    })
}

/// Connected Barabási–Albert preferential-attachment graph.
///
/// Initialization convention: the first `m_attach` nodes start with no
/// edges; the first arriving node links to all of them, and every later
/// node links to `m_attach` distinct existing nodes chosen with probability
/// proportional to degree. Edge count is exactly `(n - m_attach) * m_attach`.
/// Connected by construction.
pub fn barabasi_albert(n: usize, m_attach: usize, seed: u64) -> Result<Graph> {
    if n < 3 {
        return Err(GraphError::TooFewNodes { n, min: 3 });
    }
    if m_attach == 0 || m_attach + 1 >= n {
        return Err(GraphError::InvalidAttachment { m_attach, n });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::with_capacity((n - m_attach) * m_attach);
    // One entry per endpoint of every edge; uniform sampling from this list
    // is degree-proportional sampling.
    let mut endpoint_pool: Vec<usize> = Vec::with_capacity(2 * (n - m_attach) * m_attach);
    let mut targets: Vec<usize> = (0..m_attach).collect();
    for new_node in m_attach..n {
        for &t in &targets {
            edges.push((t, new_node));
            endpoint_pool.push(t);
            endpoint_pool.push(new_node);
        }
        if new_node + 1 == n {
            break;
        }
        // Sample m_attach distinct targets, degree-proportionally.
        let mut chosen = std::collections::HashSet::with_capacity(m_attach);
        while chosen.len() < m_attach {
            let pick = endpoint_pool[rng.gen_range(0..endpoint_pool.len())];
            chosen.insert(pick);
        }
        targets = chosen.into_iter().collect();
        targets.sort_unstable();
    }
    Graph::from_edges(n, &edges)
}

/// Connected random-geometric graph: `n` points uniform in the unit square,
/// an edge wherever the Euclidean distance is at most `radius`.
pub fn random_geometric(n: usize, radius: f64, seed: u64) -> Result<Graph> {
    if n < 2 {
        return Err(GraphError::TooFewNodes { n, min: 2 });
    }
    if !(radius > 0.0 && radius <= std::f64::consts::SQRT_2) {
        return Err(GraphError::InvalidRadius { radius });
    }
    let r2 = radius * radius;
    rejection_sample(seed, |s| {
        let mut rng = ChaCha8Rng::seed_from_u64(s);
        let points: Vec<(f64, f64)> = (0..n)
            .map(|_| (rng.gen::<f64>(), rng.gen::<f64>()))
            .collect();
        let mut edges = Vec::new();
        for u in 0..n {
            for v in (u + 1)..n {
                let dx = points[u].0 - points[v].0;
                let dy = points[u].1 - points[v].1;
                if dx * dx + dy * dy <= r2 {
                    edges.push((u, v));
                }
            }
        }
        Graph::from_edges(n, &edges)
    })
}

/// Connected stochastic-block-model graph plus its ground-truth partition.
///
/// Node `i` belongs to cluster `i / nodes_per_cluster`; intra-cluster pairs
/// get an edge with probability `p_in`, inter-cluster pairs with `p_out`.
pub fn stochastic_block_model(params: &SbmParams, seed: u64) -> Result<(Graph, NodePartition)> {
    params.validate()?;
    let n = params.total_nodes();
    let per = params.nodes_per_cluster;
    let graph = rejection_sample(seed, |s| {
        let mut rng = ChaCha8Rng::seed_from_u64(s);
        let mut edges = Vec::new();
        for u in 0..n {
            for v in (u + 1)..n {
                let p = if u / per == v / per {
                    params.p_in
                } else {
                    params.p_out
                };
                if p > 0.0 && rng.gen_bool(p) {
                    edges.push((u, v));
                }
            }
        }
        Graph::from_edges(n, &edges)
    })?;
    let assignment: Vec<usize> = (0..n).map(|i| i / per).collect();
    let partition = NodePartition::new(assignment, params.clusters)?;
    Ok((graph, partition))
}
