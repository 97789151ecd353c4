//! Undirected weighted graphs: the ground set of the leader-selection
//! problem, plus generators, Laplacian construction, connectivity, and
//! partitioning.

use std::collections::HashSet;

use thiserror::Error;

use crate::linalg::DenseMatrix;

mod generate;
mod io;

pub use generate::{barabasi_albert, erdos_renyi, random_geometric, stochastic_block_model};
pub use io::{read_edge_list, read_partition, write_edge_list, write_partition};

/// Bound on connectivity rejection-sampling attempts in the generators.
pub const MAX_CONNECTIVITY_ATTEMPTS: u64 = 1000;

#[derive(Debug, Error)]
pub enum GraphError {
    #[error("node count must be at least {min}, got {n}")]
    TooFewNodes { n: usize, min: usize },
    #[error("node index {node} out of range for {n} nodes")]
    NodeOutOfRange { node: usize, n: usize },
    #[error("self-loop at node {node}")]
    SelfLoop { node: usize },
    #[error("duplicate edge ({u}, {v})")]
    DuplicateEdge { u: usize, v: usize },
    #[error("edge ({u}, {v}) has non-positive weight {weight}")]
    NonPositiveWeight { u: usize, v: usize, weight: f64 },
    #[error("edge probability {p} outside (0, 1]")]
    InvalidProbability { p: f64 },
    #[error("radius {radius} outside (0, sqrt(2)]")]
    InvalidRadius { radius: f64 },
    #[error("attachment count {m_attach} invalid for {n} nodes (need 1 <= m_attach < n-1)")]
    InvalidAttachment { m_attach: usize, n: usize },
    #[error("invalid block-model parameters: {reason}")]
    InvalidSbmParams { reason: String },
    #[error("could not generate connected graph in {attempts} attempts")]
    ConnectivityRetriesExhausted { attempts: u64 },
    #[error("cluster count {c} out of range for {n} nodes")]
    InvalidClusterCount { c: usize, n: usize },
    #[error("cluster {cluster} is empty")]
    EmptyCluster { cluster: usize },
    #[error("partition covers {assigned} nodes, graph has {n}")]
    PartitionSizeMismatch { assigned: usize, n: usize },
    #[error("parse error at line {line}: {reason}")]
    Parse { line: usize, reason: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, GraphError>;

/// Undirected weighted graph with 0-based node indices.
///
/// Edges are stored as `(u, v, w)` with `u < v`; weights are strictly
/// positive (generators emit unit weights). No self-loops, no duplicates.
#[derive(Debug, Clone, PartialEq)]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize, f64)>,
}

impl Graph {
    /// Builds a graph from weighted edges, validating all invariants.
    pub fn new(n: usize, edges: Vec<(usize, usize, f64)>) -> Result<Self> {
        if n == 0 {
            return Err(GraphError::TooFewNodes { n, min: 1 });
        }
        let mut seen = HashSet::with_capacity(edges.len());
        let mut normalized = Vec::with_capacity(edges.len());
        for (u, v, w) in edges {
            if u >= n {
                return Err(GraphError::NodeOutOfRange { node: u, n });
            }
            if v >= n {
                return Err(GraphError::NodeOutOfRange { node: v, n });
            }
            if u == v {
                return Err(GraphError::SelfLoop { node: u });
            }
            let (a, b) = if u < v { (u, v) } else { (v, u) };
            if !seen.insert((a, b)) {
                return Err(GraphError::DuplicateEdge { u: a, v: b });
            }
            if !(w > 0.0) || !w.is_finite() {
                return Err(GraphError::NonPositiveWeight { u: a, v: b, weight: w });
            }
            normalized.push((a, b, w));
        }
        normalized.sort_by(|x, y| (x.0, x.1).cmp(&(y.0, y.1)));
        Ok(Self { n, edges: normalized })
    }

    /// Convenience constructor with unit weights.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        Self::new(n, edges.iter().map(|&(u, v)| (u, v, 1.0)).collect())
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges as `(u, v, w)` with `u < v`, sorted lexicographically.
    pub fn edges(&self) -> &[(usize, usize, f64)] {
        &self.edges
    }

    /// Adjacency lists (built on demand).
    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.n];
        for &(u, v, _) in &self.edges {
            adj[u].push(v);
            adj[v].push(u);
        }
        adj
    }

    /// Weighted degree of each node.
    pub fn degrees(&self) -> Vec<f64> {
        let mut deg = vec![0.0; self.n];
        for &(u, v, w) in &self.edges {
            deg[u] += w;
            deg[v] += w;
        }
        deg
    }

    /// Graph Laplacian `L = D - A`: weighted degrees on the diagonal, minus
    /// the edge weight off-diagonal. Rows sum to zero.
    pub fn laplacian(&self) -> DenseMatrix {
        let mut l = DenseMatrix::zeros(self.n, self.n);
        for &(u, v, w) in &self.edges {
            l.set(u, v, -w);
            l.set(v, u, -w);
            l.set(u, u, l.get(u, u) + w);
            l.set(v, v, l.get(v, v) + w);
        }
        l
    }

    /// True iff the graph has a single connected component (BFS).
    pub fn is_connected(&self) -> bool {
        if self.n == 0 {
            return false;
        }
        let adj = self.adjacency();
        let mut seen = vec![false; self.n];
        let mut queue = std::collections::VecDeque::new();
        seen[0] = true;
        queue.push_back(0);
        let mut count = 1;
        while let Some(u) = queue.pop_front() {
            for &v in &adj[u] {
                if !seen[v] {
                    seen[v] = true;
                    count += 1;
                    queue.push_back(v);
                }
            }
        }
        count == self.n
    }
}

/// Assignment of every node to exactly one cluster id in `[0, c)`;
/// every cluster is non-empty.
#[derive(Debug, Clone, PartialEq)]
pub struct NodePartition {
    assignment: Vec<usize>,
    clusters: usize,
}

impl NodePartition {
    pub fn new(assignment: Vec<usize>, clusters: usize) -> Result<Self> {
        let mut sizes = vec![0usize; clusters];
        for (node, &c) in assignment.iter().enumerate() {
            if c >= clusters {
                return Err(GraphError::NodeOutOfRange { node, n: clusters });
            }
            sizes[c] += 1;
        }
        for (cluster, &size) in sizes.iter().enumerate() {
            if size == 0 {
                return Err(GraphError::EmptyCluster { cluster });
            }
        }
        Ok(Self { assignment, clusters })
    }

    /// Shuffles the nodes by `seed` and splits them into `c` contiguous
    /// chunks whose sizes differ by at most one.
    pub fn equal(graph: &Graph, c: usize, seed: u64) -> Result<Self> {
        use rand::seq::SliceRandom;
        use rand::SeedableRng;
        let n = graph.node_count();
        if c == 0 || c > n {
            return Err(GraphError::InvalidClusterCount { c, n });
        }
        let mut order: Vec<usize> = (0..n).collect();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        order.shuffle(&mut rng);

        let base = n / c;
        let extra = n % c;
        let mut assignment = vec![0usize; n];
        let mut cursor = 0;
        for cluster in 0..c {
            let size = base + usize::from(cluster < extra);
            for &node in &order[cursor..cursor + size] {
                assignment[node] = cluster;
            }
            cursor += size;
        }
        Self::new(assignment, c)
    }

    pub fn cluster_count(&self) -> usize {
        self.clusters
    }

    pub fn node_count(&self) -> usize {
        self.assignment.len()
    }

    pub fn cluster_of(&self, node: usize) -> usize {
        self.assignment[node]
    }

    pub fn assignment(&self) -> &[usize] {
        &self.assignment
    }

    /// Node lists per cluster, each in increasing node order.
    pub fn members(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.clusters];
        for (node, &c) in self.assignment.iter().enumerate() {
            out[c].push(node);
        }
        out
    }

    /// Checks that the partition covers exactly the nodes of `graph`.
    pub fn check_matches(&self, graph: &Graph) -> Result<()> {
        if self.assignment.len() != graph.node_count() {
            return Err(GraphError::PartitionSizeMismatch {
                assigned: self.assignment.len(),
                n: graph.node_count(),
            });
        }
        Ok(())
    }
}

/// Stochastic-block-model parameters: `c` equal clusters of `n_per_cluster`
/// nodes, intra-cluster edge probability `p_in`, inter-cluster `p_out`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SbmParams {
    pub clusters: usize,
    pub nodes_per_cluster: usize,
    pub p_in: f64,
    pub p_out: f64,
}

impl SbmParams {
    pub fn validate(&self) -> Result<()> {
        if self.clusters < 1 {
            return Err(GraphError::InvalidSbmParams {
                reason: "cluster count must be >= 1".into(),
            });
        }
        if self.nodes_per_cluster < 1 {
            return Err(GraphError::InvalidSbmParams {
                reason: "nodes per cluster must be >= 1".into(),
            });
        }
        if self.clusters * self.nodes_per_cluster < 2 {
            return Err(GraphError::InvalidSbmParams {
                reason: "total node count must be >= 2".into(),
            });
        }
        if !(self.p_in > 0.0 && self.p_in <= 1.0) {
            return Err(GraphError::InvalidSbmParams {
                reason: format!("p_in {} outside (0, 1]", self.p_in),
            });
        }
        if !(self.p_out >= 0.0 && self.p_out <= 1.0) {
            return Err(GraphError::InvalidSbmParams {
                reason: format!("p_out {} outside [0, 1]", self.p_out),
            });
        }
        Ok(())
    }

    pub fn total_nodes(&self) -> usize {
        self.clusters * self.nodes_per_cluster
    }
}
