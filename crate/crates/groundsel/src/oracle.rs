//! Objective oracle for leader selection: `f(S) = tr(L_ff^-1) / 2`, where
//! `L_ff` is the Laplacian with the rows and columns of the leader set `S`
//! removed. Lower is better; the value is the steady-state noise variance of
//! the follower dynamics.
//!
//! Two interchangeable implementations are provided behind [`OracleKind`]:
//!
//! * **Naive** — every evaluation grounds the Laplacian and takes a direct
//!   inverse, O(n^3) per call.
//! * **Accelerated** — an [`OracleState`] carries the inverse of the current
//!   grounded Laplacian; candidate evaluations reduce it by one row/column
//!   via the Woodbury identity in O(n^2), and the empty-set iteration is
//!   bootstrapped from the Laplacian pseudo-inverse (the full Laplacian has
//!   no inverse, so iteration one is special-cased).
//!
//! A brute-force optimum finder over all k-subsets is included for
//! verification on small instances.

use std::collections::BTreeMap;

use itertools::Itertools;
use thiserror::Error;

use crate::graph::Graph;
use crate::linalg::{ground_from_pinv, pinv_laplacian, woodbury_remove, DenseMatrix, LinalgError};

/// Chained Woodbury updates allowed before the grounded inverse is
/// recomputed from scratch, bounding numerical drift.
pub const REFRESH_INTERVAL: u32 = 64;

/// Guard bounds for [`brute_force_optimum`].
pub const BRUTE_FORCE_MAX_NODES: usize = 20;
pub const BRUTE_FORCE_MAX_SUBSETS: u128 = 200_000;

#[derive(Debug, Error)]
pub enum OracleError {
    #[error("graph is disconnected; grounded Laplacian is not invertible")]
    Disconnected,
    #[error("objective undefined at empty set")]
    EmptySet,
    #[error("no followers remain: leader set covers all {n} nodes")]
    NoFollowers { n: usize },
    #[error("node {node} out of range for {n} nodes")]
    NodeOutOfRange { node: usize, n: usize },
    #[error("node {node} is already a leader")]
    AlreadyLeader { node: usize },
    #[error("adding node {node} would leave no followers")]
    WouldExhaustFollowers { node: usize },
    #[error("duplicate node {node} in leader set")]
    DuplicateMember { node: usize },
    #[error("instance too large for brute force: n={n}, {subsets} subsets (limits: n <= {max_n}, subsets <= {max_subsets})")]
    InstanceTooLarge {
        n: usize,
        subsets: u128,
        max_n: usize,
        max_subsets: u128,
    },
    #[error("cardinality {k} out of range (need 1 <= k <= n-1, n={n})")]
    CardinalityOutOfRange { k: usize, n: usize },
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

pub type Result<T> = std::result::Result<T, OracleError>;

/// Which objective-evaluation strategy an optimizer drives.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OracleKind {
    Naive,
    Accelerated,
}

impl std::fmt::Display for OracleKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            OracleKind::Naive => write!(f, "naive"),
            OracleKind::Accelerated => write!(f, "accelerated"),
        }
    }
}

/// Ordered sequence of distinct leader node ids (order = selection order).
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct LeaderSet {
    members: Vec<usize>,
}

impl LeaderSet {
    pub fn new(members: Vec<usize>) -> Result<Self> {
        let mut seen = std::collections::HashSet::with_capacity(members.len());
        for &m in &members {
            if !seen.insert(m) {
                return Err(OracleError::DuplicateMember { node: m });
            }
        }
        Ok(Self { members })
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, node: usize) -> bool {
        self.members.contains(&node)
    }

    fn check_against(&self, n: usize) -> Result<()> {
        for &m in &self.members {
            if m >= n {
                return Err(OracleError::NodeOutOfRange { node: m, n });
            }
        }
        if self.members.is_empty() {
            return Err(OracleError::EmptySet);
        }
        if self.members.len() >= n {
            return Err(OracleError::NoFollowers { n });
        }
        Ok(())
    }
}

impl From<Vec<usize>> for LeaderSet {
    /// Panics on duplicates; convenience for literals in tests and examples.
    fn from(members: Vec<usize>) -> Self {
        Self::new(members).expect("distinct members")
    }
}

/// Laplacian restricted to the followers of `s`, survivors in increasing
/// node order.
fn grounded_laplacian(graph: &Graph, members: &[usize]) -> DenseMatrix {
    let n = graph.node_count();
    let mut is_leader = vec![false; n];
    for &m in members {
        is_leader[m] = true;
    }
    let survivors: Vec<usize> = (0..n).filter(|&i| !is_leader[i]).collect();
    let full = graph.laplacian();
    let dim = survivors.len();
    let mut out = DenseMatrix::zeros(dim, dim);
    for (i, &si) in survivors.iter().enumerate() {
        for (j, &sj) in survivors.iter().enumerate() {
            out.set(i, j, full.get(si, sj));
        }
    }
    out
}

/// The objective `tr(L_ff^-1) / 2` evaluated from scratch with a direct
/// inverse. Pure: no state, no caching.
pub fn objective(graph: &Graph, s: &LeaderSet) -> Result<f64> {
    s.check_against(graph.node_count())?;
    if !graph.is_connected() {
        return Err(OracleError::Disconnected);
    }
    let grounded = grounded_laplacian(graph, s.members());
    Ok(0.5 * grounded.inverse()?.trace())
}

/// Bootstrap for the first iteration, where the empty-set objective is
/// undefined (the full Laplacian is singular).
///
/// The accelerated path computes the Laplacian pseudo-inverse once and reads
/// every single-leader grounded inverse off it in O(n^2) each; the naive
/// path takes a direct inverse per node.
pub struct FirstIteration<'g> {
    graph: &'g Graph,
    kind: OracleKind,
    laplacian: DenseMatrix,
    pinv: Option<DenseMatrix>,
}

impl<'g> FirstIteration<'g> {
    pub fn new(graph: &'g Graph, kind: OracleKind) -> Result<Self> {
        if graph.node_count() < 2 {
            return Err(OracleError::NoFollowers {
                n: graph.node_count(),
            });
        }
        if !graph.is_connected() {
            return Err(OracleError::Disconnected);
        }
        let laplacian = graph.laplacian();
        let pinv = match kind {
            OracleKind::Accelerated => Some(pinv_laplacian(&laplacian)?),
            OracleKind::Naive => None,
        };
        Ok(Self {
            graph,
            kind,
            laplacian,
            pinv,
        })
    }

    pub fn kind(&self) -> OracleKind {
        self.kind
    }

    /// Objective of the single-leader set `{node}`.
    pub fn single_leader_objective(&self, node: usize) -> Result<f64> {
        let n = self.graph.node_count();
        if node >= n {
            return Err(OracleError::NodeOutOfRange { node, n });
        }
        let grounded_inverse = match &self.pinv {
            Some(pinv) => ground_from_pinv(pinv, node)?,
            None => self.laplacian.delete_row_col(node)?.inverse()?,
        };
        Ok(0.5 * grounded_inverse.trace())
    }

    /// State carrying the grounded inverse after committing the first leader.
    ///
    /// `calls_so_far` seeds the call counter with the number of first-
    /// iteration evaluations the caller performed.
    pub fn state_after(&self, node: usize, calls_so_far: u64) -> Result<OracleState<'g>> {
        let n = self.graph.node_count();
        if node >= n {
            return Err(OracleError::NodeOutOfRange { node, n });
        }
        let grounded_laplacian = self.laplacian.delete_row_col(node)?;
        let grounded_inverse = match &self.pinv {
            Some(pinv) => ground_from_pinv(pinv, node)?,
            None => grounded_laplacian.inverse()?,
        };
        Ok(OracleState {
            graph: self.graph,
            kind: self.kind,
            leaders: LeaderSet::new(vec![node])?,
            grounded_laplacian,
            grounded_inverse,
            index_map: (0..n).filter(|&i| i != node).collect(),
            call_count: calls_so_far,
            refresh_counter: 0,
        })
    }
}

/// Gains of iteration one for every node: the map `node -> objective({node})`.
pub fn first_iteration_gains(graph: &Graph) -> Result<BTreeMap<usize, f64>> {
    let first = FirstIteration::new(graph, OracleKind::Accelerated)?;
    (0..graph.node_count())
        .map(|m| Ok((m, first.single_leader_objective(m)?)))
        .collect()
}

/// Incrementally maintained oracle state: the current leader set together
/// with the inverse of the grounded Laplacian over the surviving followers.
///
/// The state is an immutable snapshot except for the call counter:
/// [`OracleState::marginal_gain`] only counts, and [`OracleState::commit`]
/// returns a new state.
#[derive(Debug, Clone)]
pub struct OracleState<'g> {
    graph: &'g Graph,
    kind: OracleKind,
    leaders: LeaderSet,
    grounded_laplacian: DenseMatrix,
    grounded_inverse: DenseMatrix,
    /// Surviving row index -> graph node id (always increasing).
    index_map: Vec<usize>,
    call_count: u64,
    refresh_counter: u32,
}

impl<'g> OracleState<'g> {
    /// Builds a state for an explicit leader set by committing its members
    /// in order, exercising the incremental path for the accelerated kind.
    pub fn from_leaders(graph: &'g Graph, leaders: &LeaderSet, kind: OracleKind) -> Result<Self> {
        leaders.check_against(graph.node_count())?;
        let first = FirstIteration::new(graph, kind)?;
        let mut state = first.state_after(leaders.members()[0], 0)?;
        for &v in &leaders.members()[1..] {
            state = state.commit(v)?;
        }
        Ok(state)
    }

    pub fn graph(&self) -> &'g Graph {
        self.graph
    }

    pub fn kind(&self) -> OracleKind {
        self.kind
    }

    pub fn leaders(&self) -> &LeaderSet {
        &self.leaders
    }

    /// Current objective `tr(G)/2` read off the maintained inverse.
    pub fn objective(&self) -> f64 {
        0.5 * self.grounded_inverse.trace()
    }

    pub fn call_count(&self) -> u64 {
        self.call_count
    }

    pub fn add_calls(&mut self, calls: u64) {
        self.call_count += calls;
    }

    /// Surviving follower node ids in increasing order.
    pub fn followers(&self) -> &[usize] {
        &self.index_map
    }

    pub fn grounded_inverse(&self) -> &DenseMatrix {
        &self.grounded_inverse
    }

    fn follower_position(&self, node: usize) -> Result<usize> {
        if node >= self.graph.node_count() {
            return Err(OracleError::NodeOutOfRange {
                node,
                n: self.graph.node_count(),
            });
        }
        self.index_map
            .binary_search(&node)
            .map_err(|_| OracleError::AlreadyLeader { node })
    }

    /// The decrease `objective(S) - objective(S + {v})`, non-negative for
    /// the monotone objective. Counts one oracle call; does not change the
    /// selection state.
    ///
    /// The accelerated kind evaluates the candidate with a single Woodbury
    /// row/column removal on the maintained inverse (about `2 l^2` work);
    /// the naive kind takes a fresh direct inverse.
    pub fn marginal_gain(&mut self, node: usize) -> Result<f64> {
        let pos = self.follower_position(node)?;
        if self.index_map.len() == 1 {
            return Err(OracleError::WouldExhaustFollowers { node });
        }
        let candidate_objective = match self.kind {
            OracleKind::Accelerated => {
                let reduced =
                    woodbury_remove(&self.grounded_inverse, &self.grounded_laplacian, pos)?;
                0.5 * reduced.trace()
            }
            OracleKind::Naive => {
                let reduced = self.grounded_laplacian.delete_row_col(pos)?.inverse()?;
                0.5 * reduced.trace()
            }
        };
        self.call_count += 1;
        Ok(self.objective() - candidate_objective)
    }

    /// New state with `node` appended to the leaders and the grounded
    /// inverse reduced accordingly.
    ///
    /// The accelerated kind chains a Woodbury removal and, every
    /// [`REFRESH_INTERVAL`] commits, recomputes the inverse from scratch to
    /// bound drift. Commits are not oracle calls.
    pub fn commit(&self, node: usize) -> Result<Self> {
        let pos = self.follower_position(node)?;
        if self.index_map.len() == 1 {
            return Err(OracleError::WouldExhaustFollowers { node });
        }
        let grounded_laplacian = self.grounded_laplacian.delete_row_col(pos)?;
        let (grounded_inverse, refresh_counter) = match self.kind {
            OracleKind::Accelerated => {
                if self.refresh_counter + 1 >= REFRESH_INTERVAL {
                    (grounded_laplacian.inverse()?, 0)
                } else {
                    (
                        woodbury_remove(&self.grounded_inverse, &self.grounded_laplacian, pos)?,
                        self.refresh_counter + 1,
                    )
                }
            }
            OracleKind::Naive => (grounded_laplacian.inverse()?, 0),
        };
        let mut leaders = self.leaders.members().to_vec();
        leaders.push(node);
        let mut index_map = self.index_map.clone();
        index_map.remove(pos);
        Ok(Self {
            graph: self.graph,
            kind: self.kind,
            leaders: LeaderSet::new(leaders)?,
            grounded_laplacian,
            grounded_inverse,
            index_map,
            call_count: self.call_count,
            refresh_counter,
        })
    }

    /// On-demand consistency check: `max |G * L_ff - I|`.
    pub fn residual(&self) -> f64 {
        let dim = self.grounded_inverse.rows();
        let product = self
            .grounded_inverse
            .matmul(&self.grounded_laplacian)
            .expect("dimensions agree");
        product.max_abs_diff(&DenseMatrix::identity(dim))
    }
}

/// Exhaustive minimization over all k-subsets with the naive objective.
///
/// Ties resolve to the lexicographically smallest member sequence. Guarded
/// to small instances; returns the minimizing set and its objective.
pub fn brute_force_optimum(graph: &Graph, k: usize) -> Result<(LeaderSet, f64)> {
    let n = graph.node_count();
    if k == 0 || k >= n {
        return Err(OracleError::CardinalityOutOfRange { k, n });
    }
    let subsets = binomial(n as u128, k as u128);
    if n > BRUTE_FORCE_MAX_NODES || subsets > BRUTE_FORCE_MAX_SUBSETS {
        return Err(OracleError::InstanceTooLarge {
            n,
            subsets,
            max_n: BRUTE_FORCE_MAX_NODES,
            max_subsets: BRUTE_FORCE_MAX_SUBSETS,
        });
    }
    if !graph.is_connected() {
        return Err(OracleError::Disconnected);
    }
    let full = graph.laplacian();
    let mut best: Option<(Vec<usize>, f64)> = None;
    for subset in (0..n).combinations(k) {
        let mut is_leader = vec![false; n];
        for &m in &subset {
            is_leader[m] = true;
        }
        let survivors: Vec<usize> = (0..n).filter(|&i| !is_leader[i]).collect();
        let dim = survivors.len();
        let mut grounded = DenseMatrix::zeros(dim, dim);
        for (i, &si) in survivors.iter().enumerate() {
            for (j, &sj) in survivors.iter().enumerate() {
                grounded.set(i, j, full.get(si, sj));
            }
        }
        let value = 0.5 * grounded.inverse()?.trace();
        match &best {
            // Strict improvement beyond the tie tolerance replaces; an
            // equal-within-tolerance value keeps the earlier subset, which
            // enumeration order makes the lexicographically smallest.
            Some((_, best_value)) if value >= best_value - 1e-12 => {}
            _ => best = Some((subset, value)),
        }
    }
    let (members, value) = best.expect("at least one subset");
    Ok((LeaderSet::new(members)?, value))
}

fn binomial(n: u128, k: u128) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut result: u128 = 1;
    for i in 0..k {
        result = result.saturating_mul(n - i) / (i + 1);
    }
    result
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::erdos_renyi;
    use rand::seq::SliceRandom;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn p3() -> Graph {
        Graph::from_edges(3, &[(0, 1), (1, 2)]).unwrap()
    }

    fn k2() -> Graph {
        Graph::from_edges(2, &[(0, 1)]).unwrap()
    }

    fn star4() -> Graph {
        Graph::from_edges(4, &[(0, 1), (0, 2), (0, 3)]).unwrap()
    }

    #[test]
    fn objective_p3_values() {
        let g = p3();
        assert!((objective(&g, &vec![1].into()).unwrap() - 1.0).abs() < 1e-12);
        assert!((objective(&g, &vec![0].into()).unwrap() - 1.5).abs() < 1e-12);
        assert!((objective(&k2(), &vec![0].into()).unwrap() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn objective_rejects_empty_and_full() {
        let g = p3();
        assert!(matches!(
            objective(&g, &LeaderSet::new(vec![]).unwrap()),
            Err(OracleError::EmptySet)
        ));
        assert!(matches!(
            objective(&g, &vec![0, 1, 2].into()),
            Err(OracleError::NoFollowers { n: 3 })
        ));
    }

    #[test]
    fn objective_rejects_disconnected() {
        let g = Graph::from_edges(4, &[(0, 1), (2, 3)]).unwrap();
        assert!(matches!(
            objective(&g, &vec![0].into()),
            Err(OracleError::Disconnected)
        ));
    }

    #[test]
    fn first_iteration_gains_p3() {
        let gains = first_iteration_gains(&p3()).unwrap();
        assert!((gains[&0] - 1.5).abs() < 1e-12);
        assert!((gains[&1] - 1.0).abs() < 1e-12);
        assert!((gains[&2] - 1.5).abs() < 1e-12);
    }

    #[test]
    fn first_iteration_gains_k2_symmetric() {
        let gains = first_iteration_gains(&k2()).unwrap();
        assert!((gains[&0] - 0.5).abs() < 1e-12);
        assert!((gains[&1] - 0.5).abs() < 1e-12);
    }

    #[test]
    fn first_iteration_gains_k3_equal() {
        let k3 = Graph::from_edges(3, &[(0, 1), (0, 2), (1, 2)]).unwrap();
        let gains = first_iteration_gains(&k3).unwrap();
        assert!((gains[&0] - gains[&1]).abs() < 1e-12);
        assert!((gains[&1] - gains[&2]).abs() < 1e-12);
    }

    #[test]
    fn marginal_gain_p3() {
        let g = p3();
        for kind in [OracleKind::Naive, OracleKind::Accelerated] {
            let mut state = OracleState::from_leaders(&g, &vec![0].into(), kind).unwrap();
            assert!((state.objective() - 1.5).abs() < 1e-12);
            assert!((state.marginal_gain(1).unwrap() - 1.0).abs() < 1e-10);
            assert!((state.marginal_gain(2).unwrap() - 1.25).abs() < 1e-10);
            assert_eq!(state.call_count(), 2);
            assert!(matches!(
                state.marginal_gain(0),
                Err(OracleError::AlreadyLeader { node: 0 })
            ));
        }
    }

    #[test]
    fn commit_p3() {
        let g = p3();
        let state = OracleState::from_leaders(&g, &vec![0].into(), OracleKind::Accelerated)
            .unwrap();
        let next = state.commit(1).unwrap();
        assert_eq!(next.leaders().members(), &[0, 1]);
        assert_eq!(next.grounded_inverse().rows(), 1);
        assert!((next.grounded_inverse().get(0, 0) - 1.0).abs() < 1e-10);
        assert!(next.residual() < 1e-10);
    }

    #[test]
    fn commit_cannot_exhaust_followers() {
        let g = k2();
        let state = OracleState::from_leaders(&g, &vec![0].into(), OracleKind::Naive).unwrap();
        assert!(matches!(
            state.commit(1),
            Err(OracleError::WouldExhaustFollowers { node: 1 })
        ));
    }

    #[test]
    fn brute_force_p3() {
        let (set, value) = brute_force_optimum(&p3(), 1).unwrap();
        assert_eq!(set.members(), &[1]);
        assert!((value - 1.0).abs() < 1e-12);
    }

    #[test]
    fn brute_force_k3_tie_rule() {
        let k3 = Graph::from_edges(3, &[(0, 1), (0, 2), (1, 2)]).unwrap();
        let (set, _) = brute_force_optimum(&k3, 1).unwrap();
        assert_eq!(set.members(), &[0]);
    }

    #[test]
    fn brute_force_star_center() {
        let (set, value) = brute_force_optimum(&star4(), 1).unwrap();
        assert_eq!(set.members(), &[0]);
        assert!((value - 1.5).abs() < 1e-12);
    }

    #[test]
    fn brute_force_guard() {
        let g = erdos_renyi(25, 0.3, 1).unwrap();
        assert!(matches!(
            brute_force_optimum(&g, 2),
            Err(OracleError::InstanceTooLarge { .. })
        ));
    }

    #[test]
    fn accelerated_matches_naive_on_random_sets() {
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        for n in [8usize, 20, 50] {
            let g = erdos_renyi(n, 0.2, 100 + n as u64).unwrap();
            for _ in 0..5 {
                let size = rng.gen_range(1..n.min(6));
                let mut nodes: Vec<usize> = (0..n).collect();
                nodes.shuffle(&mut rng);
                let leaders = LeaderSet::new(nodes[..size].to_vec()).unwrap();
                let direct = objective(&g, &leaders).unwrap();
                let state =
                    OracleState::from_leaders(&g, &leaders, OracleKind::Accelerated).unwrap();
                let rel = (state.objective() - direct).abs() / (1.0 + direct.abs());
                assert!(rel < 1e-8, "n={n} rel={rel}");
                assert!(state.residual() < 1e-6);
            }
        }
    }

    #[test]
    fn objective_strictly_monotone() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let g = erdos_renyi(15, 0.3, 9).unwrap();
        for _ in 0..50 {
            let size = rng.gen_range(1..=12);
            let mut nodes: Vec<usize> = (0..15).collect();
            nodes.shuffle(&mut rng);
            let s = LeaderSet::new(nodes[..size].to_vec()).unwrap();
            let base = objective(&g, &s).unwrap();
            let v = nodes[size];
            let mut extended = nodes[..size].to_vec();
            extended.push(v);
            let bigger = objective(&g, &LeaderSet::new(extended).unwrap()).unwrap();
            assert!(bigger < base, "adding a leader must strictly decrease");
        }
    }

    #[test]
    fn gains_diminish_as_set_grows() {
        // For S subset of T and v outside T: gain_S(v) >= gain_T(v).
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let g = erdos_renyi(15, 0.3, 12).unwrap();
        let mut checked = 0;
        while checked < 200 {
            let mut nodes: Vec<usize> = (0..15).collect();
            nodes.shuffle(&mut rng);
            let s_size = rng.gen_range(1..=5);
            let t_size = rng.gen_range(s_size..=10);
            if t_size + 1 >= 15 {
                continue;
            }
            let s = LeaderSet::new(nodes[..s_size].to_vec()).unwrap();
            let t = LeaderSet::new(nodes[..t_size].to_vec()).unwrap();
            let v = nodes[t_size];
            let mut state_s = OracleState::from_leaders(&g, &s, OracleKind::Naive).unwrap();
            let mut state_t = OracleState::from_leaders(&g, &t, OracleKind::Naive).unwrap();
            let gain_s = state_s.marginal_gain(v).unwrap();
            let gain_t = state_t.marginal_gain(v).unwrap();
            assert!(
                gain_s >= gain_t - 1e-10,
                "diminishing gains violated: {gain_s} < {gain_t}"
            );
            checked += 1;
        }
    }

    #[test]
    fn long_commit_chain_crosses_refresh() {
        // 70 chained commits cross the refresh interval; the accelerated
        // state must still agree with the naive objective.
        let g = erdos_renyi(100, 0.08, 3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let mut nodes: Vec<usize> = (0..100).collect();
        nodes.shuffle(&mut rng);
        let leaders = LeaderSet::new(nodes[..70].to_vec()).unwrap();
        let state = OracleState::from_leaders(&g, &leaders, OracleKind::Accelerated).unwrap();
        let direct = objective(&g, &leaders).unwrap();
        let rel = (state.objective() - direct).abs() / (1.0 + direct.abs());
        assert!(rel < 1e-8, "rel={rel}");
    }
}
