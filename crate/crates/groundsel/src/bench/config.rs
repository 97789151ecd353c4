//! Declarative experiment configuration, read from TOML.
//!
//! Each experiment kind has an embedded default configuration (see the
//! `configs/` directory); a user-supplied file replaces it wholesale, and a
//! few CLI flags (seed, output, format) override individual fields.

use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::graph::SbmParams;
use crate::greedy::{Algorithm, InnerAlgorithm};
use crate::oracle::OracleKind;

use super::BenchError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentKind {
    Scaling,
    LazyProfile,
    EpsilonSweep,
    MonteCarlo,
    Sbm,
}

impl std::fmt::Display for ExperimentKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let name = match self {
            ExperimentKind::Scaling => "scaling",
            ExperimentKind::LazyProfile => "lazy-profile",
            ExperimentKind::EpsilonSweep => "epsilon-sweep",
            ExperimentKind::MonteCarlo => "monte-carlo",
            ExperimentKind::Sbm => "sbm",
        };
        write!(f, "{name}")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Topology {
    Er,
    Ba,
    Rg,
}

impl std::fmt::Display for Topology {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Topology::Er => write!(f, "er"),
            Topology::Ba => write!(f, "ba"),
            Topology::Rg => write!(f, "rg"),
        }
    }
}

/// An algorithm entry, optionally pinning its oracle: `"lazy"` or
/// `"stochastic:naive"`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct AlgorithmSpec {
    pub algorithm: Algorithm,
    pub oracle: Option<OracleKind>,
}

impl TryFrom<String> for AlgorithmSpec {
    type Error = String;

    fn try_from(value: String) -> Result<Self, Self::Error> {
        let (name, oracle) = match value.split_once(':') {
            Some((name, oracle)) => (name, Some(oracle)),
            None => (value.as_str(), None),
        };
        let algorithm = match name {
            "ordinary" => Algorithm::Ordinary,
            "lazy" => Algorithm::Lazy,
            "stochastic" => Algorithm::Stochastic,
            "distributed" => Algorithm::Distributed,
            other => return Err(format!("unknown algorithm '{other}'")),
        };
        let oracle = match oracle {
            None => None,
            Some("naive") => Some(OracleKind::Naive),
            Some("accelerated") => Some(OracleKind::Accelerated),
            Some(other) => return Err(format!("unknown oracle '{other}'")),
        };
        Ok(Self { algorithm, oracle })
    }
}

impl From<AlgorithmSpec> for String {
    fn from(spec: AlgorithmSpec) -> String {
        match spec.oracle {
            Some(oracle) => format!("{}:{}", spec.algorithm, oracle),
            None => spec.algorithm.to_string(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeedRange {
    pub start: u64,
    pub count: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct GeneratorParams {
    /// Erdős–Rényi edge probability.
    pub er_p: f64,
    /// Barabási–Albert attachments per node.
    pub ba_m: usize,
    /// Random-geometric connection radius; the default matches the ER
    /// default's mean degree (pi * r^2 = er_p).
    pub rg_radius: f64,
}

impl Default for GeneratorParams {
    fn default() -> Self {
        Self {
            er_p: 0.05,
            ba_m: 2,
            rg_radius: 0.126,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PartitionMode {
    /// The generator's ground-truth block assignment.
    GroundTruth,
    /// A seeded equal split ignoring the blocks.
    EqualRandom,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SbmConfig {
    pub clusters: usize,
    pub nodes_per_cluster: usize,
    pub p_in: f64,
    /// Sweep of `p_out` as fractions of `p_in`.
    pub p_out_factors: Vec<f64>,
    pub partition: PartitionMode,
}

impl Default for SbmConfig {
    fn default() -> Self {
        Self {
            clusters: 4,
            nodes_per_cluster: 100,
            p_in: 0.05,
            p_out_factors: vec![0.4],
            partition: PartitionMode::GroundTruth,
        }
    }
}

impl SbmConfig {
    pub fn params_for_factor(&self, factor: f64) -> SbmParams {
        SbmParams {
            clusters: self.clusters,
            nodes_per_cluster: self.nodes_per_cluster,
            p_in: self.p_in,
            p_out: self.p_in * factor,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct DistributedConfig {
    pub inner: Algorithm,
    pub inner_epsilon: f64,
}

impl Default for DistributedConfig {
    fn default() -> Self {
        Self {
            inner: Algorithm::Stochastic,
            inner_epsilon: 0.5,
        }
    }
}

impl DistributedConfig {
    pub fn inner_algorithm(&self) -> Result<InnerAlgorithm, BenchError> {
        match self.inner {
            Algorithm::Ordinary => Ok(InnerAlgorithm::Ordinary),
            Algorithm::Lazy => Ok(InnerAlgorithm::Lazy),
            Algorithm::Stochastic => Ok(InnerAlgorithm::Stochastic {
                epsilon: self.inner_epsilon,
            }),
            Algorithm::Distributed => Err(BenchError::Config(
                "distributed cannot be its own inner algorithm".into(),
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ReportFormat {
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(default)]
pub struct OutputConfig {
    /// Report directory; overridable by `GROUNDSEL_OUT` and `--out`.
    pub dir: Option<PathBuf>,
    pub format: Option<ReportFormat>,
    /// Also write every generated graph (and partition) as text fixtures.
    pub dump_graphs: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub kind: ExperimentKind,
    #[serde(default = "default_topologies")]
    pub topologies: Vec<Topology>,
    #[serde(default)]
    pub n: Vec<usize>,
    /// Explicit cardinality grid; mutually exclusive with `k_fraction`.
    #[serde(default)]
    pub k: Vec<usize>,
    /// Cardinality as a fraction of n (e.g. 0.05).
    #[serde(default)]
    pub k_fraction: Option<f64>,
    #[serde(default)]
    pub epsilon: Vec<f64>,
    #[serde(default)]
    pub seeds: Vec<u64>,
    /// Convenience alternative to listing seeds one by one.
    #[serde(default)]
    pub seed_range: Option<SeedRange>,
    #[serde(default)]
    pub algorithms: Vec<AlgorithmSpec>,
    /// Default oracle for algorithm entries that do not pin one.
    #[serde(default = "default_oracle")]
    pub oracle: OracleKind,
    #[serde(default)]
    pub generator: GeneratorParams,
    #[serde(default)]
    pub sbm: SbmConfig,
    #[serde(default)]
    pub distributed: DistributedConfig,
    #[serde(default)]
    pub output: OutputConfig,
    /// Iteration at which deviations are reported (defaults to k).
    #[serde(default)]
    pub at_k: Option<usize>,
    /// Fixed graph seed for the Monte Carlo study (defaults to first seed).
    #[serde(default)]
    pub graph_seed: Option<u64>,
    /// Extra n values at which fitted power laws are evaluated.
    #[serde(default)]
    pub extrapolate: Vec<usize>,
    /// Discard one warm-up run before timing (scaling and lazy-profile).
    #[serde(default = "default_true")]
    pub warmup: bool,
}

fn default_topologies() -> Vec<Topology> {
    vec![Topology::Er]
}

fn default_oracle() -> OracleKind {
    OracleKind::Accelerated
}

fn default_true() -> bool {
    true
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self, BenchError> {
        let cfg: ExperimentConfig = toml::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Seed list, expanding `seed_range` when given.
    pub fn seed_list(&self) -> Vec<u64> {
        match self.seed_range {
            Some(SeedRange { start, count }) => (start..start + count).collect(),
            None => self.seeds.clone(),
        }
    }

    /// Cardinalities to run at a given n.
    pub fn ks_for(&self, n: usize) -> Vec<usize> {
        match self.k_fraction {
            Some(f) => vec![((f * n as f64).round() as usize).max(1)],
            None => self.k.clone(),
        }
    }

    /// Oracle for one algorithm entry.
    pub fn oracle_for(&self, spec: &AlgorithmSpec) -> OracleKind {
        spec.oracle.unwrap_or(self.oracle)
    }

    pub fn validate(&self) -> Result<(), BenchError> {
        let fail = |msg: String| Err(BenchError::Config(msg));
        if self.seed_list().is_empty() {
            return fail("at least one seed is required".into());
        }
        if self.k_fraction.is_some() && !self.k.is_empty() {
            return fail("k and k_fraction are mutually exclusive".into());
        }
        if let Some(f) = self.k_fraction {
            if !(f > 0.0 && f < 1.0) {
                return fail(format!("k_fraction {f} outside (0, 1)"));
            }
        }
        match self.kind {
            ExperimentKind::Sbm => {
                if self.sbm.p_out_factors.is_empty() {
                    return fail("sbm.p_out_factors must be non-empty".into());
                }
                for &f in &self.sbm.p_out_factors {
                    self.sbm.params_for_factor(f).validate().map_err(|e| {
                        BenchError::Config(format!("invalid sbm parameters: {e}"))
                    })?;
                }
                if self.first_k().is_none() {
                    return fail("sbm experiment needs k or k_fraction".into());
                }
                self.distributed.inner_algorithm()?;
            }
            kind => {
                if self.n.is_empty() {
                    return fail(format!("{kind} experiment needs a non-empty n list"));
                }
                if self.topologies.is_empty() {
                    return fail("at least one topology is required".into());
                }
                for &n in &self.n {
                    if self.ks_for(n).is_empty() {
                        return fail("k or k_fraction is required".into());
                    }
                    for k in self.ks_for(n) {
                        if k == 0 || k >= n {
                            return fail(format!("k={k} out of range for n={n}"));
                        }
                    }
                }
                match kind {
                    ExperimentKind::Scaling => {
                        if self.algorithms.is_empty() {
                            return fail("scaling experiment needs an algorithm list".into());
                        }
                        if self
                            .algorithms
                            .iter()
                            .any(|a| a.algorithm == Algorithm::Distributed)
                        {
                            return fail(
                                "the distributed optimizer runs under the sbm experiment".into(),
                            );
                        }
                        if self
                            .algorithms
                            .iter()
                            .any(|a| a.algorithm == Algorithm::Stochastic)
                            && self.epsilon.is_empty()
                        {
                            return fail("stochastic runs need an epsilon list".into());
                        }
                    }
                    ExperimentKind::EpsilonSweep | ExperimentKind::MonteCarlo => {
                        if self.epsilon.is_empty() {
                            return fail(format!("{kind} experiment needs an epsilon list"));
                        }
                    }
                    ExperimentKind::LazyProfile | ExperimentKind::Sbm => {}
                }
            }
        }
        for &eps in &self.epsilon {
            if !(eps > 0.0 && eps < 1.0) {
                return fail(format!("epsilon {eps} outside (0, 1)"));
            }
        }
        if let Some(at_k) = self.at_k {
            if let Some(k) = self.first_k() {
                if at_k == 0 || at_k > k {
                    return fail(format!("at_k {at_k} outside 1..={k}"));
                }
            }
        }
        Ok(())
    }

    /// The single k used by deviation-style experiments.
    pub fn first_k(&self) -> Option<usize> {
        match self.kind {
            ExperimentKind::Sbm => {
                let n = self.sbm.clusters * self.sbm.nodes_per_cluster;
                self.ks_for(n).first().copied()
            }
            _ => self.n.first().and_then(|&n| self.ks_for(n).first().copied()),
        }
    }
}
