//! Leader selection in networked multi-agent systems by submodular
//! maximization.
//!
//! Grounding a node of a connected graph (removing its row and column from
//! the Laplacian) models attaching an external input to that agent; the
//! trace of the inverse of the grounded Laplacian is the steady-state noise
//! variance of the remaining followers. Selecting `k` leader nodes to
//! minimize that variance is a supermodular minimization, so greedy
//! selection carries the usual guarantees — and the bottleneck becomes the
//! objective oracle, a matrix inversion per candidate.
//!
//! This crate provides:
//!
//! * [`graph`] — seeded generators (Erdős–Rényi, Barabási–Albert,
//!   random-geometric, stochastic-block-model), Laplacians, partitions,
//!   and text fixtures.
//! * [`linalg`] — the dense kernel: LU inversion, Laplacian pseudo-inverse,
//!   first grounded inverse, and the rank-2 Woodbury row/column-removal
//!   update that turns each oracle call into O(n^2) work.
//! * [`oracle`] — the objective in naive and accelerated flavors, plus a
//!   brute-force optimum finder for verification.
//! * [`greedy`] — four optimizers: ordinary, lazy (exact, evaluation-
//!   skipping), stochastic (subsampled candidates), and distributed
//!   (two-stage over a node partition).
//! * [`bench`] — a reproducible experiment harness: scaling sweeps, lazy
//!   speedup profiles, epsilon sweeps, Monte Carlo deviation studies,
//!   block-model studies, and log-log scaling fits, with CSV/JSON reports.
//!
//! Start with the runnable examples (`cargo run --release --example
//! select_leaders`, `--example incremental_inverse`, ...) or the `groundsel`
//! CLI for the experiment harness.

pub mod bench;
pub mod graph;
pub mod greedy;
pub mod linalg;
pub mod oracle;

pub use graph::{Graph, NodePartition, SbmParams};
pub use linalg::DenseMatrix;
pub use oracle::{LeaderSet, OracleKind, OracleState};
