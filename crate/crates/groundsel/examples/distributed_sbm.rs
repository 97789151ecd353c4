//! Two-stage distributed greedy on a clustered graph: stage one picks k
//! candidates inside every cluster (full-graph objective, cluster-restricted
//! pool), stage two refines the union down to the final k. Compared against
//! the full-graph ordinary baseline, including a homogeneous variant
//! (p_out = p_in) with an arbitrary equal partition.
//!
//! Run with: cargo run --release --example distributed_sbm

use groundsel::graph::{stochastic_block_model, NodePartition, SbmParams};
use groundsel::greedy::{distributed_greedy, ordinary_greedy, InnerAlgorithm};
use groundsel::oracle::OracleKind;

fn main() -> anyhow::Result<()> {
    let k = 10;
    let inner = InnerAlgorithm::Stochastic { epsilon: 0.5 };
    let seed = 11;

    for (label, p_out_factor, equal_partition) in [
        ("clustered (p_out = 0.4 p_in)", 0.4, false),
        ("homogeneous (p_out = p_in), equal partition", 1.0, true),
    ] {
        let params = SbmParams {
            clusters: 4,
            nodes_per_cluster: 100,
            p_in: 0.05,
            p_out: 0.05 * p_out_factor,
        };
        let (graph, blocks) = stochastic_block_model(&params, seed)?;
        let partition = if equal_partition {
            NodePartition::equal(&graph, 4, seed)?
        } else {
            blocks
        };

        let baseline = ordinary_greedy(&graph, k, OracleKind::Accelerated)?;
        let dist = distributed_greedy(&graph, k, &partition, &inner, seed, OracleKind::Accelerated)?;

        let deviation = 100.0 * (dist.final_objective() - baseline.final_objective())
            / baseline.final_objective();
        println!("{label}:");
        println!(
            "  baseline objective {:.5} ({} calls)",
            baseline.final_objective(),
            baseline.total_calls()
        );
        println!(
            "  distributed objective {:.5} ({} calls incl. stage one, {} stage-one runs)",
            dist.final_objective(),
            dist.total_calls(),
            dist.stage_one.len()
        );
        println!(
            "  deviation {deviation:.3}%  call ratio {:.1}x",
            baseline.total_calls() as f64 / dist.total_calls() as f64
        );
        println!("  final leaders: {:?}", dist.selections());
    }
    Ok(())
}
