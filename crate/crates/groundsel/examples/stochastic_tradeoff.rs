//! The stochastic optimizer's speed/optimality dial: larger epsilon means
//! smaller candidate samples (beta = k / ln(1/epsilon)) and fewer oracle
//! calls, at the cost of some deviation from the exhaustive baseline —
//! pronounced only for the first few leaders.
//!
//! Run with: cargo run --release --example stochastic_tradeoff

use groundsel::graph::erdos_renyi;
use groundsel::greedy::{ordinary_greedy, sample_size, stochastic_greedy};
use groundsel::oracle::OracleKind;

fn main() -> anyhow::Result<()> {
    let graph = erdos_renyi(300, 0.05, 7)?;
    let k = 12;
    let baseline = ordinary_greedy(&graph, k, OracleKind::Accelerated)?;
    println!(
        "baseline (ordinary): objective {:.5}, {} oracle calls",
        baseline.final_objective(),
        baseline.total_calls()
    );

    println!("\neps    beta    sample(10th iter)  calls  ratio  dev@1     dev@k");
    for epsilon in [0.01f64, 0.1, 0.3, 0.5] {
        let beta = k as f64 / (1.0 / epsilon).ln();
        let tenth = sample_size(300 - 9, k, epsilon)?;
        let trace = stochastic_greedy(&graph, k, epsilon, 1, OracleKind::Accelerated)?;
        let dev =
            |iter: usize| {
                100.0 * (trace.objective_at(iter).unwrap() - baseline.objective_at(iter).unwrap())
                    / baseline.objective_at(iter).unwrap()
            };
        println!(
            "{epsilon:<6} {beta:<7.3} {tenth:<18} {:<6} {:<6.2} {:<9.3} {:.3}",
            trace.total_calls(),
            baseline.total_calls() as f64 / trace.total_calls() as f64,
            dev(1),
            dev(k),
        );
    }
    println!("\n(dev@i = % objective deviation from the baseline after iteration i)");
    Ok(())
}
