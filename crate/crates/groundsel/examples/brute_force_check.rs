//! Greedy against the exhaustive optimum on instances small enough to
//! enumerate. The objective is supermodular decreasing, so greedy is
//! near-optimal in practice; the table records the actual ratios.
//!
//! Run with: cargo run --example brute_force_check

use groundsel::graph::erdos_renyi;
use groundsel::greedy::ordinary_greedy;
use groundsel::oracle::{brute_force_optimum, OracleKind};

fn main() -> anyhow::Result<()> {
    println!("n    k  greedy       optimal      ratio    greedy set      optimal set");
    let mut worst: f64 = 1.0;
    for i in 0..12 {
        let n = 8 + i % 5;
        let k = 1 + i % 3;
        let graph = erdos_renyi(n, 0.35, 50 + i as u64)?;
        let greedy = ordinary_greedy(&graph, k, OracleKind::Naive)?;
        let (optimal_set, optimal) = brute_force_optimum(&graph, k)?;
        let ratio = greedy.final_objective() / optimal;
        worst = worst.max(ratio);
        println!(
            "{n:<4} {k:<2} {:<12.6} {optimal:<12.6} {ratio:<8.5} {:<15} {:?}",
            greedy.final_objective(),
            format!("{:?}", greedy.selections()),
            optimal_set.members(),
        );
    }
    println!("\nworst greedy/optimal objective ratio: {worst:.5}");
    Ok(())
}
