//! Lazy greedy returns exactly the ordinary greedy solution while skipping
//! evaluations whose cached upper bound cannot win. The savings grow with
//! the leader budget k and with degree skew (scale-free graphs profit most).
//!
//! Run with: cargo run --release --example lazy_speedup

use groundsel::graph::{barabasi_albert, erdos_renyi, random_geometric, Graph};
use groundsel::greedy::{lazy_greedy, ordinary_greedy};
use groundsel::oracle::OracleKind;

fn main() -> anyhow::Result<()> {
    let n = 300;
    let seed = 1;
    let graphs: Vec<(&str, Graph)> = vec![
        ("er", erdos_renyi(n, 0.05, seed)?),
        ("rg", random_geometric(n, 0.126, seed)?),
        ("ba", barabasi_albert(n, 2, seed)?),
    ];

    println!("call-count ratio ordinary/lazy (identical selections):");
    print!("{:<6}", "graph");
    let ks = [10usize, 20, 30, 40, 50];
    for k in ks {
        print!("k={k:<7}");
    }
    println!();
    for (name, graph) in &graphs {
        print!("{name:<6}");
        for k in ks {
            let ord = ordinary_greedy(graph, k, OracleKind::Accelerated)?;
            let lazy = lazy_greedy(graph, k, OracleKind::Accelerated)?;
            assert_eq!(ord.selections(), lazy.selections());
            let ratio = ord.total_calls() as f64 / lazy.total_calls() as f64;
            print!("{ratio:<9.2}");
        }
        println!();
    }
    println!("\nper-iteration re-evaluations (ba, k=20):");
    let lazy = lazy_greedy(&graphs[2].1, 20, OracleKind::Accelerated)?;
    let recomputes: Vec<u64> = lazy
        .records
        .iter()
        .map(|r| r.recomputations.unwrap_or(0))
        .collect();
    println!("{recomputes:?}");
    Ok(())
}
