//! Call-count scaling of the optimizers when the leader budget grows with
//! the network (k = 5% of n), with fitted log-log exponents.
//!
//! The ordinary baseline needs a number of oracle calls quadratic in n in
//! this regime; the stochastic optimizer's subsampling cancels the growth
//! of k and stays linear. Wall times are printed for context; call counts
//! are the machine-independent quantity.
//!
//! Run with: cargo run --release --example scaling_exponents

use groundsel::bench::{fit_scaling_exponent, fmt_sig12};
use groundsel::graph::erdos_renyi;
use groundsel::greedy::{ordinary_greedy, stochastic_greedy};
use groundsel::oracle::OracleKind;

fn main() -> anyhow::Result<()> {
    let sizes = [100usize, 200, 400, 800];
    let epsilon = 0.01;
    let seed = 1;

    let mut ordinary_points = Vec::new();
    let mut stochastic_points = Vec::new();
    println!("n     k    algorithm   calls      seconds");
    for &n in &sizes {
        let k = (0.05 * n as f64).round() as usize;
        let graph = erdos_renyi(n, 0.05, seed)?;

        let ord = ordinary_greedy(&graph, k, OracleKind::Accelerated)?;
        println!(
            "{n:<5} {k:<4} ordinary    {:<10} {:.3}",
            ord.total_calls(),
            ord.total_seconds()
        );
        ordinary_points.push((n as f64, ord.total_calls() as f64));

        let st = stochastic_greedy(&graph, k, epsilon, seed, OracleKind::Accelerated)?;
        println!(
            "{n:<5} {k:<4} stochastic  {:<10} {:.3}",
            st.total_calls(),
            st.total_seconds()
        );
        stochastic_points.push((n as f64, st.total_calls() as f64));
    }

    for (name, points) in [
        ("ordinary", &ordinary_points),
        ("stochastic", &stochastic_points),
    ] {
        let fit = fit_scaling_exponent(points)?;
        println!(
            "{name:<11} calls ~ {} * n^{}  (r2 = {})",
            fmt_sig12(fit.coefficient),
            fmt_sig12(fit.exponent),
            fmt_sig12(fit.r_squared)
        );
    }
    Ok(())
}
