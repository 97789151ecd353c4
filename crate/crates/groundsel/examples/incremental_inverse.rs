//! Chained row/column removals on a known inverse: the rank-2 Woodbury
//! update against fresh O(n^3) factorizations, with accuracy after every
//! step and a timing comparison.
//!
//! Run with: cargo run --release --example incremental_inverse

use std::time::Instant;

use groundsel::graph::erdos_renyi;
use groundsel::linalg::woodbury_remove;

fn main() -> anyhow::Result<()> {
    let n = 400;
    let graph = erdos_renyi(n, 0.05, 3)?;
    // Ground one node so the matrix is invertible.
    let mut matrix = graph.laplacian().delete_row_col(0)?;
    let mut incremental = matrix.inverse()?;

    println!("chained removals on a {0}x{0} matrix:", matrix.rows());
    println!("step  dim   rel_err      woodbury_s  direct_s");
    let mut woodbury_total = 0.0;
    let mut direct_total = 0.0;
    for step in 1..=10 {
        let m = matrix.rows() / 2;

        let t = Instant::now();
        let updated = woodbury_remove(&incremental, &matrix, m)?;
        let woodbury_s = t.elapsed().as_secs_f64();
        woodbury_total += woodbury_s;

        matrix = matrix.delete_row_col(m)?;
        let t = Instant::now();
        let direct = matrix.inverse()?;
        let direct_s = t.elapsed().as_secs_f64();
        direct_total += direct_s;

        let rel = updated.max_abs_diff(&direct) / direct.max_abs();
        println!(
            "{step:<5} {:<5} {rel:<12.3e} {woodbury_s:<11.4} {direct_s:<9.4}",
            matrix.rows()
        );
        incremental = updated;
    }
    println!(
        "totals: woodbury {woodbury_total:.4}s vs direct {direct_total:.4}s ({:.1}x)",
        direct_total / woodbury_total
    );
    Ok(())
}
