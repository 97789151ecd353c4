//! The first-iteration bootstrap: the graph Laplacian is singular, so the
//! very first grounded inverse cannot come from a rank-2 update. Instead the
//! Moore-Penrose pseudo-inverse is computed once by the rank-one shift
//! `(L + J/n)^-1 - J/n`, and the grounded inverse for every candidate first
//! leader is then read off it entrywise in O(n^2).
//!
//! Run with: cargo run --example laplacian_pseudoinverse

use groundsel::graph::erdos_renyi;
use groundsel::linalg::{ground_from_pinv, pinv_laplacian, DenseMatrix};
use groundsel::oracle::first_iteration_gains;

fn main() -> anyhow::Result<()> {
    let graph = erdos_renyi(30, 0.15, 5)?;
    let laplacian = graph.laplacian();
    let pinv = pinv_laplacian(&laplacian)?;

    // The four Moore-Penrose conditions, checked entrywise.
    let lpl = laplacian.matmul(&pinv)?.matmul(&laplacian)?;
    let plp = pinv.matmul(&laplacian)?.matmul(&pinv)?;
    let lp = laplacian.matmul(&pinv)?;
    let pl = pinv.matmul(&laplacian)?;
    println!("Moore-Penrose residuals (max abs):");
    println!("  L P L = L   : {:.3e}", lpl.max_abs_diff(&laplacian));
    println!("  P L P = P   : {:.3e}", plp.max_abs_diff(&pinv));
    println!("  (L P)^T sym : {:.3e}", lp.max_abs_diff(&lp.transpose()));
    println!("  (P L)^T sym : {:.3e}", pl.max_abs_diff(&pl.transpose()));

    // Grounding any node m off the pseudo-inverse inverts the Laplacian
    // with row/column m deleted.
    let mut worst = 0.0f64;
    for m in 0..graph.node_count() {
        let grounded_inv = ground_from_pinv(&pinv, m)?;
        let grounded = laplacian.delete_row_col(m)?;
        let product = grounded_inv.matmul(&grounded)?;
        let dim = product.rows();
        worst = worst.max(product.max_abs_diff(&DenseMatrix::identity(dim)));
    }
    println!("worst grounding residual over all nodes: {worst:.3e}");

    // The gains of iteration one: objective({m}) for every node, lower is
    // better. The best first leader is the argmin.
    let gains = first_iteration_gains(&graph)?;
    let (best, value) = gains
        .iter()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .map(|(&m, &v)| (m, v))
        .expect("non-empty");
    println!("best first leader: node {best} with objective {value:.4}");
    Ok(())
}
