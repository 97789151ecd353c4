//! The four seeded graph generators, their basic statistics, and the text
//! fixture format (edge list with an `n m` header, partitions as
//! `node cluster` pairs).
//!
//! Run with: cargo run --example generate_graphs

use groundsel::graph::{
    barabasi_albert, erdos_renyi, random_geometric, read_edge_list, stochastic_block_model,
    write_edge_list, write_partition, Graph, NodePartition, SbmParams,
};

fn stats(name: &str, g: &Graph) {
    let degrees = g.degrees();
    let max_degree = degrees.iter().cloned().fold(0.0, f64::max);
    println!(
        "{name:<28} n={:<5} m={:<6} mean degree={:<6.2} max degree={max_degree:<5} connected={}",
        g.node_count(),
        g.edge_count(),
        2.0 * g.edge_count() as f64 / g.node_count() as f64,
        g.is_connected(),
    );
}

fn main() -> anyhow::Result<()> {
    let seed = 7;

    let er = erdos_renyi(100, 0.05, seed)?;
    stats("erdos_renyi(100, 0.05)", &er);

    let ba = barabasi_albert(100, 2, seed)?;
    stats("barabasi_albert(100, 2)", &ba);

    let rg = random_geometric(100, 0.2, seed)?;
    stats("random_geometric(100, 0.2)", &rg);

    let params = SbmParams {
        clusters: 4,
        nodes_per_cluster: 50,
        p_in: 0.2,
        p_out: 0.02,
    };
    let (sbm, blocks) = stochastic_block_model(&params, seed)?;
    stats("stochastic_block_model(4x50)", &sbm);
    println!(
        "ground-truth blocks: {:?}",
        blocks.members().iter().map(Vec::len).collect::<Vec<_>>()
    );

    // Generators are pure functions of (params, seed).
    assert_eq!(er, erdos_renyi(100, 0.05, seed)?);

    // Round-trip through the text fixture format.
    let mut buffer = Vec::new();
    write_edge_list(&er, &mut buffer)?;
    let parsed = read_edge_list(buffer.as_slice())?;
    assert_eq!(er, parsed);
    let header = String::from_utf8_lossy(&buffer);
    println!("\nedge-list fixture starts with:");
    for line in header.lines().take(4) {
        println!("  {line}");
    }

    let partition = NodePartition::equal(&er, 3, seed)?;
    let mut pbuf = Vec::new();
    write_partition(&partition, &mut pbuf)?;
    println!(
        "equal partition sizes: {:?}",
        partition.members().iter().map(Vec::len).collect::<Vec<_>>()
    );
    Ok(())
}
