//! Plain-text fixture formats: an edge list with an `n m` header and one
//! `i j w` triple per line, and a partition file with one `node cluster`
//! pair per line.

use std::io::{BufRead, Write};

use super::{Graph, GraphError, NodePartition, Result};

/// Writes `n m` followed by one `i j w` line per edge.
pub fn write_edge_list<W: Write>(graph: &Graph, mut out: W) -> Result<()> {
    writeln!(out, "{} {}", graph.node_count(), graph.edge_count())?;
    for &(u, v, w) in graph.edges() {
        writeln!(out, "{u} {v} {w}")?;
    }
    Ok(())
}

/// Parses the edge-list format produced by [`write_edge_list`].
pub fn read_edge_list<R: BufRead>(input: R) -> Result<Graph> {
    let mut lines = input.lines().enumerate();
    let (line_no, header) = lines
        .next()
        .ok_or_else(|| GraphError::Parse {
            line: 1,
            reason: "missing header".into(),
        })
        .and_then(|(i, r)| Ok((i + 1, r?)))?;
    let mut parts = header.split_whitespace();
    let n: usize = parse_field(&mut parts, line_no, "node count")?;
    let m: usize = parse_field(&mut parts, line_no, "edge count")?;
    let mut edges = Vec::with_capacity(m);
    for (i, line) in lines {
        let line = line?;
        let line_no = i + 1;
        if line.trim().is_empty() {
            continue;
        }
        let mut parts = line.split_whitespace();
        let u: usize = parse_field(&mut parts, line_no, "source node")?;
        let v: usize = parse_field(&mut parts, line_no, "target node")?;
        let w: f64 = parse_field(&mut parts, line_no, "weight")?;
        edges.push((u, v, w));
    }
    if edges.len() != m {
        return Err(GraphError::Parse {
            line: 1,
            reason: format!("header declares {m} edges, found {}", edges.len()),
        });
    }
    Graph::new(n, edges)
}

/// Writes one `node cluster` line per node.
pub fn write_partition<W: Write>(partition: &NodePartition, mut out: W) -> Result<()> {
    for (node, &cluster) in partition.assignment().iter().enumerate() {
        writeln!(out, "{node} {cluster}")?;
    }
    Ok(())
}

/// Parses the partition format produced by [`write_partition`].
pub fn read_partition<R: BufRead>(input: R) -> Result<NodePartition> {
    let mut pairs = Vec::new();
    for (i, line) in input.lines().enumerate() {
        let line = line?;
        let line_no = i + 1;
        if line.trim().is_empty() {
            continue;
        }
        let mut parts = line.split_whitespace();
        let node: usize = parse_field(&mut parts, line_no, "node")?;
        let cluster: usize = parse_field(&mut parts, line_no, "cluster")?;
        pairs.push((node, cluster, line_no));
    }
    let n = pairs.len();
    let mut assignment = vec![usize::MAX; n];
    let mut clusters = 0;
    for (node, cluster, line_no) in pairs {
        if node >= n || assignment[node] != usize::MAX {
            return Err(GraphError::Parse {
                line: line_no,
                reason: format!("node {node} missing, repeated, or out of range"),
            });
        }
        assignment[node] = cluster;
        clusters = clusters.max(cluster + 1);
    }
    NodePartition::new(assignment, clusters)
}

fn parse_field<'a, T: std::str::FromStr>(
    parts: &mut impl Iterator<Item = &'a str>,
    line: usize,
    what: &str,
) -> Result<T> {
    parts
        .next()
        .ok_or_else(|| GraphError::Parse {
            line,
            reason: format!("missing {what}"),
        })?
        .parse()
        .map_err(|_| GraphError::Parse {
            line,
            reason: format!("invalid {what}"),
        })
}
