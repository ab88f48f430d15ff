//! Edge-list ingestion.
//!
//! The accepted format is the plain text layout used by the public network
//! repositories: one edge per line as two whitespace-separated non-negative
//! integer ids, with `#` comment lines. Blank lines are ignored.

use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::Path;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId};

#[derive(Debug, Clone, Copy)]
pub struct LoadOptions {
    /// Treat every line as an undirected edge. When false, each `u v` line
    /// must be matched by a `v u` line or loading fails.
    pub symmetrize: bool,
}

impl Default for LoadOptions {
    fn default() -> Self {
        LoadOptions { symmetrize: true }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct IngestionReport {
    pub raw_lines: u64,
    pub parsed_edges: u64,
    pub dropped_self_loops: u64,
    pub deduplicated_edges: u64,
    pub relabeled_ids: bool,
    pub isolated_nodes: u64,
    /// `original_ids[new_id]` is the id used in the input. Identity when
    /// `relabeled_ids` is false.
    #[serde(skip)]
    pub original_ids: Vec<u64>,
}

pub fn load_edge_list<R: BufRead>(source: R, options: LoadOptions) -> Result<(Graph, IngestionReport)> {
    let mut report = IngestionReport::default();
    let mut raw: Vec<(u64, u64)> = Vec::new();

    for (index, line) in source.lines().enumerate() {
        let line = line?;
        report.raw_lines += 1;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        raw.push(parse_line(trimmed, index + 1)?);
    }
    report.parsed_edges = raw.len() as u64;
    if raw.is_empty() {
        return Err(Error::NoEdges);
    }

    let mut ids: Vec<u64> = raw.iter().flat_map(|&(u, v)| [u, v]).collect();
    ids.sort_unstable();
    ids.dedup();
    let node_count = ids.len();
    if node_count > NodeId::MAX as usize {
        return Err(Error::InvalidParameter(format!(
            "{node_count} distinct node ids exceed the supported maximum"
        )));
    }
    report.relabeled_ids = ids.last().copied() != Some(node_count as u64 - 1);
    let relabel = |id: u64| -> NodeId {
        if report.relabeled_ids {
            ids.binary_search(&id).expect("id collected above") as NodeId
        } else {
            id as NodeId
        }
    };
    let edges: Vec<(NodeId, NodeId)> = raw.iter().map(|&(u, v)| (relabel(u), relabel(v))).collect();

    if !options.symmetrize {
        check_symmetric(&raw)?;
    }

    let (graph, counts) = Graph::from_edges(node_count, edges.iter().copied());
    report.dropped_self_loops = counts.self_loops;
    report.deduplicated_edges = if options.symmetrize {
        counts.duplicates
    } else {
        // Both directions of every edge are expected exactly once.
        report.parsed_edges - counts.self_loops - 2 * graph.edge_count() as u64
    };
    if graph.edge_count() == 0 {
        return Err(Error::NoEdges);
    }
    report.isolated_nodes = graph.isolated_count() as u64;
    report.original_ids = ids;
    Ok((graph, report))
}

pub fn load_edge_list_path<P: AsRef<Path>>(path: P, options: LoadOptions) -> Result<(Graph, IngestionReport)> {
    let file = File::open(path)?;
    load_edge_list(BufReader::new(file), options)
}

fn parse_line(line: &str, line_no: usize) -> Result<(u64, u64)> {
    let mut tokens = line.split_whitespace();
    let parse = |tok: Option<&str>| -> Result<u64> {
        let tok = tok.ok_or_else(|| Error::Parse {
            line: line_no,
            message: "expected two node ids".into(),
        })?;
        tok.parse::<u64>().map_err(|_| Error::Parse {
            line: line_no,
            message: format!("invalid node id {tok:?}"),
        })
    };
    let u = parse(tokens.next())?;
    let v = parse(tokens.next())?;
    if tokens.next().is_some() {
        return Err(Error::Parse {
            line: line_no,
            message: "expected exactly two node ids".into(),
        });
    }
    Ok((u, v))
}

fn check_symmetric(raw: &[(u64, u64)]) -> Result<()> {
    let mut directed: Vec<(u64, u64)> = raw.iter().copied().filter(|(u, v)| u != v).collect();
    directed.sort_unstable();
    directed.dedup();
    for &(u, v) in &directed {
        if directed.binary_search(&(v, u)).is_err() {
            return Err(Error::Asymmetric { u, v });
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn load(text: &str) -> Result<(Graph, IngestionReport)> {
        load_edge_list(text.as_bytes(), LoadOptions::default())
    }

    #[test]
    fn path_graph() {
        let (g, report) = load("0 1\n1 2\n").unwrap();
        assert_eq!(g.node_count(), 3);
        assert_eq!(g.edge_count(), 2);
        assert_eq!(g.degrees(), vec![1, 2, 1]);
        assert!(!report.relabeled_ids);
        assert_eq!(report.parsed_edges, 2);
    }

    #[test]
    fn cleaning_rules() {
        let (g, report) = load("0 0\n0 1\n1 0\n").unwrap();
        assert_eq!(g.node_count(), 2);
        assert_eq!(g.edge_count(), 1);
        assert_eq!(report.dropped_self_loops, 1);
        assert_eq!(report.deduplicated_edges, 1);
        assert_eq!(report.raw_lines, 3);
    }

    #[test]
    fn star_with_comments_and_tabs() {
        let text = "# Directed graph\n# FromNodeId\tToNodeId\n7\t11\n7\t12\n7\t13\n\n7\t14\n";
        let (g, report) = load(text).unwrap();
        assert!(report.relabeled_ids);
        assert_eq!(report.original_ids, vec![7, 11, 12, 13, 14]);
        assert_eq!(g.degrees(), vec![4, 1, 1, 1, 1]);
        assert_eq!(report.raw_lines, 7);
    }

    #[test]
    fn isolated_from_self_loop_only() {
        let (g, report) = load("0 1\n2 2\n").unwrap();
        assert_eq!(g.node_count(), 3);
        assert_eq!(report.isolated_nodes, 1);
        assert_eq!(g.degree(2), 0);
    }

    #[test]
    fn parse_errors_name_the_line() {
        match load("0 1\n1 x\n") {
            Err(Error::Parse { line: 2, .. }) => {}
            other => panic!("unexpected {other:?}"),
        }
        match load("0 1\n# c\n1 2 3\n") {
            Err(Error::Parse { line: 3, .. }) => {}
            other => panic!("unexpected {other:?}"),
        }
        match load("5\n") {
            Err(Error::Parse { line: 1, .. }) => {}
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(load("-1 2\n"), Err(Error::Parse { line: 1, .. })));
    }

    #[test]
    fn empty_input() {
        assert!(matches!(load(""), Err(Error::NoEdges)));
        assert!(matches!(load("# only comments\n"), Err(Error::NoEdges)));
        assert!(matches!(load("3 3\n"), Err(Error::NoEdges)));
        assert_eq!(Error::NoEdges.to_string(), "no edges");
    }

    #[test]
    fn no_symmetrize_rejects_one_way_edges() {
        let strict = LoadOptions { symmetrize: false };
        assert!(matches!(
            load_edge_list("0 1\n1 2\n2 1\n".as_bytes(), strict),
            Err(Error::Asymmetric { u: 0, v: 1 })
        ));
        let (g, report) = load_edge_list("0 1\n1 0\n1 2\n2 1\n1 2\n".as_bytes(), strict).unwrap();
        assert_eq!(g.edge_count(), 2);
        assert_eq!(report.deduplicated_edges, 1);
    }

    #[test]
    fn round_trip() {
        let (g, _) = load("0 1\n1 2\n2 0\n2 3\n").unwrap();
        let mut buf = Vec::new();
        g.write_edge_list(&mut buf, &["seed 1".to_string()]).unwrap();
        let (h, report) = load_edge_list(buf.as_slice(), LoadOptions::default()).unwrap();
        assert_eq!(g, h);
        assert!(!report.relabeled_ids);
    }
}
