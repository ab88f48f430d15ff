//! Immutable undirected simple graph in compressed adjacency form.

use std::io::Write;

use crate::error::{Error, Result};

/// Node identifier. Ids are contiguous, `0..node_count`.
pub type NodeId = u32;

/// Undirected simple graph stored as compressed sparse rows.
///
/// Every neighbor list is sorted and free of duplicates and self-loops, and
/// adjacency is symmetric. The structure is never mutated after
/// construction, so it can be shared freely between worker threads.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    offsets: Vec<usize>,
    neighbors: Vec<NodeId>,
}

/// What was discarded while building a [`Graph`] from raw edges.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct CleaningCounts {
    pub self_loops: u64,
    pub duplicates: u64,
}

impl Graph {
    /// Builds a simple graph on `node_count` nodes, treating every pair as an
    /// undirected edge. Self-loops are dropped and parallel edges collapsed.
    ///
    /// Panics if an endpoint is `>= node_count`.
    pub fn from_edges<I>(node_count: usize, edges: I) -> (Self, CleaningCounts)
    where
        I: IntoIterator<Item = (NodeId, NodeId)>,
        I::IntoIter: Clone,
    {
        let edges = edges.into_iter();
        let mut counts = CleaningCounts::default();
        let mut fill = vec![0usize; node_count + 1];
        for (u, v) in edges.clone() {
            assert!(
                (u as usize) < node_count && (v as usize) < node_count,
                "edge ({u}, {v}) out of range for {node_count} nodes"
            );
            if u == v {
                continue;
            }
            fill[u as usize + 1] += 1;
            fill[v as usize + 1] += 1;
        }
        for i in 1..=node_count {
            fill[i] += fill[i - 1];
        }
        let mut raw = vec![0 as NodeId; fill[node_count]];
        let mut cursor = fill.clone();
        for (u, v) in edges {
            if u == v {
                counts.self_loops += 1;
                continue;
            }
            raw[cursor[u as usize]] = v;
            cursor[u as usize] += 1;
            raw[cursor[v as usize]] = u;
            cursor[v as usize] += 1;
        }

        // Sort and dedup each row in place, compacting towards the front.
        let mut offsets = Vec::with_capacity(node_count + 1);
        offsets.push(0);
        let mut write = 0usize;
        let mut removed = 0u64;
        for node in 0..node_count {
            let (start, end) = (fill[node], fill[node + 1]);
            raw[start..end].sort_unstable();
            let mut last: Option<NodeId> = None;
            for read in start..end {
                let x = raw[read];
                if last == Some(x) {
                    removed += 1;
                    continue;
                }
                last = Some(x);
                raw[write] = x;
                write += 1;
            }
            offsets.push(write);
        }
        raw.truncate(write);
        raw.shrink_to_fit();
        // Each collapsed undirected duplicate removes one entry from both rows.
        counts.duplicates = removed / 2;
        (
            Graph {
                offsets,
                neighbors: raw,
            },
            counts,
        )
    }

    pub fn node_count(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn edge_count(&self) -> usize {
        self.neighbors.len() / 2
    }

    /// Degree of `v`. Panics when `v` is out of range; see [`Graph::degree_of`].
    #[inline]
    pub fn degree(&self, v: usize) -> usize {
        self.offsets[v + 1] - self.offsets[v]
    }

    pub fn degree_of(&self, v: usize) -> Result<usize> {
        if v >= self.node_count() {
            return Err(Error::NodeOutOfRange {
                node: v,
                node_count: self.node_count(),
            });
        }
        Ok(self.degree(v))
    }

    /// Sorted neighbor ids of `v`.
    #[inline]
    pub fn neighbors(&self, v: usize) -> &[NodeId] {
        &self.neighbors[self.offsets[v]..self.offsets[v + 1]]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.node_count() && self.neighbors(u).binary_search(&(v as NodeId)).is_ok()
    }

    pub fn degrees(&self) -> Vec<usize> {
        (0..self.node_count()).map(|v| self.degree(v)).collect()
    }

    pub fn max_degree(&self) -> usize {
        (0..self.node_count()).map(|v| self.degree(v)).max().unwrap_or(0)
    }

    pub fn isolated_count(&self) -> usize {
        (0..self.node_count()).filter(|&v| self.degree(v) == 0).count()
    }

    /// Each undirected edge once, as `(u, v)` with `u < v`, in ascending order.
    pub fn edges(&self) -> impl Iterator<Item = (NodeId, NodeId)> + '_ {
        (0..self.node_count()).flat_map(move |u| {
            self.neighbors(u)
                .iter()
                .filter(move |&&v| (v as usize) > u)
                .map(move |&v| (u as NodeId, v))
        })
    }

    /// Writes the graph in the whitespace-separated edge-list format read by
    /// [`crate::ingest::load_edge_list`]. Each `header` line is emitted as a
    /// `#` comment before the edges.
    pub fn write_edge_list<W: Write>(&self, mut out: W, header: &[String]) -> Result<()> {
        for line in header {
            writeln!(out, "# {line}")?;
        }
        for (u, v) in self.edges() {
            writeln!(out, "{u}\t{v}")?;
        }
        out.flush()?;
        Ok(())
    }
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::*;

    pub fn path(n: usize) -> Graph {
        let edges: Vec<_> = (1..n as NodeId).map(|i| (i - 1, i)).collect();
        Graph::from_edges(n, edges).0
    }

    pub fn star(n: usize) -> Graph {
        let edges: Vec<_> = (1..n as NodeId).map(|i| (0, i)).collect();
        Graph::from_edges(n, edges).0
    }

    pub fn complete(n: usize) -> Graph {
        let mut edges = Vec::new();
        for u in 0..n as NodeId {
            for v in u + 1..n as NodeId {
                edges.push((u, v));
            }
        }
        Graph::from_edges(n, edges).0
    }

    pub fn cycle(n: usize) -> Graph {
        let edges: Vec<_> = (0..n as NodeId)
            .map(|i| (i, (i + 1) % n as NodeId))
            .collect();
        Graph::from_edges(n, edges).0
    }
}

#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn path_degrees() {
        let g = path(3);
        assert_eq!(g.node_count(), 3);
        assert_eq!(g.edge_count(), 2);
        assert_eq!(g.degrees(), vec![1, 2, 1]);
    }

    #[test]
    fn star_and_complete_degrees() {
        let s = star(5);
        assert_eq!(s.degree_of(0).unwrap(), 4);
        assert_eq!(s.degree_of(3).unwrap(), 1);
        let k4 = complete(4);
        assert!((0..4).all(|v| k4.degree_of(v).unwrap() == 3));
    }

    #[test]
    fn degree_of_out_of_range() {
        let s = star(5);
        assert!(matches!(
            s.degree_of(5),
            Err(Error::NodeOutOfRange {
                node: 5,
                node_count: 5
            })
        ));
    }

    #[test]
    fn cleaning_counts() {
        let (g, counts) = Graph::from_edges(2, vec![(0, 0), (0, 1), (1, 0)]);
        assert_eq!(g.edge_count(), 1);
        assert_eq!(counts.self_loops, 1);
        assert_eq!(counts.duplicates, 1);
        assert!(g.has_edge(0, 1) && g.has_edge(1, 0));
        assert!(!g.has_edge(0, 0));
    }

    #[test]
    fn edges_listed_once() {
        let g = complete(4);
        let e: Vec<_> = g.edges().collect();
        assert_eq!(e, vec![(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]);
    }

    fn multigraph() -> impl Strategy<Value = (usize, Vec<(NodeId, NodeId)>)> {
        (1usize..30).prop_flat_map(|n| {
            let node = 0..n as NodeId;
            (Just(n), prop::collection::vec((node.clone(), node), 0..120))
        })
    }

    proptest! {
        #[test]
        fn invariants_hold((n, edges) in multigraph()) {
            let (g, counts) = Graph::from_edges(n, edges.clone());
            prop_assert_eq!(g.node_count(), n);
            let mut degree_sum = 0;
            for u in 0..n {
                let row = g.neighbors(u);
                degree_sum += row.len();
                prop_assert!(row.windows(2).all(|w| w[0] < w[1]));
                prop_assert!(!row.contains(&(u as NodeId)));
                for &v in row {
                    prop_assert!(g.has_edge(v as usize, u));
                }
            }
            prop_assert_eq!(degree_sum, 2 * g.edge_count());
            let loops = edges.iter().filter(|(u, v)| u == v).count() as u64;
            prop_assert_eq!(counts.self_loops, loops);
            prop_assert_eq!(
                counts.duplicates as usize + g.edge_count() + loops as usize,
                edges.len()
            );
        }
    }
}
