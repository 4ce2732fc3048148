use super::search::distance_matrix;
use crate::error::{Error, Result};
use crate::graph::Graph;

/// Largest `k` such that the graph has a permutation of type `(k, 1, ..., 1)`:
/// the longest simple cycle, or 2 when the graph has edges but no cycle, or 1
/// for an edgeless graph (identity).
///
/// Lengths are tried from `n` down; for each length every vertex is tried as
/// the cycle's minimum. `budget` bounds the total node expansions.
pub fn longest_realizable_cycle(graph: &Graph, budget: u64) -> Result<usize> {
    let n = graph.n();
    if n == 0 {
        return Ok(0);
    }
    let bipartite = graph.two_color().is_some();
    let mut search = CycleSearch {
        graph,
        n,
        dist: distance_matrix(graph),
        used: vec![false; n],
        nodes: 0,
        budget,
    };
    for len in (3..=n).rev() {
        if bipartite && len % 2 == 1 {
            continue;
        }
        for anchor in 0..n {
            if search.find(anchor, len)? {
                return Ok(len);
            }
        }
    }
    Ok(if graph.edge_count() > 0 { 2 } else { 1 })
}

struct CycleSearch<'a> {
    graph: &'a Graph,
    n: usize,
    dist: Vec<u16>,
    used: Vec<bool>,
    nodes: u64,
    budget: u64,
}

impl CycleSearch<'_> {
    /// A cycle of length `len` whose minimum vertex is `anchor`.
    fn find(&mut self, anchor: usize, len: usize) -> Result<bool> {
        // vertices below the anchor are off limits
        self.used.iter_mut().enumerate().for_each(|(v, u)| *u = v <= anchor);
        let nbrs = self.graph.neighbors(anchor);
        for (i, &s) in nbrs.iter().enumerate() {
            if s < anchor || !nbrs[i + 1..].iter().any(|&p| p > s) {
                continue;
            }
            self.used[s] = true;
            let found = self.extend(anchor, s, s, 2, len)?;
            self.used[s] = false;
            if found {
                return Ok(true);
            }
        }
        Ok(false)
    }

    fn extend(&mut self, anchor: usize, first: usize, head: usize, len: usize, target: usize) -> Result<bool> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(Error::BudgetExhausted { nodes: self.nodes });
        }
        if len == target {
            return Ok(head > first && self.graph.has_edge(head, anchor));
        }
        let edges_left = target - len;
        for &w in self.graph.neighbors(head) {
            if self.used[w] || self.dist[w * self.n + anchor] as usize > edges_left {
                continue;
            }
            self.used[w] = true;
            let found = self.extend(anchor, first, w, len + 1, target)?;
            self.used[w] = false;
            if found {
                return Ok(true);
            }
        }
        Ok(false)
    }
}
