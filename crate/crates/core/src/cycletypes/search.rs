//! Backtracking search for a derangement with a prescribed cycle type.
//!
//! A derangement with cycle type `p` is a cover of the vertex set by
//! vertex-disjoint simple cycles whose lengths are the parts of `p`, where a
//! 2-part is an edge traversed both ways. The search places one cycle at a
//! time, always through the smallest uncovered vertex (the anchor), branching
//! on the length of the part that covers it, largest length first. Each cover
//! is therefore visited once up to cycle direction, and direction is fixed by
//! requiring the anchor's successor to be smaller than its predecessor.

use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::partition::Partition;
use crate::permutation::GraphPermutation;

/// Default node budget per partition.
pub const DEFAULT_NODE_BUDGET: u64 = 50_000_000;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    /// Any derangement: parts at least 2.
    #[default]
    Derangement,
    /// No 2-cycles: parts at least 3.
    Matchless,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    /// Maximum node expansions.
    pub nodes: u64,
    pub deadline: Option<Instant>,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            nodes: DEFAULT_NODE_BUDGET,
            deadline: None,
        }
    }
}

impl Budget {
    pub fn nodes(nodes: u64) -> Self {
        Budget {
            nodes,
            deadline: None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CapReason {
    Nodes,
    Time,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Status {
    Realized(GraphPermutation),
    /// The search tree was exhausted.
    Unrealizable,
    /// Stopped early; says nothing about realizability.
    CapHit(CapReason),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RealizationResult {
    pub status: Status,
    pub nodes: u64,
}

impl RealizationResult {
    pub fn is_realized(&self) -> bool {
        matches!(self.status, Status::Realized(_))
    }

    pub fn is_unrealizable(&self) -> bool {
        matches!(self.status, Status::Unrealizable)
    }

    pub fn witness(&self) -> Option<&GraphPermutation> {
        match &self.status {
            Status::Realized(p) => Some(p),
            _ => None,
        }
    }
}

/// Searches for a derangement of `graph` (matchless if `mode` says so) whose
/// cycle type is exactly `partition`.
pub fn realize(
    graph: &Graph,
    partition: &Partition,
    mode: Mode,
    budget: Budget,
) -> Result<RealizationResult> {
    if partition.sum() != graph.n() {
        return Err(Error::InvalidPartition(format!(
            "{partition} sums to {}, graph has {} vertices",
            partition.sum(),
            graph.n()
        )));
    }
    let min_allowed = match mode {
        Mode::Derangement => 2,
        Mode::Matchless => 3,
    };
    if let Some(min) = partition.min_part() {
        if min < min_allowed {
            return Err(Error::InvalidPartition(format!(
                "{partition} has a part below {min_allowed} ({mode:?} mode)"
            )));
        }
    }
    let color = graph.two_color();
    // Every cycle of a bipartite graph is even.
    if color.is_some() && partition.parts().iter().any(|&p| p % 2 == 1) {
        return Ok(RealizationResult {
            status: Status::Unrealizable,
            nodes: 0,
        });
    }
    let mut search = Searcher::new(graph, partition, color.map(|c| c.colors().to_vec()), budget);
    let found = search.region_ok() && search.solve(0);
    let status = if found {
        let perm = GraphPermutation::from_valid(search.succ.clone());
        debug_assert_eq!(&perm.cycle_type(), partition);
        Status::Realized(perm)
    } else if let Some(reason) = search.aborted {
        Status::CapHit(reason)
    } else {
        Status::Unrealizable
    };
    Ok(RealizationResult {
        status,
        nodes: search.nodes,
    })
}

/// All-pairs BFS distances, `u16::MAX` when unreachable.
pub(crate) fn distance_matrix(graph: &Graph) -> Vec<u16> {
    let n = graph.n();
    let mut dist = vec![u16::MAX; n * n];
    let mut queue = Vec::with_capacity(n);
    for s in 0..n {
        let row = &mut dist[s * n..(s + 1) * n];
        row[s] = 0;
        queue.clear();
        queue.push(s);
        let mut i = 0;
        while i < queue.len() {
            let u = queue[i];
            i += 1;
            for &w in graph.neighbors(u) {
                if row[w] == u16::MAX {
                    row[w] = row[u] + 1;
                    queue.push(w);
                }
            }
        }
    }
    dist
}

struct Searcher<'a> {
    graph: &'a Graph,
    n: usize,
    dist: Vec<u16>,
    color: Option<Vec<u8>>,
    covered: Vec<bool>,
    /// Uncovered neighbors of each vertex.
    free_deg: Vec<u32>,
    /// Remaining parts by length (the part being placed is already removed).
    counts: Vec<u32>,
    /// Remaining parts of length at least 3.
    big_remaining: u32,
    succ: Vec<usize>,
    nodes: u64,
    budget: Budget,
    aborted: Option<CapReason>,
    // current cycle
    anchor: usize,
    first: usize,
    target: usize,
    // scratch for region checks
    comp_id: Vec<u32>,
    stack: Vec<usize>,
}

impl<'a> Searcher<'a> {
    fn new(graph: &'a Graph, partition: &Partition, color: Option<Vec<u8>>, budget: Budget) -> Self {
        let n = graph.n();
        let mut counts = vec![0u32; n + 1];
        for &p in partition.parts() {
            counts[p] += 1;
        }
        Searcher {
            graph,
            n,
            dist: distance_matrix(graph),
            color,
            covered: vec![false; n],
            free_deg: (0..n).map(|v| graph.degree(v) as u32).collect(),
            big_remaining: partition.parts().iter().filter(|&&p| p >= 3).count() as u32,
            counts,
            succ: (0..n).collect(),
            nodes: 0,
            budget,
            aborted: None,
            anchor: 0,
            first: 0,
            target: 0,
            comp_id: vec![0; n],
            stack: Vec::new(),
        }
    }

    fn cover(&mut self, v: usize) {
        self.covered[v] = true;
        for &w in self.graph.neighbors(v) {
            self.free_deg[w] -= 1;
        }
    }

    fn uncover(&mut self, v: usize) {
        self.covered[v] = false;
        for &w in self.graph.neighbors(v) {
            self.free_deg[w] += 1;
        }
    }

    fn dist(&self, u: usize, v: usize) -> usize {
        self.dist[u * self.n + v] as usize
    }

    fn take(&mut self, len: usize) {
        self.counts[len] -= 1;
        if len >= 3 {
            self.big_remaining -= 1;
        }
    }

    fn give_back(&mut self, len: usize) {
        self.counts[len] += 1;
        if len >= 3 {
            self.big_remaining += 1;
        }
    }

    /// Counts a node; false once the budget is gone.
    fn tick(&mut self) -> bool {
        if self.aborted.is_some() {
            return false;
        }
        self.nodes += 1;
        if self.nodes > self.budget.nodes {
            self.aborted = Some(CapReason::Nodes);
            return false;
        }
        if self.nodes & 0xfff == 0 {
            if let Some(deadline) = self.budget.deadline {
                if Instant::now() >= deadline {
                    self.aborted = Some(CapReason::Time);
                    return false;
                }
            }
        }
        true
    }

    /// Covers everything from vertex `from` on; true on success.
    fn solve(&mut self, from: usize) -> bool {
        let Some(anchor) = (from..self.n).find(|&v| !self.covered[v]) else {
            return true;
        };
        let lengths: Vec<usize> = (2..=self.n).rev().filter(|&l| self.counts[l] > 0).collect();
        for len in lengths {
            self.take(len);
            let done = if len == 2 {
                self.place_pair(anchor)
            } else {
                self.place_cycle(anchor, len)
            };
            self.give_back(len);
            if done {
                return true;
            }
            if self.aborted.is_some() {
                return false;
            }
        }
        false
    }

    fn place_pair(&mut self, anchor: usize) -> bool {
        let graph = self.graph;
        self.cover(anchor);
        for &w in graph.neighbors(anchor) {
            if self.covered[w] {
                continue;
            }
            if !self.tick() {
                break;
            }
            self.cover(w);
            self.succ[anchor] = w;
            self.succ[w] = anchor;
            if self.region_ok() && self.solve(anchor + 1) {
                return true;
            }
            self.succ[w] = w;
            self.uncover(w);
        }
        self.succ[anchor] = anchor;
        self.uncover(anchor);
        false
    }

    fn place_cycle(&mut self, anchor: usize, len: usize) -> bool {
        let graph = self.graph;
        let (saved_anchor, saved_first, saved_target) = (self.anchor, self.first, self.target);
        self.anchor = anchor;
        self.target = len;
        self.cover(anchor);
        let nbrs = graph.neighbors(anchor);
        let mut done = false;
        for (i, &s) in nbrs.iter().enumerate() {
            if self.covered[s] {
                continue;
            }
            // the closing neighbor must exceed the first step
            if !nbrs[i + 1..].iter().any(|&p| !self.covered[p]) {
                break;
            }
            if self.dist(s, anchor) > len - 1 {
                continue;
            }
            self.first = s;
            self.cover(s);
            self.succ[anchor] = s;
            if self.local_ok(anchor, s, 2) && self.extend(s, 2) {
                done = true;
                break;
            }
            self.uncover(s);
            if self.aborted.is_some() {
                break;
            }
        }
        if !done {
            self.succ[anchor] = anchor;
            self.uncover(anchor);
        }
        self.anchor = saved_anchor;
        self.first = saved_first;
        self.target = saved_target;
        done
    }

    /// `head` is the last of `len` path vertices starting at the anchor.
    fn extend(&mut self, head: usize, len: usize) -> bool {
        if !self.tick() {
            return false;
        }
        let graph = self.graph;
        let (anchor, first, target) = (self.anchor, self.first, self.target);
        if len == target {
            if head > first && graph.has_edge(head, anchor) {
                self.succ[head] = anchor;
                // `solve` may overwrite the current-cycle fields while nested.
                if self.region_ok() && self.solve(anchor + 1) {
                    return true;
                }
                self.anchor = anchor;
                self.first = first;
                self.target = target;
                self.succ[head] = head;
            }
            return false;
        }
        let edges_left = target - len;
        for &w in graph.neighbors(head) {
            if self.covered[w] || self.dist(w, anchor) > edges_left {
                continue;
            }
            if len + 1 == target && w < first {
                continue;
            }
            self.cover(w);
            self.succ[head] = w;
            if self.local_ok(head, w, len + 1) && self.extend(w, len + 1) {
                return true;
            }
            self.succ[head] = head;
            self.uncover(w);
            if self.aborted.is_some() {
                return false;
            }
        }
        false
    }

    /// Local viability of the uncovered vertices next to the path's end after
    /// `head` was appended (path now has `len` vertices).
    fn local_ok(&self, prev: usize, head: usize, len: usize) -> bool {
        let room = self.target - len;
        let graph = self.graph;
        let check = |x: usize| -> bool {
            let fd = self.free_deg[x];
            let later = (fd >= 2 && self.big_remaining > 0) || (fd >= 1 && self.counts[2] > 0);
            if later {
                return true;
            }
            if room == 0 {
                return false;
            }
            let ends = u32::from(graph.has_edge(x, head)) + u32::from(graph.has_edge(x, self.anchor));
            fd + ends >= 2
        };
        graph.neighbors(head).iter().chain(graph.neighbors(prev)).all(|&x| self.covered[x] || check(x))
    }

    /// Feasibility of the uncovered region between cycles.
    fn region_ok(&mut self) -> bool {
        let n = self.n;
        let twos = self.counts[2] as usize;
        let mut forced_pairs = 0usize;
        for v in 0..n {
            if self.covered[v] {
                continue;
            }
            match self.free_deg[v] {
                0 => return false,
                1 => {
                    if twos == 0 {
                        return false;
                    }
                    let u = self.free_neighbor(v);
                    if self.free_deg[u] == 1 {
                        // isolated edge: count it once
                        if v < u {
                            forced_pairs += 1;
                        }
                    } else {
                        // another pendant on the same neighbor is fatal
                        if self.graph.neighbors(u).iter().any(|&w| {
                            w != v && !self.covered[w] && self.free_deg[w] == 1
                        }) {
                            return false;
                        }
                        forced_pairs += 1;
                    }
                }
                _ => {}
            }
        }
        if forced_pairs > twos {
            return false;
        }

        // Components of the uncovered region.
        let mut sizes: Vec<usize> = Vec::new();
        self.comp_id.iter_mut().for_each(|c| *c = 0);
        for root in 0..n {
            if self.covered[root] || self.comp_id[root] != 0 {
                continue;
            }
            let id = sizes.len() as u32 + 1;
            self.comp_id[root] = id;
            self.stack.clear();
            self.stack.push(root);
            let (mut size, mut balance) = (0usize, 0i64);
            while let Some(u) = self.stack.pop() {
                size += 1;
                if let Some(color) = &self.color {
                    balance += if color[u] == 0 { 1 } else { -1 };
                }
                for &w in self.graph.neighbors(u) {
                    if !self.covered[w] && self.comp_id[w] == 0 {
                        self.comp_id[w] = id;
                        self.stack.push(w);
                    }
                }
            }
            // even cycles and 2-cycles are color balanced
            if balance != 0 {
                return false;
            }
            sizes.push(size);
        }
        if sizes.len() <= 1 {
            return true;
        }
        let parts: Vec<(usize, u32)> = (2..=n).rev().filter(|&l| self.counts[l] > 0).map(|l| (l, self.counts[l])).collect();
        sizes.sort_unstable_by(|a, b| b.cmp(a));
        fits(&mut sizes, &parts, 0)
    }

    fn free_neighbor(&self, v: usize) -> usize {
        *self
            .graph
            .neighbors(v)
            .iter()
            .find(|&&w| !self.covered[w])
            .expect("free degree is 1")
    }
}

/// Can the parts (`(length, multiplicity)`, descending) exactly fill bins of
/// the given capacities?
fn fits(capacity: &mut [usize], parts: &[(usize, u32)], idx: usize) -> bool {
    let Some(&(len, count)) = parts.get(idx) else {
        return capacity.iter().all(|&c| c == 0);
    };
    let smallest = parts.last().map_or(0, |p| p.0);
    if capacity.iter().any(|&c| c != 0 && c < smallest) {
        return false;
    }
    if idx + 1 == parts.len() {
        return capacity.iter().all(|&c| c % len == 0);
    }
    place_copies(capacity, parts, idx, len, count, 0)
}

fn place_copies(
    capacity: &mut [usize],
    parts: &[(usize, u32)],
    idx: usize,
    len: usize,
    left: u32,
    start: usize,
) -> bool {
    if left == 0 {
        return fits(capacity, parts, idx + 1);
    }
    // copies of one length go into bins in non-decreasing bin order
    for b in start..capacity.len() {
        if capacity[b] < len || (b > start && capacity[b] == capacity[b - 1]) {
            continue;
        }
        capacity[b] -= len;
        let ok = place_copies(capacity, parts, idx, len, left - 1, b);
        capacity[b] += len;
        if ok {
            return true;
        }
    }
    false
}
