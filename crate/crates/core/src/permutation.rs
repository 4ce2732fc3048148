//! Graph permutations as successor maps, their cycle structure, and the
//! correspondence between matchings and dyadic permutations.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::partition::Partition;

/// Cycle types are partitions of the vertex count.
pub type CycleType = Partition;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InvalidReason {
    WrongLength,
    OutOfRange,
    NotInjective,
    NonAdjacentImage,
}

/// Outcome of checking a successor map against a graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Classification {
    Derangement,
    PermutationWithFixedPoints(usize),
    Invalid { vertex: usize, reason: InvalidReason },
}

/// Classifies `succ` as a map on the vertices of `graph`. The reported
/// vertex for an invalid map is the first offender in index order.
pub fn validate(graph: &Graph, succ: &[usize]) -> Classification {
    let n = graph.n();
    if succ.len() != n {
        return Classification::Invalid {
            vertex: succ.len().min(n),
            reason: InvalidReason::WrongLength,
        };
    }
    let mut hit = vec![false; n];
    let mut fixed = 0;
    for (v, &w) in succ.iter().enumerate() {
        let reason = if w >= n {
            Some(InvalidReason::OutOfRange)
        } else if hit[w] {
            Some(InvalidReason::NotInjective)
        } else if w != v && !graph.has_edge(v, w) {
            Some(InvalidReason::NonAdjacentImage)
        } else {
            None
        };
        if let Some(reason) = reason {
            return Classification::Invalid { vertex: v, reason };
        }
        hit[w] = true;
        if w == v {
            fixed += 1;
        }
    }
    if fixed == 0 {
        Classification::Derangement
    } else {
        Classification::PermutationWithFixedPoints(fixed)
    }
}

/// A validated graph permutation. Serializes as the JSON array `succ[0..n]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct GraphPermutation {
    succ: Vec<usize>,
}

impl GraphPermutation {
    pub fn new(graph: &Graph, succ: Vec<usize>) -> Result<Self> {
        match validate(graph, &succ) {
            Classification::Invalid { vertex, reason } => Err(Error::InvalidPermutation(format!(
                "{reason:?} at vertex {vertex}"
            ))),
            _ => Ok(GraphPermutation { succ }),
        }
    }

    pub fn identity(n: usize) -> Self {
        GraphPermutation {
            succ: (0..n).collect(),
        }
    }

    /// Caller guarantees validity (search engines that build valid maps).
    pub(crate) fn from_valid(succ: Vec<usize>) -> Self {
        GraphPermutation { succ }
    }

    pub fn succ(&self) -> &[usize] {
        &self.succ
    }

    pub fn n(&self) -> usize {
        self.succ.len()
    }

    pub fn apply(&self, v: usize) -> usize {
        self.succ[v]
    }

    pub fn fixed_points(&self) -> usize {
        self.succ.iter().enumerate().filter(|&(v, &w)| v == w).count()
    }

    pub fn is_derangement(&self) -> bool {
        self.fixed_points() == 0
    }

    /// Orbits, each starting at its minimum vertex and following `succ`,
    /// ordered by minimum vertex.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let n = self.succ.len();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut cycle = Vec::new();
            let mut v = start;
            while !seen[v] {
                seen[v] = true;
                cycle.push(v);
                v = self.succ[v];
            }
            out.push(cycle);
        }
        out
    }

    pub fn cycle_type(&self) -> CycleType {
        Partition::new(self.cycles().iter().map(Vec::len).collect())
            .expect("cycle lengths are positive")
    }

    /// All cycles have length at most 2.
    pub fn is_dyadic(&self) -> bool {
        self.succ.iter().enumerate().all(|(v, &w)| self.succ[w] == v)
    }

    /// No cycle of length 1 or 2.
    pub fn is_matchless(&self) -> bool {
        self.succ
            .iter()
            .enumerate()
            .all(|(v, &w)| w != v && self.succ[w] != v)
    }
}

/// Unwraps the JSON array form; validation against a graph is separate.
impl<'de> Deserialize<'de> for GraphPermutation {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let succ = Vec::<usize>::deserialize(d)?;
        let n = succ.len();
        let mut hit = vec![false; n];
        for &w in &succ {
            if w >= n || std::mem::replace(&mut hit[w], true) {
                return Err(serde::de::Error::custom("successor map is not a bijection"));
            }
        }
        Ok(GraphPermutation { succ })
    }
}

/// Each concentric ring of `R_{m,m}` (m odd) rotated one step
/// counterclockwise, with row 1 drawn at the top. The center is fixed.
pub fn rings_permutation(m: usize) -> Result<GraphPermutation> {
    if m % 2 == 0 {
        return Err(Error::InvalidDimensions(format!(
            "rings permutation needs an odd side, got {m}"
        )));
    }
    let idx = |x: usize, y: usize| x * m + y;
    let mut succ: Vec<usize> = (0..m * m).collect();
    for r in 0..m / 2 {
        let (lo, hi) = (r, m - 1 - r);
        for y in lo + 1..=hi {
            succ[idx(lo, y)] = idx(lo, y - 1); // top row moves left
        }
        for x in lo..hi {
            succ[idx(x, lo)] = idx(x + 1, lo); // left column moves down
        }
        for y in lo..hi {
            succ[idx(hi, y)] = idx(hi, y + 1); // bottom row moves right
        }
        for x in lo + 1..=hi {
            succ[idx(x, hi)] = idx(x - 1, hi); // right column moves up
        }
    }
    Ok(GraphPermutation { succ })
}

/// Pairwise vertex-disjoint edges, stored as sorted `(u, v)` with `u < v`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Matching {
    edges: Vec<(usize, usize)>,
}

impl Matching {
    pub fn new(graph: &Graph, edges: &[(usize, usize)]) -> Result<Self> {
        let mut used = vec![false; graph.n()];
        let mut out = Vec::with_capacity(edges.len());
        for &(u, v) in edges {
            if !graph.has_edge(u, v) {
                return Err(Error::NotAMatching(format!("({u}, {v}) is not an edge")));
            }
            for w in [u, v] {
                if std::mem::replace(&mut used[w], true) {
                    return Err(Error::NotAMatching(format!("vertex {w} covered twice")));
                }
            }
            out.push((u.min(v), u.max(v)));
        }
        out.sort_unstable();
        Ok(Matching { edges: out })
    }

    pub(crate) fn from_pairs(mut edges: Vec<(usize, usize)>) -> Self {
        for e in &mut edges {
            *e = (e.0.min(e.1), e.0.max(e.1));
        }
        edges.sort_unstable();
        Matching { edges }
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn is_perfect(&self, n: usize) -> bool {
        2 * self.edges.len() == n
    }

    /// `mate[v]` for covered vertices.
    pub fn mates(&self, n: usize) -> Vec<Option<usize>> {
        let mut mate = vec![None; n];
        for &(u, v) in &self.edges {
            mate[u] = Some(v);
            mate[v] = Some(u);
        }
        mate
    }
}

/// Swaps the endpoints of each matched edge and fixes everything else.
pub fn matching_to_dyadic(graph: &Graph, matching: &Matching) -> Result<GraphPermutation> {
    // Re-validate: a Matching may have been built for another graph.
    let matching = Matching::new(graph, matching.edges())?;
    let mut succ: Vec<usize> = (0..graph.n()).collect();
    for &(u, v) in matching.edges() {
        succ[u] = v;
        succ[v] = u;
    }
    Ok(GraphPermutation { succ })
}

/// The swapped pairs of a dyadic permutation.
pub fn dyadic_to_matching(perm: &GraphPermutation) -> Result<Matching> {
    let mut edges = Vec::new();
    for (v, &w) in perm.succ.iter().enumerate() {
        if perm.succ[w] != v {
            let len = perm
                .cycles()
                .into_iter()
                .find(|c| c.contains(&v))
                .map_or(0, |c| c.len());
            return Err(Error::NotDyadic(len));
        }
        if v < w {
            edges.push((v, w));
        }
    }
    Ok(Matching { edges })
}
