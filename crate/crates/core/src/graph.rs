//! Finite simple undirected graphs and the checkerboard family.
//!
//! Vertices are dense indices `0..n`. Checkerboard-style generators use
//! row-major indexing: vertex `(x, y)` of an `m x n` board (1-based) is
//! `(x - 1) * n + (y - 1)`, and higher-dimensional boards extend this with
//! the last coordinate varying fastest.

use std::collections::VecDeque;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Membership set over the vertices of a graph.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct VertexSet {
    members: Vec<bool>,
}

impl VertexSet {
    pub fn empty(n: usize) -> Self {
        VertexSet {
            members: vec![false; n],
        }
    }

    pub fn full(n: usize) -> Self {
        VertexSet {
            members: vec![true; n],
        }
    }

    pub fn from_vertices<I: IntoIterator<Item = usize>>(n: usize, vertices: I) -> Result<Self> {
        let mut set = Self::empty(n);
        for v in vertices {
            if v >= n {
                return Err(Error::VertexOutOfRange { vertex: v, n });
            }
            set.members[v] = true;
        }
        Ok(set)
    }

    /// Size of the ambient vertex set.
    pub fn universe(&self) -> usize {
        self.members.len()
    }

    pub fn contains(&self, v: usize) -> bool {
        self.members.get(v).copied().unwrap_or(false)
    }

    pub fn insert(&mut self, v: usize) {
        self.members[v] = true;
    }

    pub fn remove(&mut self, v: usize) {
        self.members[v] = false;
    }

    pub fn len(&self) -> usize {
        self.members.iter().filter(|&&b| b).count()
    }

    pub fn is_empty(&self) -> bool {
        !self.members.iter().any(|&b| b)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.members
            .iter()
            .enumerate()
            .filter_map(|(v, &b)| b.then_some(v))
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }

    pub fn intersection(&self, other: &VertexSet) -> VertexSet {
        VertexSet {
            members: self
                .members
                .iter()
                .zip(&other.members)
                .map(|(&a, &b)| a && b)
                .collect(),
        }
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// Two-coloring of a bipartite graph. Color `0` is side 1, color `1` is side 2.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Bipartition {
    colors: Vec<u8>,
}

impl Bipartition {
    /// Checks that `colors` is a proper 2-coloring of `graph`.
    pub fn new(graph: &Graph, colors: Vec<u8>) -> Result<Self> {
        if colors.len() != graph.n() {
            return Err(Error::Parse(format!(
                "labeling has {} entries, graph has {} vertices",
                colors.len(),
                graph.n()
            )));
        }
        if colors.iter().any(|&c| c > 1) {
            return Err(Error::Parse("colors must be 0 or 1".into()));
        }
        if graph.edges().any(|(u, v)| colors[u] == colors[v]) {
            return Err(Error::NotBipartite);
        }
        Ok(Bipartition { colors })
    }

    pub fn color(&self, v: usize) -> u8 {
        self.colors[v]
    }

    pub fn colors(&self) -> &[u8] {
        &self.colors
    }

    /// Vertices of color `side`, ascending.
    pub fn class(&self, side: u8) -> Vec<usize> {
        (0..self.colors.len())
            .filter(|&v| self.colors[v] == side)
            .collect()
    }
}

/// Certificate that a graph has no derangement.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Obstruction {
    Isolated { vertex: usize },
    PendantPair { a: usize, b: usize, common: usize },
}

/// Bipartite double of a graph: side-1 copies are `0..n`, side-2 copies `n..2n`.
#[derive(Clone, Debug)]
pub struct BipartiteDouble {
    pub graph: Graph,
    original_n: usize,
}

impl BipartiteDouble {
    pub fn original_n(&self) -> usize {
        self.original_n
    }

    /// Maps a double vertex to `(side, original vertex)`, side in `{1, 2}`.
    pub fn source(&self, v: usize) -> (u8, usize) {
        if v < self.original_n {
            (1, v)
        } else {
            (2, v - self.original_n)
        }
    }

    pub fn copy(&self, side: u8, v: usize) -> usize {
        match side {
            1 => v,
            _ => v + self.original_n,
        }
    }

    /// The side labeling: side-1 copies get color 0.
    pub fn labeling(&self) -> Bipartition {
        Bipartition {
            colors: (0..2 * self.original_n)
                .map(|v| u8::from(v >= self.original_n))
                .collect(),
        }
    }
}

/// Immutable simple undirected graph with sorted adjacency lists.
#[derive(Clone, PartialEq, Eq)]
pub struct Graph {
    adj: Vec<Vec<usize>>,
    edge_count: usize,
    label: Option<String>,
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Graph")
            .field("label", &self.label)
            .field("n", &self.n())
            .field("edges", &self.edge_count)
            .finish()
    }
}

impl Graph {
    /// Builds a graph from explicit edges. Duplicate pairs (in either
    /// orientation) collapse; self-loops and out-of-range endpoints are errors.
    pub fn new(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        for &(u, v) in edges {
            for w in [u, v] {
                if w >= n {
                    return Err(Error::VertexOutOfRange { vertex: w, n });
                }
            }
            if u == v {
                return Err(Error::SelfLoop(u));
            }
        }
        Ok(Self::from_edges_lossy(n, edges.iter().copied()))
    }

    /// Generator path: loops are dropped and duplicates merged.
    fn from_edges_lossy<I: IntoIterator<Item = (usize, usize)>>(n: usize, edges: I) -> Self {
        let mut adj = vec![Vec::new(); n];
        for (u, v) in edges {
            if u != v {
                adj[u].push(v);
                adj[v].push(u);
            }
        }
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
        }
        let edge_count = adj.iter().map(Vec::len).sum::<usize>() / 2;
        Graph {
            adj,
            edge_count,
            label: None,
        }
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    /// Checkerboard graph on `Π dims` cells; cells are adjacent iff their
    /// coordinates are at L1-distance 1.
    pub fn checkerboard(dims: &[usize]) -> Result<Self> {
        if dims.is_empty() {
            return Err(Error::InvalidDimensions("empty dimension list".into()));
        }
        if dims.contains(&0) {
            return Err(Error::InvalidDimensions(format!(
                "zero dimension in {dims:?}"
            )));
        }
        let n: usize = dims.iter().product();
        let strides = strides(dims);
        let mut edges = Vec::new();
        for v in 0..n {
            for (axis, &stride) in strides.iter().enumerate() {
                if (v / stride) % dims[axis] + 1 < dims[axis] {
                    edges.push((v, v + stride));
                }
            }
        }
        let label = format!(
            "rect:{}",
            dims.iter()
                .map(usize::to_string)
                .collect::<Vec<_>>()
                .join("x")
        );
        Ok(Self::from_edges_lossy(n, edges).with_label(label))
    }

    /// `R_{m,n}` plus the row wraps `(x,n) ~ (x,1)`. For `n = 1` this is the
    /// cycle graph `C_m`.
    pub fn moebius(m: usize, n: usize) -> Result<Self> {
        if m < 2 || n < 1 {
            return Err(Error::InvalidDimensions(format!(
                "mobius needs m >= 2 and n >= 1, got {m}x{n}"
            )));
        }
        let mut edges = grid_edges(m, n);
        if n == 1 {
            edges.push((m - 1, 0));
        } else {
            edges.extend((0..m).map(|x| (x * n + n - 1, x * n)));
        }
        Ok(Self::from_edges_lossy(m * n, edges).with_label(format!("mobius:{m}x{n}")))
    }

    /// `M_{m,n}` plus the column wraps `(m,y) ~ (1,y)`.
    pub fn torus(m: usize, n: usize) -> Result<Self> {
        if m < 2 || n < 2 {
            return Err(Error::InvalidDimensions(format!(
                "torus needs m, n >= 2, got {m}x{n}"
            )));
        }
        let mut edges = grid_edges(m, n);
        edges.extend((0..m).map(|x| (x * n + n - 1, x * n)));
        edges.extend((0..n).map(|y| ((m - 1) * n + y, y)));
        Ok(Self::from_edges_lossy(m * n, edges).with_label(format!("torus:{m}x{n}")))
    }

    pub fn cycle(m: usize) -> Result<Self> {
        Ok(Self::moebius(m, 1)?.with_label(format!("cycle:{m}")))
    }

    pub fn complete(n: usize) -> Result<Self> {
        if n < 1 {
            return Err(Error::InvalidDimensions("complete graph needs n >= 1".into()));
        }
        let edges = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)));
        Ok(Self::from_edges_lossy(n, edges).with_label(format!("complete:{n}")))
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n() && self.adj[u].binary_search(&v).is_ok()
    }

    /// Edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, list)| list.iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
    }

    /// Open neighborhood `N(X)`, the union of the neighborhoods of members of `X`.
    pub fn neighborhood(&self, set: &VertexSet) -> VertexSet {
        let mut out = VertexSet::empty(self.n());
        for v in set.iter() {
            for &w in &self.adj[v] {
                out.insert(w);
            }
        }
        out
    }

    pub fn is_independent(&self, set: &VertexSet) -> bool {
        set.iter()
            .all(|v| self.adj[v].iter().all(|&w| !set.contains(w)))
    }

    /// Breadth-first 2-coloring, each component seeded at its lowest vertex
    /// with color 0. `None` iff the graph has an odd cycle.
    pub fn two_color(&self) -> Option<Bipartition> {
        self.bfs_coloring().ok()
    }

    /// An odd cycle (as a closed vertex sequence without repetition) when the
    /// graph is not bipartite.
    pub fn odd_cycle(&self) -> Option<Vec<usize>> {
        self.bfs_coloring().err()
    }

    fn bfs_coloring(&self) -> std::result::Result<Bipartition, Vec<usize>> {
        let n = self.n();
        let mut color = vec![u8::MAX; n];
        let mut parent = vec![usize::MAX; n];
        let mut queue = VecDeque::new();
        for root in 0..n {
            if color[root] != u8::MAX {
                continue;
            }
            color[root] = 0;
            queue.push_back(root);
            while let Some(u) = queue.pop_front() {
                for &w in &self.adj[u] {
                    if color[w] == u8::MAX {
                        color[w] = 1 - color[u];
                        parent[w] = u;
                        queue.push_back(w);
                    } else if color[w] == color[u] {
                        return Err(odd_cycle_from(&parent, u, w));
                    }
                }
            }
        }
        Ok(Bipartition { colors: color })
    }

    /// Maximal connected vertex sets, each sorted, ordered by smallest member.
    pub fn connected_components(&self) -> Vec<Vec<usize>> {
        let n = self.n();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for root in 0..n {
            if seen[root] {
                continue;
            }
            seen[root] = true;
            let mut comp = vec![root];
            let mut i = 0;
            while i < comp.len() {
                let u = comp[i];
                i += 1;
                for &w in &self.adj[u] {
                    if !seen[w] {
                        seen[w] = true;
                        comp.push(w);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    /// Isolated vertices and pairs of pendant vertices sharing their neighbor.
    /// A nonempty result certifies that the graph has no derangement.
    pub fn obstructions(&self) -> Vec<Obstruction> {
        let mut out: Vec<Obstruction> = (0..self.n())
            .filter(|&v| self.adj[v].is_empty())
            .map(|vertex| Obstruction::Isolated { vertex })
            .collect();
        let mut pairs = Vec::new();
        for common in 0..self.n() {
            let pendants: Vec<usize> = self.adj[common]
                .iter()
                .copied()
                .filter(|&w| self.adj[w].len() == 1)
                .collect();
            for (i, &a) in pendants.iter().enumerate() {
                for &b in &pendants[i + 1..] {
                    pairs.push(Obstruction::PendantPair { a, b, common });
                }
            }
        }
        pairs.sort_by_key(|o| match *o {
            Obstruction::PendantPair { a, b, .. } => (a, b),
            Obstruction::Isolated { vertex } => (vertex, vertex),
        });
        out.extend(pairs);
        out
    }

    /// Each edge `{x, y}` becomes the crossing edges `{x_1, y_2}` and `{y_1, x_2}`.
    pub fn bipartite_double(&self) -> BipartiteDouble {
        let n = self.n();
        let edges = self.edges().flat_map(|(x, y)| [(x, n + y), (y, n + x)]);
        let mut graph = Self::from_edges_lossy(2 * n, edges);
        if let Some(label) = &self.label {
            graph.label = Some(format!("double({label})"));
        }
        BipartiteDouble {
            graph,
            original_n: n,
        }
    }
}

fn strides(dims: &[usize]) -> Vec<usize> {
    let mut strides = vec![1; dims.len()];
    for i in (0..dims.len().saturating_sub(1)).rev() {
        strides[i] = strides[i + 1] * dims[i + 1];
    }
    strides
}

fn grid_edges(m: usize, n: usize) -> Vec<(usize, usize)> {
    let mut edges = Vec::new();
    for x in 0..m {
        for y in 0..n {
            let v = x * n + y;
            if y + 1 < n {
                edges.push((v, v + 1));
            }
            if x + 1 < m {
                edges.push((v, v + n));
            }
        }
    }
    edges
}

fn odd_cycle_from(parent: &[usize], u: usize, w: usize) -> Vec<usize> {
    let path_to_root = |mut v: usize| {
        let mut path = vec![v];
        while parent[v] != usize::MAX {
            v = parent[v];
            path.push(v);
        }
        path
    };
    let pu = path_to_root(u);
    let pw = path_to_root(w);
    // Both paths end at the root; strip the shared tail down to the LCA.
    let mut i = pu.len();
    let mut j = pw.len();
    while i > 1 && j > 1 && pu[i - 2] == pw[j - 2] {
        i -= 1;
        j -= 1;
    }
    let mut cycle: Vec<usize> = pu[..i].to_vec();
    cycle.extend(pw[..j - 1].iter().rev());
    cycle
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(n: usize, vs: &[usize]) -> VertexSet {
        VertexSet::from_vertices(n, vs.iter().copied()).unwrap()
    }

    #[test]
    fn build_graph_basics() {
        let k2 = Graph::new(2, &[(0, 1)]).unwrap();
        assert_eq!((k2.degree(0), k2.degree(1)), (1, 1));
        let k1 = Graph::new(1, &[]).unwrap();
        assert_eq!((k1.n(), k1.edge_count()), (1, 0));
        let g = Graph::new(4, &[(0, 1), (1, 0), (1, 2)]).unwrap();
        assert_eq!(g.edge_count(), 2);
    }

    #[test]
    fn build_graph_rejects_bad_input() {
        assert!(matches!(
            Graph::new(2, &[(0, 2)]),
            Err(Error::VertexOutOfRange { vertex: 2, n: 2 })
        ));
        assert!(matches!(Graph::new(3, &[(1, 1)]), Err(Error::SelfLoop(1))));
    }

    #[test]
    fn checkerboard_counts() {
        let g = Graph::checkerboard(&[2, 2]).unwrap();
        assert_eq!((g.n(), g.edge_count()), (4, 4));
        let g = Graph::checkerboard(&[5, 5]).unwrap();
        assert_eq!((g.n(), g.edge_count()), (25, 40));
        let g = Graph::checkerboard(&[2, 3, 4]).unwrap();
        assert_eq!(g.n(), 24);
        assert_eq!(g.degree(0), 3);
        assert_eq!(g.label(), Some("rect:2x3x4"));
        assert!(Graph::checkerboard(&[]).is_err());
        assert!(Graph::checkerboard(&[3, 0]).is_err());
    }

    #[test]
    fn checkerboard_matches_l1_definition() {
        let dims = [2, 3, 4];
        let g = Graph::checkerboard(&dims).unwrap();
        let coords = |v: usize| [v / 12, (v / 4) % 3, v % 4];
        for u in 0..24 {
            for v in 0..24 {
                let (a, b) = (coords(u), coords(v));
                let l1: usize = (0..3).map(|i| a[i].abs_diff(b[i])).sum();
                assert_eq!(g.has_edge(u, v), l1 == 1, "{u} {v}");
            }
        }
    }

    #[test]
    fn moebius_family() {
        let c3 = Graph::moebius(3, 1).unwrap();
        assert_eq!((c3.n(), c3.edge_count()), (3, 3));
        let m33 = Graph::moebius(3, 3).unwrap();
        assert!(m33.has_edge(0, 2));
        assert!(m33.two_color().is_none());
        let m24 = Graph::moebius(2, 4).unwrap();
        assert_eq!((m24.n(), m24.edge_count()), (8, 12));
        let m22 = Graph::moebius(3, 2).unwrap();
        assert_eq!(m22.edges().collect::<Vec<_>>(), Graph::checkerboard(&[3, 2]).unwrap().edges().collect::<Vec<_>>());
        assert!(Graph::moebius(1, 4).is_err());
    }

    #[test]
    fn torus_family() {
        let t33 = Graph::torus(3, 3).unwrap();
        assert_eq!((t33.n(), t33.edge_count()), (9, 18));
        assert!((0..9).all(|v| t33.degree(v) == 4));
        let t22 = Graph::torus(2, 2).unwrap();
        assert_eq!((t22.n(), t22.edge_count()), (4, 4));
        assert!(Graph::torus(1, 3).is_err());
    }

    #[test]
    fn edge_sets_nest() {
        for m in 2..6 {
            for n in 2..6 {
                let r = Graph::checkerboard(&[m, n]).unwrap();
                let mo = Graph::moebius(m, n).unwrap();
                let t = Graph::torus(m, n).unwrap();
                assert!(r.edges().all(|(u, v)| mo.has_edge(u, v)));
                assert!(mo.edges().all(|(u, v)| t.has_edge(u, v)));
            }
        }
    }

    #[test]
    fn complete_graphs() {
        assert_eq!(Graph::complete(3).unwrap().edge_count(), 3);
        assert_eq!(Graph::complete(1).unwrap().edge_count(), 0);
        assert_eq!(Graph::complete(5).unwrap().edge_count(), 10);
        assert!(Graph::complete(0).is_err());
    }

    #[test]
    fn neighborhoods() {
        let g = Graph::checkerboard(&[2, 2]).unwrap();
        assert_eq!(g.neighborhood(&set(4, &[0])).to_vec(), vec![1, 2]);
        assert!(g.neighborhood(&VertexSet::empty(4)).is_empty());

        let g = Graph::checkerboard(&[5, 5]).unwrap();
        let black: Vec<usize> = (0..25).filter(|v| (v / 5 + v % 5) % 2 == 0).collect();
        let white: Vec<usize> = (0..25).filter(|v| (v / 5 + v % 5) % 2 == 1).collect();
        assert_eq!(black.len(), 13);
        assert_eq!(g.neighborhood(&set(25, &black)).to_vec(), white);
    }

    #[test]
    fn independence() {
        let g = Graph::checkerboard(&[3, 3]).unwrap();
        let lab = g.two_color().unwrap();
        assert!(g.is_independent(&set(9, &lab.class(0))));
        assert!(!g.is_independent(&set(9, &[0, 1])));
        assert!(g.is_independent(&VertexSet::empty(9)));
    }

    #[test]
    fn coloring_of_grids_and_cycles() {
        for (m, n) in [(3, 4), (5, 5), (1, 7)] {
            let lab = Graph::checkerboard(&[m, n]).unwrap().two_color().unwrap();
            assert_eq!(lab.class(0).len(), (m * n).div_ceil(2));
            assert_eq!(lab.class(1).len(), m * n / 2);
        }
        let c5 = Graph::cycle(5).unwrap();
        assert!(c5.two_color().is_none());
        let odd = c5.odd_cycle().unwrap();
        assert_eq!(odd.len() % 2, 1);
        assert!(Graph::cycle(6).unwrap().two_color().is_some());
    }

    #[test]
    fn odd_cycle_is_a_closed_walk() {
        for g in [
            Graph::moebius(3, 3).unwrap(),
            Graph::torus(3, 5).unwrap(),
            Graph::complete(4).unwrap(),
            Graph::cycle(7).unwrap(),
        ] {
            let c = g.odd_cycle().unwrap();
            assert_eq!(c.len() % 2, 1);
            for i in 0..c.len() {
                assert!(g.has_edge(c[i], c[(i + 1) % c.len()]), "{g:?} {c:?}");
            }
        }
    }

    #[test]
    fn components() {
        assert_eq!(Graph::checkerboard(&[3, 3]).unwrap().connected_components().len(), 1);
        let g = Graph::new(4, &[(0, 2), (1, 3)]).unwrap();
        assert_eq!(g.connected_components(), vec![vec![0, 2], vec![1, 3]]);
        assert_eq!(Graph::new(3, &[]).unwrap().connected_components().len(), 3);
    }

    #[test]
    fn obstructions_found() {
        assert_eq!(
            Graph::complete(1).unwrap().obstructions(),
            vec![Obstruction::Isolated { vertex: 0 }]
        );
        let p3 = Graph::new(3, &[(0, 1), (1, 2)]).unwrap();
        assert_eq!(
            p3.obstructions(),
            vec![Obstruction::PendantPair { a: 0, b: 2, common: 1 }]
        );
        assert!(Graph::checkerboard(&[2, 2]).unwrap().obstructions().is_empty());
    }

    #[test]
    fn doubles() {
        let d = Graph::complete(2).unwrap().bipartite_double();
        assert_eq!(d.graph.edges().collect::<Vec<_>>(), vec![(0, 3), (1, 2)]);
        let d = Graph::cycle(3).unwrap().bipartite_double();
        assert_eq!(d.graph.n(), 6);
        assert_eq!(d.graph.connected_components().len(), 1);
        assert!((0..6).all(|v| d.graph.degree(v) == 2));
        let d = Graph::checkerboard(&[5, 5]).unwrap().bipartite_double();
        assert_eq!((d.graph.n(), d.graph.edge_count()), (50, 80));
        assert_eq!(d.source(27), (2, 2));
        assert_eq!(d.copy(2, 2), 27);
        assert!(Bipartition::new(&d.graph, d.labeling().colors().to_vec()).is_ok());
    }
}
