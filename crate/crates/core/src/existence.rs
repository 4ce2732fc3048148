//! Deciding whether a graph has a derangement, and producing witnesses.
//!
//! The constructive route goes through bipartite matching: a derangement of
//! `G` is the same thing as a perfect matching of its bipartite double, and on
//! a bipartitioned graph a perfect matching is the same thing as a dyadic
//! derangement. The exhaustive engines (Hall over independent sets, Tutte,
//! Berge's formula, general maximum matching) are kept at desk scale behind
//! vertex caps and serve as independent cross-checks.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Bipartition, Graph, VertexSet};
use crate::permutation::{GraphPermutation, Matching};

/// Vertex caps for the exponential engines.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Caps {
    /// Independent-subset enumeration in [`hall_check`].
    pub hall_subsets: usize,
    /// Subset enumeration for Tutte/Berge and the general matching search.
    pub exhaustive: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            hall_subsets: 24,
            exhaustive: 20,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum HallMethod {
    BruteIndependent,
    MatchingDeficiency,
}

impl std::str::FromStr for HallMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "brute-independent" | "brute" => Ok(HallMethod::BruteIndependent),
            "matching-deficiency" | "matching" => Ok(HallMethod::MatchingDeficiency),
            _ => Err(Error::Parse(format!("unknown Hall method {s:?}"))),
        }
    }
}

/// Result of testing `#X <= #N(X)` for all vertex sets `X`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HallReport {
    pub holds: bool,
    /// A set with `#X > #N(X)`, present iff `holds` is false.
    pub witness: Option<Vec<usize>>,
    pub method: HallMethod,
}

pub fn hall_check(graph: &Graph, method: HallMethod, caps: &Caps) -> Result<HallReport> {
    let witness = match method {
        HallMethod::BruteIndependent => {
            if graph.n() > caps.hall_subsets {
                return Err(Error::CapExceeded {
                    engine: "independent-set Hall check",
                    n: graph.n(),
                    cap: caps.hall_subsets,
                });
            }
            hall_violation_independent(graph)
        }
        HallMethod::MatchingDeficiency => hall_violation_matching(graph),
    };
    Ok(HallReport {
        holds: witness.is_none(),
        witness,
        method,
    })
}

/// Depth-first over independent sets in lexicographic order of their sorted
/// member lists. Restricting to independent sets loses nothing: any violating
/// set contains an independent violating subset.
fn hall_violation_independent(graph: &Graph) -> Option<Vec<usize>> {
    struct Walk<'a> {
        graph: &'a Graph,
        // how many members of X are adjacent to each vertex
        touch: Vec<u32>,
        nbhd: usize,
        members: Vec<usize>,
    }

    impl Walk<'_> {
        fn add(&mut self, v: usize) {
            self.members.push(v);
            for &w in self.graph.neighbors(v) {
                if self.touch[w] == 0 {
                    self.nbhd += 1;
                }
                self.touch[w] += 1;
            }
        }

        fn pop(&mut self) {
            let v = self.members.pop().unwrap();
            for &w in self.graph.neighbors(v) {
                self.touch[w] -= 1;
                if self.touch[w] == 0 {
                    self.nbhd -= 1;
                }
            }
        }

        fn run(&mut self, from: usize) -> bool {
            for v in from..self.graph.n() {
                // v is independent of X iff no member touches it
                if self.touch[v] != 0 {
                    continue;
                }
                self.add(v);
                if self.members.len() > self.nbhd || self.run(v + 1) {
                    return true;
                }
                self.pop();
            }
            false
        }
    }

    let mut walk = Walk {
        graph,
        touch: vec![0; graph.n()],
        nbhd: 0,
        members: Vec::new(),
    };
    walk.run(0).then_some(walk.members)
}

/// Runs maximum matching on the bipartite double; when it is not perfect, the
/// side-1 vertices reachable by alternating paths from the first unmatched
/// side-1 vertex form a set `X` with `#N(X) = #X - 1`.
fn hall_violation_matching(graph: &Graph) -> Option<Vec<usize>> {
    let n = graph.n();
    let left: Vec<&[usize]> = (0..n).map(|v| graph.neighbors(v)).collect();
    let (mate_left, mate_right) = kuhn(&left, n);
    let root = (0..n).find(|&v| mate_left[v].is_none())?;

    let mut in_x = vec![false; n];
    let mut in_nx = vec![false; n];
    in_x[root] = true;
    let mut stack = vec![root];
    while let Some(x) = stack.pop() {
        for &y in left[x] {
            if in_nx[y] {
                continue;
            }
            in_nx[y] = true;
            let x2 = mate_right[y].expect("maximum matching leaves no augmenting path");
            if !in_x[x2] {
                in_x[x2] = true;
                stack.push(x2);
            }
        }
    }
    Some((0..n).filter(|&v| in_x[v]).collect())
}

/// Augmenting-path maximum matching between `0..left.len()` and `0..n_right`.
/// Augments from the lowest unmatched left vertex, scanning neighbors in the
/// given order, so the result is deterministic.
fn kuhn(left: &[&[usize]], n_right: usize) -> (Vec<Option<usize>>, Vec<Option<usize>>) {
    fn augment(
        x: usize,
        left: &[&[usize]],
        seen: &mut [bool],
        mate_left: &mut [Option<usize>],
        mate_right: &mut [Option<usize>],
    ) -> bool {
        for &y in left[x] {
            if seen[y] {
                continue;
            }
            seen[y] = true;
            let free = match mate_right[y] {
                None => true,
                Some(x2) => augment(x2, left, seen, mate_left, mate_right),
            };
            if free {
                mate_left[x] = Some(y);
                mate_right[y] = Some(x);
                return true;
            }
        }
        false
    }

    let mut mate_left = vec![None; left.len()];
    let mut mate_right = vec![None; n_right];
    let mut seen = vec![false; n_right];
    for x in 0..left.len() {
        seen.iter_mut().for_each(|s| *s = false);
        augment(x, left, &mut seen, &mut mate_left, &mut mate_right);
    }
    (mate_left, mate_right)
}

/// Maximum matching of a bipartitioned graph, grown from the color-0 side.
pub fn max_bipartite_matching(graph: &Graph, labeling: &Bipartition) -> Matching {
    let pairs = side_matching(graph, labeling, 0);
    Matching::from_pairs(pairs)
}

/// Maximum matching as `(x, y)` pairs with `x` of color `side`.
fn side_matching(graph: &Graph, labeling: &Bipartition, side: u8) -> Vec<(usize, usize)> {
    let from = labeling.class(side);
    let left: Vec<&[usize]> = from.iter().map(|&v| graph.neighbors(v)).collect();
    let (mate_left, _) = kuhn(&left, graph.n());
    from.iter()
        .zip(mate_left)
        .filter_map(|(&x, y)| y.map(|y| (x, y)))
        .collect()
}

/// Injection from one color class into the other along edges.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Semiderangement {
    pub from_side: u8,
    /// `(x, image of x)`, sorted by `x`.
    pub map: Vec<(usize, usize)>,
}

impl Semiderangement {
    pub fn image(&self, x: usize) -> Option<usize> {
        self.map
            .binary_search_by_key(&x, |&(a, _)| a)
            .ok()
            .map(|i| self.map[i].1)
    }

    fn check(&self, graph: &Graph, labeling: &Bipartition) -> Result<()> {
        let domain = labeling.class(self.from_side);
        if self.map.len() != domain.len() || self.map.iter().zip(&domain).any(|(&(x, _), &d)| x != d) {
            return Err(Error::InvalidSemiderangement(format!(
                "domain must be exactly the color-{} class",
                self.from_side
            )));
        }
        let mut hit = vec![false; graph.n()];
        for &(x, y) in &self.map {
            if !graph.has_edge(x, y) {
                return Err(Error::InvalidSemiderangement(format!("{x} is not adjacent to {y}")));
            }
            if std::mem::replace(&mut hit[y], true) {
                return Err(Error::InvalidSemiderangement(format!("{y} is hit twice")));
            }
        }
        Ok(())
    }
}

/// An injection of the `from_side` color class into the other class, if one
/// exists.
pub fn find_semiderangement(
    graph: &Graph,
    labeling: &Bipartition,
    from_side: u8,
) -> Option<Semiderangement> {
    let pairs = side_matching(graph, labeling, from_side);
    (pairs.len() == labeling.class(from_side).len()).then_some(Semiderangement {
        from_side,
        map: pairs,
    })
}

/// Combines injections both ways into a perfect matching by the chain
/// argument. On a finite graph every chain closes into a cycle, so each
/// vertex of side 1 is matched to its image under `forward`.
pub fn merge_semiderangements(
    graph: &Graph,
    labeling: &Bipartition,
    forward: &Semiderangement,
    backward: &Semiderangement,
) -> Result<Matching> {
    if forward.from_side == backward.from_side {
        return Err(Error::InvalidSemiderangement(
            "the two injections must go in opposite directions".into(),
        ));
    }
    forward.check(graph, labeling)?;
    backward.check(graph, labeling)?;
    // Both injective between finite classes: both classes have equal size.
    assert_eq!(forward.map.len(), backward.map.len());

    // Walk each chain backwards. With both maps bijective there is no chain
    // start, so the branch that would use `backward^-1` never fires.
    let mut pre_forward = vec![usize::MAX; graph.n()];
    let mut pre_backward = vec![usize::MAX; graph.n()];
    for &(x, y) in &forward.map {
        pre_forward[y] = x;
    }
    for &(y, x) in &backward.map {
        pre_backward[x] = y;
    }
    for &(x, _) in &forward.map {
        let mut cur = x;
        let mut on_forward_side = true;
        loop {
            let prev = if on_forward_side { pre_backward[cur] } else { pre_forward[cur] };
            assert!(prev != usize::MAX, "finite chain has a start");
            cur = prev;
            on_forward_side = !on_forward_side;
            if on_forward_side && cur == x {
                break;
            }
        }
    }
    Matching::new(graph, &forward.map)
}

/// A derangement of `graph`, or `None` when none exists.
///
/// Built from a perfect matching of the bipartite double (`x_1 - y_2` becomes
/// `x -> y`); afterwards every even cycle is split into alternate 2-cycles, so
/// on bipartite graphs the witness is dyadic.
pub fn find_derangement(graph: &Graph) -> Option<GraphPermutation> {
    let n = graph.n();
    let double = graph.bipartite_double();
    let matching = max_bipartite_matching(&double.graph, &double.labeling());
    if !matching.is_perfect(2 * n) {
        return None;
    }
    let mut succ = vec![usize::MAX; n];
    for &(a, b) in matching.edges() {
        let ((_, x), (_, y)) = (double.source(a), double.source(b));
        // a < b, so a is the side-1 copy
        succ[x] = y;
    }
    let perm = GraphPermutation::from_valid(succ);
    let mut split = perm.succ().to_vec();
    for cycle in perm.cycles() {
        if cycle.len() % 2 == 0 {
            for pair in cycle.chunks(2) {
                split[pair[0]] = pair[1];
                split[pair[1]] = pair[0];
            }
        }
    }
    let out = GraphPermutation::from_valid(split);
    debug_assert!(out.is_derangement());
    Some(out)
}

/// Either the Tutte condition holds for every `X`, or a violating `X`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TutteReport {
    pub holds: bool,
    pub witness: Option<Vec<usize>>,
    /// Odd components of `G - X` for the witness.
    pub odd_components: Option<usize>,
}

/// Checks `odd(G - X) <= #X` for all `X`, in increasing bitmask order;
/// the reported witness is the smallest violating mask.
pub fn tutte_check(graph: &Graph, caps: &Caps) -> Result<TutteReport> {
    let masks = AdjMasks::new(graph, caps.exhaustive, "Tutte subset enumeration")?;
    let violating = (0..1u64 << graph.n())
        .into_par_iter()
        .find_first(|&x| masks.odd_components(x) > x.count_ones() as usize);
    Ok(match violating {
        None => TutteReport {
            holds: true,
            witness: None,
            odd_components: None,
        },
        Some(x) => TutteReport {
            holds: false,
            witness: Some(bits(x)),
            odd_components: Some(masks.odd_components(x)),
        },
    })
}

/// Berge's formula `B_G = (min_X (#X - odd(G - X)) + #V) / 2`, evaluated by
/// enumerating every `X`.
pub fn berge_number(graph: &Graph, caps: &Caps) -> Result<usize> {
    let masks = AdjMasks::new(graph, caps.exhaustive, "Berge subset enumeration")?;
    let deficiency = (0..1u64 << graph.n())
        .into_par_iter()
        .map(|x| x.count_ones() as i64 - masks.odd_components(x) as i64)
        .min()
        .unwrap_or(0);
    Ok(((deficiency + graph.n() as i64) / 2) as usize)
}

/// Maximum-cardinality matching. Bipartite graphs take the augmenting-path
/// route; anything else goes through a capped branch-and-bound search.
pub fn max_general_matching(graph: &Graph, caps: &Caps) -> Result<Matching> {
    if let Some(labeling) = graph.two_color() {
        return Ok(max_bipartite_matching(graph, &labeling));
    }
    if graph.n() > caps.exhaustive {
        return Err(Error::CapExceeded {
            engine: "general matching search",
            n: graph.n(),
            cap: caps.exhaustive,
        });
    }
    Ok(branch_and_bound_matching(graph))
}

pub(crate) fn branch_and_bound_matching(graph: &Graph) -> Matching {
    struct Search<'a> {
        graph: &'a Graph,
        decided: Vec<bool>,
        current: Vec<(usize, usize)>,
        best: Vec<(usize, usize)>,
    }

    impl Search<'_> {
        fn run(&mut self, from: usize, undecided: usize) {
            if self.current.len() > self.best.len() {
                self.best = self.current.clone();
            }
            if self.current.len() + undecided / 2 <= self.best.len() {
                return;
            }
            let Some(v) = (from..self.graph.n()).find(|&v| !self.decided[v]) else {
                return;
            };
            self.decided[v] = true;
            for &w in self.graph.neighbors(v) {
                if self.decided[w] {
                    continue;
                }
                self.decided[w] = true;
                self.current.push((v, w));
                self.run(v + 1, undecided - 2);
                self.current.pop();
                self.decided[w] = false;
            }
            self.run(v + 1, undecided - 1);
            self.decided[v] = false;
        }
    }

    let mut search = Search {
        graph,
        decided: vec![false; graph.n()],
        current: Vec::new(),
        best: Vec::new(),
    };
    search.run(0, graph.n());
    Matching::from_pairs(search.best)
}

/// Fewest fixed points of a dyadic graph permutation: `#V - 2 B_G`.
pub fn min_fixed_points_dyadic(graph: &Graph, caps: &Caps) -> Result<usize> {
    Ok(graph.n() - 2 * max_general_matching(graph, caps)?.len())
}

/// Adjacency bitmasks for subset enumeration over at most 63 vertices.
struct AdjMasks {
    adj: Vec<u64>,
    full: u64,
}

impl AdjMasks {
    fn new(graph: &Graph, cap: usize, engine: &'static str) -> Result<Self> {
        let n = graph.n();
        if n > cap || n > 63 {
            return Err(Error::CapExceeded {
                engine,
                n,
                cap: cap.min(63),
            });
        }
        let adj = (0..n)
            .map(|v| graph.neighbors(v).iter().fold(0u64, |m, &w| m | 1 << w))
            .collect();
        Ok(AdjMasks {
            adj,
            full: if n == 0 { 0 } else { u64::MAX >> (64 - n) },
        })
    }

    /// Number of odd-order components of the graph with `removed` deleted.
    fn odd_components(&self, removed: u64) -> usize {
        let mut rest = self.full & !removed;
        let mut odd = 0;
        while rest != 0 {
            let mut comp = rest & rest.wrapping_neg();
            let mut frontier = comp;
            while frontier != 0 {
                let mut grow = 0;
                let mut f = frontier;
                while f != 0 {
                    grow |= self.adj[f.trailing_zeros() as usize];
                    f &= f - 1;
                }
                frontier = grow & rest & !comp;
                comp |= frontier;
            }
            odd += (comp.count_ones() % 2) as usize;
            rest &= !comp;
        }
        odd
    }
}

fn bits(mut x: u64) -> Vec<usize> {
    let mut out = Vec::new();
    while x != 0 {
        out.push(x.trailing_zeros() as usize);
        x &= x - 1;
    }
    out
}

/// True when `set` violates Hall's inequality in `graph`.
pub fn violates_hall(graph: &Graph, set: &[usize]) -> bool {
    let Ok(x) = VertexSet::from_vertices(graph.n(), set.iter().copied()) else {
        return false;
    };
    x.len() > graph.neighborhood(&x).len()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::permutation::{validate, Classification};

    fn rect(m: usize, n: usize) -> Graph {
        Graph::checkerboard(&[m, n]).unwrap()
    }

    fn star3() -> Graph {
        Graph::new(4, &[(0, 1), (0, 2), (0, 3)]).unwrap()
    }

    fn path3() -> Graph {
        Graph::new(3, &[(0, 1), (1, 2)]).unwrap()
    }

    #[test]
    fn hall_examples() {
        let caps = Caps::default();
        let r = hall_check(&rect(5, 5), HallMethod::MatchingDeficiency, &caps).unwrap();
        assert!(!r.holds);
        assert!(violates_hall(&rect(5, 5), r.witness.as_ref().unwrap()));
        let big = Caps { hall_subsets: 25, ..caps };
        let r = hall_check(&rect(5, 5), HallMethod::BruteIndependent, &big).unwrap();
        let w = r.witness.unwrap();
        assert!(violates_hall(&rect(5, 5), &w));
        assert!(rect(5, 5).is_independent(&VertexSet::from_vertices(25, w).unwrap()));
        assert!(matches!(
            hall_check(&rect(5, 5), HallMethod::BruteIndependent, &caps),
            Err(Error::CapExceeded { cap: 24, .. })
        ));

        let c4 = Graph::cycle(4).unwrap();
        for m in [HallMethod::BruteIndependent, HallMethod::MatchingDeficiency] {
            assert!(hall_check(&c4, m, &caps).unwrap().holds);
            let r = hall_check(&rect(3, 3), m, &caps).unwrap();
            assert!(!r.holds && violates_hall(&rect(3, 3), r.witness.as_ref().unwrap()));
        }
        // the checkerboard parity set: all five majority cells
        let r = hall_check(&rect(3, 3), HallMethod::BruteIndependent, &caps).unwrap();
        assert_eq!(r.witness.unwrap(), vec![0, 2, 4, 6, 8]);
    }

    #[test]
    fn bipartite_matchings() {
        let k33 = Graph::new(6, &[(0, 3), (0, 4), (0, 5), (1, 3), (1, 4), (1, 5), (2, 3), (2, 4), (2, 5)]).unwrap();
        let lab = k33.two_color().unwrap();
        assert_eq!(max_bipartite_matching(&k33, &lab).len(), 3);
        let s = star3();
        assert_eq!(max_bipartite_matching(&s, &s.two_color().unwrap()).len(), 1);
        let d = rect(5, 5).bipartite_double();
        // 24 edges saturating 48 of the 50 vertices
        let m = max_bipartite_matching(&d.graph, &d.labeling());
        assert_eq!((m.len(), 2 * m.len()), (24, 48));
    }

    #[test]
    fn semiderangements() {
        let g = rect(5, 5);
        let lab = g.two_color().unwrap();
        assert_eq!(lab.class(1).len(), 12);
        assert!(find_semiderangement(&g, &lab, 1).is_some());
        assert!(find_semiderangement(&g, &lab, 0).is_none());
        let k2 = Graph::complete(2).unwrap();
        let lab = k2.two_color().unwrap();
        assert!(find_semiderangement(&k2, &lab, 0).is_some());
        assert!(find_semiderangement(&k2, &lab, 1).is_some());
    }

    #[test]
    fn merge_on_k2_and_c4() {
        let k2 = Graph::complete(2).unwrap();
        let lab = k2.two_color().unwrap();
        let a = find_semiderangement(&k2, &lab, 0).unwrap();
        let b = find_semiderangement(&k2, &lab, 1).unwrap();
        assert_eq!(merge_semiderangements(&k2, &lab, &a, &b).unwrap().edges(), &[(0, 1)]);

        // C_4 as 0-1-2-3-0: side 0 = {0, 2}, side 1 = {1, 3}
        let c4 = Graph::cycle(4).unwrap();
        let lab = c4.two_color().unwrap();
        let fwd = Semiderangement { from_side: 0, map: vec![(0, 1), (2, 3)] };
        let bwd = Semiderangement { from_side: 1, map: vec![(1, 0), (3, 2)] };
        let alt = Semiderangement { from_side: 1, map: vec![(1, 2), (3, 0)] };
        for back in [&bwd, &alt] {
            let m = merge_semiderangements(&c4, &lab, &fwd, back).unwrap();
            assert_eq!(m.edges(), &[(0, 1), (2, 3)]);
            assert!(m.is_perfect(4));
        }
        let bad = Semiderangement { from_side: 1, map: vec![(1, 0), (3, 0)] };
        assert!(merge_semiderangements(&c4, &lab, &fwd, &bad).is_err());
        assert!(merge_semiderangements(&c4, &lab, &fwd, &fwd).is_err());
    }

    #[test]
    fn derangement_examples() {
        assert!(find_derangement(&rect(5, 5)).is_none());
        assert!(find_derangement(&rect(3, 3)).is_none());
        for g in [rect(2, 3), Graph::checkerboard(&[3, 3, 2]).unwrap(), Graph::moebius(3, 3).unwrap(), Graph::cycle(5).unwrap()] {
            let p = find_derangement(&g).unwrap();
            assert_eq!(validate(&g, p.succ()), Classification::Derangement);
            if g.two_color().is_some() {
                assert!(p.is_dyadic());
            }
        }
    }

    #[test]
    fn tutte_examples() {
        let caps = Caps::default();
        let r = tutte_check(&star3(), &caps).unwrap();
        assert_eq!((r.holds, r.witness, r.odd_components), (false, Some(vec![0]), Some(3)));
        assert!(tutte_check(&rect(2, 2), &caps).unwrap().holds);
        let r = tutte_check(&Graph::cycle(5).unwrap(), &caps).unwrap();
        assert_eq!(r.witness, Some(vec![]));
        assert!(tutte_check(&rect(5, 5), &caps).is_err());
    }

    #[test]
    fn matching_numbers() {
        let caps = Caps::default();
        assert_eq!(max_general_matching(&Graph::cycle(3).unwrap(), &caps).unwrap().len(), 1);
        assert_eq!(max_general_matching(&path3(), &caps).unwrap().len(), 1);
        assert_eq!(max_general_matching(&rect(3, 3), &caps).unwrap().len(), 4);
        assert_eq!(branch_and_bound_matching(&rect(3, 3)).len(), 4);
        assert_eq!(berge_number(&path3(), &caps).unwrap(), 1);
        assert_eq!(berge_number(&rect(2, 2), &caps).unwrap(), 2);
        assert_eq!(berge_number(&rect(3, 3), &caps).unwrap(), 4);
        assert_eq!(min_fixed_points_dyadic(&rect(3, 3), &caps).unwrap(), 1);
        assert_eq!(min_fixed_points_dyadic(&rect(5, 5), &caps).unwrap(), 1);
        assert_eq!(min_fixed_points_dyadic(&rect(2, 4), &caps).unwrap(), 0);
        assert!(max_general_matching(&Graph::complete(21).unwrap(), &caps).is_err());
    }
}
