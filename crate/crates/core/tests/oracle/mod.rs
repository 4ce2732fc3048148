//! Slow, obviously-correct reference implementations used to check the
//! library. Nothing here shares code with the crate under test beyond the
//! `Graph` adjacency accessors.
#![allow(dead_code)]

use std::collections::BTreeSet;

use derange::Graph;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Every derangement of `g` (f(v) adjacent to v, f injective), by
/// backtracking over all injections.
pub fn all_derangements(g: &Graph) -> Vec<Vec<usize>> {
    fn go(g: &Graph, v: usize, used: &mut [bool], f: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if v == g.n() {
            out.push(f.clone());
            return;
        }
        for &w in g.neighbors(v) {
            if !used[w] {
                used[w] = true;
                f.push(w);
                go(g, v + 1, used, f, out);
                f.pop();
                used[w] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(g, 0, &mut vec![false; g.n()], &mut Vec::new(), &mut out);
    out
}

pub fn cycle_type_of(f: &[usize]) -> Vec<usize> {
    let mut seen = vec![false; f.len()];
    let mut parts = Vec::new();
    for s in 0..f.len() {
        let mut len = 0;
        let mut v = s;
        while !seen[v] {
            seen[v] = true;
            v = f[v];
            len += 1;
        }
        if len > 0 {
            parts.push(len);
        }
    }
    parts.sort_unstable_by(|a, b| b.cmp(a));
    parts
}

/// Cycle types (non-increasing part lists) of all derangements of `g`.
pub fn realizable_types(g: &Graph) -> BTreeSet<Vec<usize>> {
    all_derangements(g).iter().map(|f| cycle_type_of(f)).collect()
}

/// Hall's condition over every nonempty subset, independent or not.
pub fn hall_all_subsets(g: &Graph) -> bool {
    let n = g.n();
    assert!(n <= 20);
    (1u32..1 << n).all(|mask| {
        let mut nb = 0u32;
        for v in 0..n {
            if mask >> v & 1 == 1 {
                for &w in g.neighbors(v) {
                    nb |= 1 << w;
                }
            }
        }
        nb.count_ones() >= mask.count_ones()
    })
}

/// Maximum matching size by trying every edge choice for the lowest
/// unmatched vertex.
pub fn max_matching_size(g: &Graph) -> usize {
    fn go(g: &Graph, matched: &mut [bool], from: usize) -> usize {
        let Some(v) = (from..g.n()).find(|&v| !matched[v]) else {
            return 0;
        };
        matched[v] = true;
        let mut best = go(g, matched, v + 1);
        for &w in g.neighbors(v) {
            if !matched[w] {
                matched[w] = true;
                best = best.max(1 + go(g, matched, v + 1));
                matched[w] = false;
            }
        }
        matched[v] = false;
        best
    }
    go(g, &mut vec![false; g.n()], 0)
}

/// p(n) from Euler's pentagonal number recurrence.
pub fn partition_count(n: usize) -> u64 {
    let mut p = vec![0i64; n + 1];
    p[0] = 1;
    for i in 1..=n {
        let mut k = 1i64;
        loop {
            let g1 = (k * (3 * k - 1) / 2) as usize;
            if g1 > i {
                break;
            }
            let sign = if k % 2 == 1 { 1 } else { -1 };
            p[i] += sign * p[i - g1];
            let g2 = (k * (3 * k + 1) / 2) as usize;
            if g2 <= i {
                p[i] += sign * p[i - g2];
            }
            k += 1;
        }
    }
    p[n] as u64
}

/// Vertex sets (as bitmasks) that carry a simple cycle of length `len`.
pub fn cycle_vertex_sets(g: &Graph, len: usize) -> BTreeSet<u64> {
    assert!(g.n() <= 64);
    let mut out = BTreeSet::new();
    if len == 2 {
        for (u, v) in g.edges() {
            out.insert(1 << u | 1 << v);
        }
        return out;
    }
    fn go(g: &Graph, start: usize, v: usize, len: usize, depth: usize, mask: u64, out: &mut BTreeSet<u64>) {
        if depth == len {
            if g.has_edge(v, start) {
                out.insert(mask);
            }
            return;
        }
        for &w in g.neighbors(v) {
            if w > start && mask >> w & 1 == 0 {
                go(g, start, w, len, depth + 1, mask | 1 << w, out);
            }
        }
    }
    for s in 0..g.n() {
        go(g, s, s, len, 1, 1 << s, &mut out);
    }
    out
}

/// Whether the vertices of `g` split into disjoint cycles with exactly the
/// given lengths (each at least 2), by exact cover over cycle vertex sets.
pub fn covered_by_cycles(g: &Graph, parts: &[usize]) -> bool {
    assert_eq!(parts.iter().sum::<usize>(), g.n());
    let mut lengths: Vec<usize> = parts.to_vec();
    lengths.sort_unstable();
    lengths.dedup();
    let sets: Vec<(usize, Vec<u64>)> = lengths
        .iter()
        .map(|&l| (l, cycle_vertex_sets(g, l).into_iter().collect()))
        .collect();
    let mut remaining: Vec<usize> = lengths.iter().map(|&l| parts.iter().filter(|&&p| p == l).count()).collect();
    let full = if g.n() == 64 { u64::MAX } else { (1u64 << g.n()) - 1 };

    fn go(covered: u64, full: u64, sets: &[(usize, Vec<u64>)], remaining: &mut [usize]) -> bool {
        if covered == full {
            return remaining.iter().all(|&r| r == 0);
        }
        let low = (!covered).trailing_zeros();
        for i in 0..sets.len() {
            if remaining[i] == 0 {
                continue;
            }
            for &s in &sets[i].1 {
                if s >> low & 1 == 1 && s & covered == 0 {
                    remaining[i] -= 1;
                    let ok = go(covered | s, full, sets, remaining);
                    remaining[i] += 1;
                    if ok {
                        return true;
                    }
                }
            }
        }
        false
    }
    go(0, full, &sets, &mut remaining)
}

/// Erdos-Renyi graph G(n, p) from a fixed seed.
pub fn random_graph(seed: u64, n: usize, p: f64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    Graph::new(n, &edges).unwrap()
}

/// Rect, Moebius and torus graphs with at most `max_n` vertices (and at
/// least two vertices per dimension for the wrapped families).
pub fn grid_family(max_n: usize) -> Vec<Graph> {
    let mut out = Vec::new();
    for m in 1..=max_n {
        for n in 1..=max_n / m {
            out.push(Graph::checkerboard(&[m, n]).unwrap());
            if m >= 2 {
                out.push(Graph::moebius(m, n).unwrap());
            }
            if m >= 2 && n >= 2 {
                out.push(Graph::torus(m, n).unwrap());
            }
        }
    }
    out
}
