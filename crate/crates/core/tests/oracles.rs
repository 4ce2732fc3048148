mod oracle;

use std::collections::BTreeSet;

use derange::cycletypes::{classify_all, realize, Budget, Family, Mode};
use derange::existence::{
    berge_number, find_derangement, hall_check, max_general_matching, tutte_check, Caps, HallMethod,
};
use derange::permutation::GraphPermutation;
use derange::{enumerate_partitions, Graph, Partition, PartitionFilter};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn caps() -> Caps {
    Caps::default()
}

fn corpus() -> Vec<Graph> {
    let mut graphs: Vec<Graph> = (0..120)
        .map(|seed| {
            let n = 1 + (seed as usize % 12);
            let p = [0.15, 0.3, 0.5][seed as usize % 3];
            oracle::random_graph(seed, n, p)
        })
        .collect();
    graphs.extend(oracle::grid_family(16));
    graphs
}

#[test]
fn complete_graph_derangement_counts() {
    let counts: Vec<usize> = (1..=6)
        .map(|n| oracle::all_derangements(&Graph::complete(n).unwrap()).len())
        .collect();
    assert_eq!(counts, [0, 1, 2, 9, 44, 265]);
}

#[test]
fn even_partition_counts_follow_euler() {
    for n in 0..=30 {
        let even = enumerate_partitions(2 * n, PartitionFilter::Even).len() as u64;
        assert_eq!(even, oracle::partition_count(n), "2n = {}", 2 * n);
        let all = enumerate_partitions(n, PartitionFilter::All).len() as u64;
        assert_eq!(all, oracle::partition_count(n));
    }
    // parts >= 2 of n: p(n) - p(n - 1)
    for n in 1..=30 {
        let ge2 = enumerate_partitions(n, PartitionFilter::MinPart(2)).len() as u64;
        assert_eq!(ge2, oracle::partition_count(n) - oracle::partition_count(n - 1));
    }
}

#[test]
fn existence_agrees_with_hall_and_enumeration() {
    for g in corpus() {
        let found = find_derangement(&g);
        let brute = hall_check(&g, HallMethod::BruteIndependent, &caps()).unwrap();
        let deficiency = hall_check(&g, HallMethod::MatchingDeficiency, &caps()).unwrap();
        let all_subsets = oracle::hall_all_subsets(&g);
        assert_eq!(found.is_some(), brute.holds, "{:?}", g.label());
        assert_eq!(brute.holds, deficiency.holds);
        assert_eq!(brute.holds, all_subsets);
        if let Some(w) = &found {
            assert!(GraphPermutation::new(&g, w.succ().to_vec()).unwrap().is_derangement());
        }
        for report in [&brute, &deficiency] {
            if let Some(x) = &report.witness {
                assert!(derange::existence::violates_hall(&g, x));
                let set = derange::VertexSet::from_vertices(g.n(), x.iter().copied()).unwrap();
                assert!(g.is_independent(&set));
            }
        }
        if g.n() <= 10 {
            assert_eq!(found.is_some(), !oracle::all_derangements(&g).is_empty());
        }
    }
}

#[test]
fn matching_numbers_agree() {
    for g in corpus() {
        let m = max_general_matching(&g, &caps()).unwrap();
        let size = oracle::max_matching_size(&g);
        assert_eq!(m.len(), size, "{:?}", g.label());
        assert_eq!(berge_number(&g, &caps()).unwrap(), size);
        let tutte = tutte_check(&g, &caps()).unwrap();
        assert_eq!(tutte.holds, 2 * size == g.n(), "{:?}", g.label());
        if let Some(x) = tutte.witness {
            assert!(!tutte.holds);
            assert!(x.len() < tutte.odd_components.unwrap());
        }
    }
}

#[test]
fn realize_agrees_with_exhaustive_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut checked = 0;
    let mut seed = 1000;
    while checked < 60 {
        seed += 1;
        let n = rng.gen_range(3..=10);
        let g = oracle::random_graph(seed, n, rng.gen_range(0.3..0.8));
        let types = oracle::realizable_types(&g);
        for p in enumerate_partitions(n, PartitionFilter::MinPart(2)) {
            let r = realize(&g, &p, Mode::Derangement, Budget::default()).unwrap();
            assert!(!matches!(r.status, derange::cycletypes::Status::CapHit(_)));
            assert_eq!(r.is_realized(), types.contains(p.parts()), "seed {seed} {p}");
            if let Some(w) = r.witness() {
                assert_eq!(&w.cycle_type(), &p);
                GraphPermutation::new(&g, w.succ().to_vec()).unwrap();
            }
            if p.min_part().is_some_and(|m| m >= 3) {
                let r = realize(&g, &p, Mode::Matchless, Budget::default()).unwrap();
                assert_eq!(r.is_realized(), types.contains(p.parts()));
            }
        }
        checked += 1;
    }
}

fn types_of(g: &Graph) -> BTreeSet<Vec<usize>> {
    let table = classify_all(g, Family::AllGe2, Budget::default(), None).unwrap();
    assert_eq!(table.capped, 0);
    table
        .rows
        .iter()
        .filter(|r| r.status == derange::cycletypes::RowStatus::Realized)
        .map(|r| r.partition.parts().to_vec())
        .collect()
}

#[test]
fn classification_of_small_boards_matches_enumeration() {
    for spec in [[2, 3], [2, 4], [3, 4], [2, 5], [3, 3], [2, 6]] {
        let g = Graph::checkerboard(&spec).unwrap();
        assert_eq!(types_of(&g), oracle::realizable_types(&g), "{spec:?}");
    }
    for g in [
        Graph::moebius(3, 3).unwrap(),
        Graph::torus(3, 3).unwrap(),
        Graph::moebius(2, 5).unwrap(),
        Graph::complete(7).unwrap(),
    ] {
        assert_eq!(types_of(&g), oracle::realizable_types(&g), "{:?}", g.label());
    }
}

#[test]
fn board_exclusions_confirmed_by_exact_cover() {
    let cases: [(&[usize], &str); 5] = [
        (&[3, 4], "8+4"),
        (&[3, 4], "4+4+4"),
        (&[4, 4], "10+6"),
        (&[4, 4], "6+6+4"),
        (&[4, 5], "8+8+4"),
    ];
    for (dims, p) in cases {
        let g = Graph::checkerboard(dims).unwrap();
        let p: Partition = p.parse().unwrap();
        assert!(!oracle::covered_by_cycles(&g, p.parts()), "{dims:?} {p}");
        let r = realize(&g, &p, Mode::Derangement, Budget::default()).unwrap();
        assert!(r.is_unrealizable());
    }
    let g = Graph::checkerboard(&[4, 4]).unwrap();
    assert!(oracle::covered_by_cycles(&g, &[8, 8]));
    assert!(oracle::covered_by_cycles(&g, &[12, 4]));
}
