//! Randomised properties over generated median graphs, wreaths and grid
//! wreaths.

use std::collections::{BTreeMap, VecDeque};

use mwreath::lamplighter::{elementary_moves, grid_action, grid_delta, tc};
use mwreath::{
    graphs, Graph, GridConfig, GridElement, GridWreath, MedianGraph, Rectangle, VertexSet, Wreath,
    WreathSpace,
};
use proptest::prelude::*;

/// Trees, grids and hypercubes: all median.
fn median_graph() -> impl Strategy<Value = Graph> {
    prop_oneof![
        (1usize..12)
            .prop_flat_map(|n| {
                (0..n)
                    .map(|i| {
                        if i == 0 {
                            Just(0).boxed()
                        } else {
                            (0..i).boxed()
                        }
                    })
                    .collect::<Vec<_>>()
            })
            .prop_map(|p| graphs::tree_from_parents(&p[1..])),
        (1usize..5, 1usize..4).prop_map(|(w, h)| graphs::grid(w, h)),
        (0u32..4).prop_map(graphs::hypercube),
    ]
}

fn bfs(g: &MedianGraph, s: usize) -> Vec<u32> {
    let mut d = vec![u32::MAX; g.vertex_count()];
    d[s] = 0;
    let mut q = VecDeque::from([s]);
    while let Some(u) = q.pop_front() {
        for &v in g.neighbors(u) {
            if d[v] == u32::MAX {
                d[v] = d[u] + 1;
                q.push_back(v);
            }
        }
    }
    d
}

fn subset(g: &MedianGraph, bits: u64) -> VertexSet {
    let n = g.vertex_count();
    let mask = if n >= 64 { bits } else { bits & ((1 << n) - 1) };
    VertexSet::from_mask(n, if mask == 0 { 1 } else { mask })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn walls_count_distance(g in median_graph(), a in any::<usize>(), b in any::<usize>()) {
        let g = MedianGraph::verify(&g).unwrap();
        let (u, v) = (a % g.vertex_count(), b % g.vertex_count());
        prop_assert_eq!(g.walls_separating(u, v).len() as u32, bfs(&g, u)[v]);
    }

    #[test]
    fn hull_is_least_convex_superset(g in median_graph(), bits in any::<u64>(), extra in any::<usize>()) {
        let g = MedianGraph::verify(&g).unwrap();
        let s = subset(&g, bits);
        let h = g.hull_of(&s);
        prop_assert!(s.is_subset(&h));
        prop_assert!(g.is_convex(&h));
        prop_assert_eq!(g.hull_of(&h), h.clone());
        let mut bigger = s.clone();
        bigger.insert(extra % g.vertex_count());
        prop_assert!(h.is_subset(&g.hull_of(&bigger)));
        let m = g.median_hull(&s);
        prop_assert!(m.is_subset(&h));
        prop_assert_eq!(g.hull_of(&m), h);
    }

    #[test]
    fn gate_splits_distances(g in median_graph(), bits in any::<u64>(), x in any::<usize>()) {
        let g = MedianGraph::verify(&g).unwrap();
        let c = g.convex_hull(&subset(&g, bits)).unwrap();
        let x = x % g.vertex_count();
        let p = g.gate(&c, x).unwrap();
        prop_assert!(c.contains(p));
        for w in c.to_vec() {
            prop_assert_eq!(g.distance(x, w), g.distance(x, p) + g.distance(p, w));
        }
    }

    #[test]
    fn family_distance_is_a_metric_with_unique_medians(
        g in median_graph(), a in any::<u64>(), b in any::<u64>(), c in any::<u64>()
    ) {
        let g = MedianGraph::verify(&g).unwrap();
        let [c1, c2, c3] = [a, b, c].map(|bits| g.convex_hull(&subset(&g, bits)).unwrap());
        let d = |p: &_, q: &_| g.convex_distance(p, q).unwrap();
        prop_assert_eq!(d(&c1, &c2), d(&c2, &c1));
        prop_assert_eq!(d(&c1, &c2) == 0, c1 == c2);
        prop_assert!(d(&c1, &c3) <= d(&c1, &c2) + d(&c2, &c3));
        let m = g.convex_median(&c1, &c2, &c3).unwrap();
        for (p, q) in [(&c1, &c2), (&c2, &c3), (&c1, &c3)] {
            prop_assert_eq!(d(p, &m) + d(&m, q), d(p, q));
            prop_assert!(g.convex_interval_contains(&m, p, q).unwrap());
        }
    }

    #[test]
    fn singletons_embed_with_factor_two(g in median_graph(), a in any::<usize>(), b in any::<usize>()) {
        let g = MedianGraph::verify(&g).unwrap();
        let (x, y) = (a % g.vertex_count(), b % g.vertex_count());
        prop_assert_eq!(g.convex_distance(&g.singleton(x), &g.singleton(y)).unwrap(), 2 * g.distance(x, y) as u64);
    }
}

fn space() -> WreathSpace {
    let x = MedianGraph::verify(&graphs::path(3)).unwrap();
    let y = MedianGraph::verify(&graphs::grid(2, 2)).unwrap();
    WreathSpace::new(x, y, 0, 0).unwrap()
}

fn wreath() -> impl Strategy<Value = (Vec<usize>, Vec<usize>)> {
    (
        proptest::collection::vec(0usize..4, 1..3),
        proptest::collection::vec(0usize..3, 4),
    )
}

fn build(s: &WreathSpace, (base, lamps): &(Vec<usize>, Vec<usize>)) -> Wreath {
    let hull = s.base_graph().convex_hull_of(base).unwrap();
    s.wreath(&hull.to_vec(), lamps.iter().copied().enumerate())
        .unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn wreath_metric_and_median(a in wreath(), b in wreath(), c in wreath()) {
        let s = space();
        let (a, b, c) = (build(&s, &a), build(&s, &b), build(&s, &c));
        let d = |p: &Wreath, q: &Wreath| s.delta(p, q).unwrap();
        prop_assert_eq!(d(&a, &b), d(&b, &a));
        prop_assert_eq!(d(&a, &b) == 0, a == b);
        prop_assert!(d(&a, &c) <= d(&a, &b) + d(&b, &c));
        let m = s.wreath_median(&a, &b, &c).unwrap();
        for (p, q) in [(&a, &b), (&b, &c), (&a, &c)] {
            prop_assert_eq!(d(p, &m) + d(&m, q), d(p, q));
        }
    }

    #[test]
    fn neighbours_are_at_distance_one(a in wreath()) {
        let s = space();
        let w = build(&s, &a);
        let ns = s.neighbors(&w, usize::MAX).unwrap();
        prop_assert!(!ns.is_empty());
        for v in ns {
            prop_assert_eq!(s.delta(&w, &v).unwrap(), 1);
        }
    }

    #[test]
    fn projection_lies_in_leaf_and_is_nearest(a in wreath(), lamps in proptest::collection::vec(0usize..3, 4)) {
        let s = space();
        let w = build(&s, &a);
        let leaf = mwreath::Labelling::from_pairs(0, lamps.iter().copied().enumerate());
        let p = s.leaf_projection(&leaf, &w).unwrap();
        prop_assert_eq!(&p.lamps, &leaf);
        for base in [vec![0], vec![3], vec![0, 1], vec![0, 1, 2, 3]] {
            let z = s.wreath(&base, lamps.iter().copied().enumerate()).unwrap();
            prop_assert_eq!(s.delta(&w, &z).unwrap(), s.delta(&w, &p).unwrap() + s.delta(&p, &z).unwrap());
        }
    }

    #[test]
    fn literal_round_trip(a in wreath()) {
        let s = space();
        let w = build(&s, &a);
        let text = serde_json::to_string(&s.literal(&w)).unwrap();
        prop_assert_eq!(s.parse(&serde_json::from_str(&text).unwrap()).unwrap(), w);
    }
}

fn config() -> impl Strategy<Value = GridConfig> {
    proptest::collection::btree_map((-3i64..=3, -3i64..=3), -2i64..=2, 0..4)
        .prop_map(|m: BTreeMap<(i64, i64), i64>| GridConfig::from_pairs(m))
}

fn rectangle() -> impl Strategy<Value = Rectangle> {
    (-3i64..=3, 0i64..3, -3i64..=3, 0i64..3)
        .prop_map(|(x, w, y, h)| Rectangle::spanning(x, x + w, y, y + h).unwrap())
}

fn grid_wreath() -> impl Strategy<Value = GridWreath> {
    (rectangle(), config()).prop_map(|(r, c)| GridWreath::new(r, c))
}

fn element() -> impl Strategy<Value = GridElement> {
    ((-3i64..=3, -3i64..=3), config()).prop_map(|(shift, lamps)| GridElement { shift, lamps })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn grid_delta_is_a_metric(a in grid_wreath(), b in grid_wreath(), c in grid_wreath()) {
        prop_assert_eq!(grid_delta(&a, &b), grid_delta(&b, &a));
        prop_assert_eq!(grid_delta(&a, &b) == 0, a == b);
        prop_assert!(grid_delta(&a, &c) <= grid_delta(&a, &b) + grid_delta(&b, &c));
    }

    #[test]
    fn elementary_moves_have_length_one(a in grid_wreath()) {
        for v in elementary_moves(&a) {
            prop_assert_eq!(grid_delta(&a, &v), 1);
        }
    }

    #[test]
    fn grid_action_is_an_isometric_action(e1 in element(), e2 in element(), a in grid_wreath(), b in grid_wreath()) {
        prop_assert_eq!(grid_action(&e1, &grid_action(&e2, &a)), grid_action(&e1.compose(&e2), &a));
        prop_assert_eq!(grid_action(&e1.inverse(), &grid_action(&e1, &a)), a.clone());
        prop_assert_eq!(grid_delta(&grid_action(&e1, &a), &grid_action(&e1, &b)), grid_delta(&a, &b));
    }

    #[test]
    fn sweep_count_is_symmetric_and_vanishes_inside(r1 in rectangle(), r2 in rectangle(), p in (-3i64..=3, -3i64..=3)) {
        prop_assert_eq!(tc(&r1, &[p], &r2), tc(&r2, &[p], &r1));
        let inside: Vec<_> = r1.interior().collect();
        prop_assert_eq!(tc(&r1, &inside, &r1), 0);
    }
}
