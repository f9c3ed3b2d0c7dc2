//! The space of nonempty convex subsets of a median graph.
//!
//! Distances follow `d(C1, C2) = 2·#H(C1 ∪ C2) − #H(C1) − #H(C2)`, where
//! `H(S)` is the set of walls crossing the hull of `S`. On singletons this is
//! twice the graph metric: `d({x}, {y}) = 2·d(x, y)`.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::hash::{Hash, Hasher};

use serde::{Serialize, Serializer};

use crate::bitset::{VertexSet, WallSet};
use crate::error::{Error, Result};
use crate::median::MedianGraph;
use crate::Vertex;

/// Default vertex bound for exhaustive enumeration of convex sets.
pub const DEFAULT_ENUMERATION_BOUND: usize = 12;

/// A nonempty interval-closed vertex set of a fixed median graph, with its
/// crossing walls `H(C)` cached.
#[derive(Debug, Clone)]
pub struct ConvexSet {
    ambient: u64,
    members: VertexSet,
    crossing: WallSet,
}

impl ConvexSet {
    pub(crate) fn new_unchecked(g: &MedianGraph, members: VertexSet) -> ConvexSet {
        debug_assert!(!members.is_empty());
        let crossing = g.crossing(&members);
        ConvexSet {
            ambient: g.id(),
            members,
            crossing,
        }
    }

    pub fn ambient(&self) -> u64 {
        self.ambient
    }

    pub fn members(&self) -> &VertexSet {
        &self.members
    }

    /// `H(C)`.
    pub fn crossing(&self) -> &WallSet {
        &self.crossing
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.members.contains(v)
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn to_vec(&self) -> Vec<Vertex> {
        self.members.to_vec()
    }
}

impl PartialEq for ConvexSet {
    fn eq(&self, other: &Self) -> bool {
        self.ambient == other.ambient && self.members == other.members
    }
}

impl Eq for ConvexSet {}

impl Hash for ConvexSet {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.ambient.hash(state);
        self.members.hash(state);
    }
}

impl Ord for ConvexSet {
    fn cmp(&self, other: &Self) -> Ordering {
        self.ambient
            .cmp(&other.ambient)
            .then_with(|| self.members.cmp(&other.members))
    }
}

impl PartialOrd for ConvexSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Serialize for ConvexSet {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.members.serialize(s)
    }
}

impl MedianGraph {
    fn same_ambient(&self, sets: &[&ConvexSet]) -> Result<()> {
        sets.iter().try_for_each(|c| self.check_ambient(c))
    }

    /// `2·#H(C1 ∪ C2) − #H(C1) − #H(C2)`.
    pub fn convex_distance(&self, c1: &ConvexSet, c2: &ConvexSet) -> Result<u64> {
        self.same_ambient(&[c1, c2])?;
        Ok(self.convex_distance_unchecked(c1, c2))
    }

    pub(crate) fn convex_distance_unchecked(&self, c1: &ConvexSet, c2: &ConvexSet) -> u64 {
        let joint = self.crossing_count(&c1.members.union(&c2.members)) as u64;
        2 * joint - c1.crossing.len() as u64 - c2.crossing.len() as u64
    }

    /// Interval membership `C ∈ I(C1, C2)` through the three wall
    /// conditions:
    /// (i) `C ⊆ hull(C1 ∪ C2)`;
    /// (ii) every wall crossing both `C1` and `C2` crosses `C`;
    /// (iii) no wall crossing `C1` separates `C` from `C2`, and symmetrically.
    pub fn convex_interval_contains(
        &self,
        c: &ConvexSet,
        c1: &ConvexSet,
        c2: &ConvexSet,
    ) -> Result<bool> {
        self.same_ambient(&[c, c1, c2])?;
        let hull = self.hull_of(&c1.members.union(&c2.members));
        if !c.members.is_subset(&hull) {
            return Ok(false);
        }
        let both = c1.crossing.intersection(&c2.crossing);
        if !both.is_subset(&c.crossing) {
            return Ok(false);
        }
        let walls = self.walls();
        let separated = |crossing: &WallSet, other: &ConvexSet| {
            crossing
                .iter()
                .any(|w| walls[w].separates_sets(&c.members, &other.members))
        };
        Ok(!separated(&c1.crossing, c2) && !separated(&c2.crossing, c1))
    }

    /// The median `hull(C1∪C2) ∩ hull(C2∪C3) ∩ hull(C1∪C3)`.
    pub fn convex_median(
        &self,
        c1: &ConvexSet,
        c2: &ConvexSet,
        c3: &ConvexSet,
    ) -> Result<ConvexSet> {
        self.same_ambient(&[c1, c2, c3])?;
        let mut m = self.hull_of(&c1.members.union(&c2.members));
        m.intersect_with(&self.hull_of(&c2.members.union(&c3.members)));
        m.intersect_with(&self.hull_of(&c1.members.union(&c3.members)));
        // m(x1, x2, x3) lies in all three hulls for any choice of xi ∈ Ci.
        let witness = self.median(
            c1.members.first().unwrap(),
            c2.members.first().unwrap(),
            c3.members.first().unwrap(),
        );
        assert!(
            m.contains(witness),
            "median of representatives missing from hull intersection"
        );
        Ok(ConvexSet::new_unchecked(self, m))
    }

    /// `C1 ∩ C2` when nonempty; the result is convex.
    pub fn convex_intersection(&self, c1: &ConvexSet, c2: &ConvexSet) -> Result<Option<ConvexSet>> {
        self.same_ambient(&[c1, c2])?;
        let m = c1.members.intersection(&c2.members);
        Ok((!m.is_empty()).then(|| ConvexSet::new_unchecked(self, m)))
    }

    /// Every nonempty convex set, in canonical order (size, then members).
    ///
    /// Generated by closing the singletons under `C ↦ hull(C ∪ {v})` for `v`
    /// adjacent to `C`; every convex set is reached this way because convex
    /// subsets of a connected graph are connected.
    pub fn enumerate_convex(&self, max_vertices: usize) -> Result<Vec<ConvexSet>> {
        let n = self.vertex_count();
        if n > max_vertices {
            return Err(Error::TooLarge {
                what: "graph for convex enumeration",
                size: n as u128,
                bound: max_vertices as u128,
            });
        }
        let mut seen: BTreeSet<VertexSet> = self
            .vertices()
            .map(|v| VertexSet::singleton(n, v))
            .collect();
        let mut frontier: Vec<VertexSet> = seen.iter().cloned().collect();
        while let Some(c) = frontier.pop() {
            let mut boundary = self.empty_set();
            for v in c.iter() {
                for &w in self.neighbors(v) {
                    if !c.contains(w) {
                        boundary.insert(w);
                    }
                }
            }
            for w in boundary.iter() {
                let mut grown = c.clone();
                grown.insert(w);
                let hull = self.hull_of(&grown);
                if seen.insert(hull.clone()) {
                    frontier.push(hull);
                }
            }
        }
        Ok(seen
            .into_iter()
            .map(|s| ConvexSet::new_unchecked(self, s))
            .collect())
    }

    /// The median hull of `f`: the fixpoint of `F ↦ {m(x, y, z) : x, y, z ∈ F}`.
    ///
    /// Not convex in general; its convex hull equals the convex hull of `f`.
    pub fn median_hull(&self, f: &VertexSet) -> VertexSet {
        let mut current = f.clone();
        loop {
            let members = current.to_vec();
            let mut next = current.clone();
            for (i, &x) in members.iter().enumerate() {
                for (j, &y) in members.iter().enumerate().skip(i + 1) {
                    for &z in &members[j + 1..] {
                        next.insert(self.median(x, y, z));
                    }
                }
            }
            if next == current {
                return current;
            }
            current = next;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs;

    fn mg(g: crate::median::Graph) -> MedianGraph {
        MedianGraph::verify(&g).unwrap()
    }

    #[test]
    fn distance_examples() {
        let k2 = mg(graphs::path(2));
        let a = k2.convex_set_of(&[0]).unwrap();
        let b = k2.convex_set_of(&[1]).unwrap();
        let ab = k2.whole();
        assert_eq!(k2.convex_distance(&a, &a).unwrap(), 0);
        assert_eq!(k2.convex_distance(&a, &b).unwrap(), 2);
        assert_eq!(k2.convex_distance(&a, &ab).unwrap(), 1);
    }

    #[test]
    fn interval_examples() {
        let k2 = mg(graphs::path(2));
        let a = k2.convex_set_of(&[0]).unwrap();
        let b = k2.convex_set_of(&[1]).unwrap();
        let ab = k2.whole();
        assert!(k2.convex_interval_contains(&a, &a, &b).unwrap());
        assert!(k2.convex_interval_contains(&ab, &a, &b).unwrap());
        let p3 = mg(graphs::path(3));
        let z = p3.convex_set_of(&[0]).unwrap();
        let one = p3.convex_set_of(&[1]).unwrap();
        assert!(!p3.convex_interval_contains(&one, &z, &z).unwrap());
    }

    #[test]
    fn median_examples() {
        let k2 = mg(graphs::path(2));
        let a = k2.convex_set_of(&[0]).unwrap();
        let b = k2.convex_set_of(&[1]).unwrap();
        let ab = k2.whole();
        assert_eq!(k2.convex_median(&a, &a, &a).unwrap(), a);
        assert_eq!(k2.convex_median(&a, &b, &ab).unwrap(), ab);
        let p3 = mg(graphs::path(3));
        let s = |v| p3.convex_set_of(&[v]).unwrap();
        assert_eq!(
            p3.convex_median(&s(0), &s(2), &s(1)).unwrap().to_vec(),
            vec![1]
        );
    }

    #[test]
    fn enumeration_examples() {
        let lists = |g: &MedianGraph| -> Vec<Vec<usize>> {
            g.enumerate_convex(12)
                .unwrap()
                .iter()
                .map(ConvexSet::to_vec)
                .collect()
        };
        assert_eq!(
            lists(&mg(graphs::path(2))),
            vec![vec![0], vec![1], vec![0, 1]]
        );
        assert_eq!(
            lists(&mg(graphs::path(3))),
            vec![
                vec![0],
                vec![1],
                vec![2],
                vec![0, 1],
                vec![1, 2],
                vec![0, 1, 2]
            ]
        );
        // 4 singletons, 4 edges and the whole square.
        assert_eq!(lists(&mg(graphs::cycle(4))).len(), 9);
        let big = mg(graphs::path(13));
        assert!(matches!(
            big.enumerate_convex(12),
            Err(Error::TooLarge { .. })
        ));
    }

    #[test]
    fn median_hull_of_opposite_corners_is_not_convex() {
        let c4 = mg(graphs::cycle(4));
        let f = VertexSet::from_iter_in(4, [0, 2]);
        assert_eq!(c4.median_hull(&f), f);
        assert_eq!(c4.hull_of(&f).len(), 4);
    }

    #[test]
    fn mismatched_ambient_is_an_error() {
        let a = mg(graphs::path(2));
        let b = mg(graphs::path(2));
        assert_eq!(
            a.convex_distance(&a.whole(), &b.whole()).unwrap_err(),
            Error::AmbientMismatch
        );
    }
}
