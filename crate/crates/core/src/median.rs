//! Median graphs: distances, intervals, medians, walls, convex hulls and gates.
//!
//! All metric quantities are exact integers. The wall structure is the
//! counting-measure wallspace of the graph: for every pair of vertices the
//! number of walls separating them equals their graph distance.

use std::collections::{HashMap, VecDeque};
use std::sync::atomic::{AtomicU64, Ordering};

use serde::{Deserialize, Serialize};

use crate::bitset::{VertexSet, WallSet};
use crate::convex::ConvexSet;
use crate::error::{Error, Result};
use crate::Vertex;

/// Raw graph input, as read from `{ "vertices": n, "edges": [[u, v], ...] }`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Graph {
    pub vertices: usize,
    pub edges: Vec<[Vertex; 2]>,
}

impl Graph {
    pub fn new(vertices: usize, edges: impl IntoIterator<Item = (Vertex, Vertex)>) -> Self {
        Graph {
            vertices,
            edges: edges.into_iter().map(|(u, v)| [u, v]).collect(),
        }
    }
}

/// One wall (hyperplane) of a median graph: a partition of the vertices into
/// two convex halfspaces.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Wall {
    side_a: VertexSet,
    side_b: VertexSet,
    /// The first edge (in sorted edge order) dual to this wall, oriented so
    /// that `edge.0` lies in `side_a`.
    edge: (Vertex, Vertex),
}

impl Wall {
    pub fn side_a(&self) -> &VertexSet {
        &self.side_a
    }

    pub fn side_b(&self) -> &VertexSet {
        &self.side_b
    }

    pub fn edge(&self) -> (Vertex, Vertex) {
        self.edge
    }

    #[inline]
    pub fn separates(&self, u: Vertex, v: Vertex) -> bool {
        self.side_a.contains(u) != self.side_a.contains(v)
    }

    /// True when `a` and `b` lie entirely in opposite halfspaces.
    pub fn separates_sets(&self, a: &VertexSet, b: &VertexSet) -> bool {
        (a.is_subset(&self.side_a) && b.is_subset(&self.side_b))
            || (a.is_subset(&self.side_b) && b.is_subset(&self.side_a))
    }
}

const INTERVAL_TABLE_MAX: usize = 256;
const MEDIAN_TABLE_MAX: usize = 128;

static NEXT_GRAPH_ID: AtomicU64 = AtomicU64::new(1);

/// A finite connected graph whose median property has been verified.
///
/// Immutable after construction. Clones share the ambient id, so convex sets
/// built on a clone remain valid on the original.
#[derive(Debug, Clone)]
pub struct MedianGraph {
    id: u64,
    n: usize,
    adjacency: Vec<Vec<Vertex>>,
    edges: Vec<(Vertex, Vertex)>,
    dist: Vec<u32>,
    intervals: Option<Vec<VertexSet>>,
    medians: Option<Vec<u32>>,
    walls: Vec<Wall>,
    edge_walls: Vec<usize>,
}

impl MedianGraph {
    /// Validates `graph` and precomputes distances, medians and walls.
    pub fn verify(graph: &Graph) -> Result<MedianGraph> {
        let n = graph.vertices;
        if n == 0 {
            return Err(Error::EmptyGraph);
        }
        let mut adjacency = vec![Vec::new(); n];
        let mut edges = Vec::with_capacity(graph.edges.len());
        for &[u, v] in &graph.edges {
            for w in [u, v] {
                if w >= n {
                    return Err(Error::VertexOutOfRange { vertex: w, n });
                }
            }
            if u == v {
                return Err(Error::InvalidGraph(format!("self-loop at {u}")));
            }
            edges.push((u.min(v), u.max(v)));
        }
        edges.sort_unstable();
        if let Some(w) = edges.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::InvalidGraph(format!("duplicate edge {:?}", w[0])));
        }
        for &(u, v) in &edges {
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }

        let dist = all_pairs_bfs(&adjacency)?;
        let mut g = MedianGraph {
            id: NEXT_GRAPH_ID.fetch_add(1, Ordering::Relaxed),
            n,
            adjacency,
            edges,
            dist,
            intervals: None,
            medians: None,
            walls: Vec::new(),
            edge_walls: Vec::new(),
        };
        if n <= INTERVAL_TABLE_MAX {
            let mut table = Vec::with_capacity(n * n);
            for u in 0..n {
                for v in 0..n {
                    table.push(g.compute_interval(u, v));
                }
            }
            g.intervals = Some(table);
        }
        g.check_median_property()?;
        g.build_walls()?;
        Ok(g)
    }

    /// Opaque token identifying the ambient graph of derived objects.
    pub fn id(&self) -> u64 {
        self.id
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn vertices(&self) -> std::ops::Range<Vertex> {
        0..self.n
    }

    pub fn edges(&self) -> &[(Vertex, Vertex)] {
        &self.edges
    }

    pub fn neighbors(&self, v: Vertex) -> &[Vertex] {
        &self.adjacency[v]
    }

    pub fn is_adjacent(&self, u: Vertex, v: Vertex) -> bool {
        self.adjacency[u].binary_search(&v).is_ok()
    }

    pub fn to_graph(&self) -> Graph {
        Graph::new(self.n, self.edges.iter().copied())
    }

    pub fn check_vertex(&self, v: Vertex) -> Result<()> {
        if v < self.n {
            Ok(())
        } else {
            Err(Error::VertexOutOfRange {
                vertex: v,
                n: self.n,
            })
        }
    }

    #[inline]
    pub fn distance(&self, u: Vertex, v: Vertex) -> u32 {
        self.dist[u * self.n + v]
    }

    pub fn diameter(&self) -> u32 {
        self.dist.iter().copied().max().unwrap_or(0)
    }

    pub fn empty_set(&self) -> VertexSet {
        VertexSet::empty(self.n)
    }

    pub fn all_vertices(&self) -> VertexSet {
        VertexSet::full(self.n)
    }

    fn compute_interval(&self, u: Vertex, v: Vertex) -> VertexSet {
        let duv = self.distance(u, v);
        VertexSet::from_iter_in(
            self.n,
            (0..self.n).filter(|&z| self.distance(u, z) + self.distance(z, v) == duv),
        )
    }

    /// `I(u, v)`: the vertices lying on some geodesic from `u` to `v`.
    pub fn interval(&self, u: Vertex, v: Vertex) -> VertexSet {
        match &self.intervals {
            Some(t) => t[u * self.n + v].clone(),
            None => self.compute_interval(u, v),
        }
    }

    fn with_interval<R>(&self, u: Vertex, v: Vertex, f: impl FnOnce(&VertexSet) -> R) -> R {
        match &self.intervals {
            Some(t) => f(&t[u * self.n + v]),
            None => f(&self.compute_interval(u, v)),
        }
    }

    fn triple_intersection(&self, x: Vertex, y: Vertex, z: Vertex) -> VertexSet {
        let mut m = self.interval(x, y);
        self.with_interval(y, z, |i| m.intersect_with(i));
        self.with_interval(x, z, |i| m.intersect_with(i));
        m
    }

    fn check_median_property(&mut self) -> Result<()> {
        let n = self.n;
        let mut table = (n <= MEDIAN_TABLE_MAX).then(|| vec![0u32; n * n * n]);
        for x in 0..n {
            for y in x..n {
                for z in y..n {
                    let m = self.triple_intersection(x, y, z);
                    let count = m.len();
                    if count != 1 {
                        return Err(Error::NotMedian {
                            triple: (x, y, z),
                            medians: count,
                        });
                    }
                    if let Some(t) = table.as_mut() {
                        let med = m.first().unwrap() as u32;
                        for (a, b, c) in permutations(x, y, z) {
                            t[(a * n + b) * n + c] = med;
                        }
                    }
                }
            }
        }
        self.medians = table;
        Ok(())
    }

    /// The unique median of `x`, `y`, `z`.
    #[inline]
    pub fn median(&self, x: Vertex, y: Vertex, z: Vertex) -> Vertex {
        match &self.medians {
            Some(t) => t[(x * self.n + y) * self.n + z] as Vertex,
            None => self
                .triple_intersection(x, y, z)
                .first()
                .expect("median property verified at construction"),
        }
    }

    fn build_walls(&mut self) -> Result<()> {
        let mut by_side: HashMap<VertexSet, usize> = HashMap::new();
        let mut edge_walls = Vec::with_capacity(self.edges.len());
        for &(u, v) in &self.edges {
            let side_a = VertexSet::from_iter_in(
                self.n,
                (0..self.n).filter(|&w| self.distance(w, u) < self.distance(w, v)),
            );
            let side_b = side_a.complement();
            let key = if side_a.contains(0) {
                side_a.clone()
            } else {
                side_b.clone()
            };
            if let Some(&id) = by_side.get(&key) {
                edge_walls.push(id);
                continue;
            }
            if !self.is_convex(&side_a) || !self.is_convex(&side_b) {
                return Err(Error::WallNotConvex { edge: (u, v) });
            }
            let id = self.walls.len();
            by_side.insert(key, id);
            self.walls.push(Wall {
                side_a,
                side_b,
                edge: (u, v),
            });
            edge_walls.push(id);
        }
        self.edge_walls = edge_walls;
        Ok(())
    }

    /// Canonical wall enumeration, ordered by first dual edge.
    pub fn walls(&self) -> &[Wall] {
        &self.walls
    }

    pub fn wall_count(&self) -> usize {
        self.walls.len()
    }

    /// Wall id dual to each edge of [`edges`](Self::edges), in the same order.
    pub fn edge_walls(&self) -> &[usize] {
        &self.edge_walls
    }

    pub fn empty_wall_set(&self) -> WallSet {
        WallSet::empty(self.walls.len())
    }

    /// `W(u | v)`: the walls with `u` and `v` on opposite sides.
    pub fn walls_separating(&self, u: Vertex, v: Vertex) -> WallSet {
        WallSet::from_iter_in(
            self.walls.len(),
            self.walls
                .iter()
                .enumerate()
                .filter(|(_, w)| w.separates(u, v))
                .map(|(i, _)| i),
        )
    }

    /// `W(A | B)`: the walls with `a` and `b` in opposite halfspaces.
    pub fn walls_separating_sets(&self, a: &VertexSet, b: &VertexSet) -> WallSet {
        WallSet::from_iter_in(
            self.walls.len(),
            self.walls
                .iter()
                .enumerate()
                .filter(|(_, w)| w.separates_sets(a, b))
                .map(|(i, _)| i),
        )
    }

    /// `H(S)`: the walls separating two points of `s`, equivalently the walls
    /// crossing the convex hull of `s`.
    pub fn crossing(&self, s: &VertexSet) -> WallSet {
        WallSet::from_iter_in(
            self.walls.len(),
            self.walls
                .iter()
                .enumerate()
                .filter(|(_, w)| s.straddles(&w.side_a))
                .map(|(i, _)| i),
        )
    }

    /// `#H(S)` without materializing the wall set.
    #[inline]
    pub fn crossing_count(&self, s: &VertexSet) -> usize {
        self.walls.iter().filter(|w| s.straddles(&w.side_a)).count()
    }

    pub fn is_convex(&self, s: &VertexSet) -> bool {
        let members = s.to_vec();
        for (i, &x) in members.iter().enumerate() {
            for &y in &members[i + 1..] {
                if !self.with_interval(x, y, |iv| iv.is_subset(s)) {
                    return false;
                }
            }
        }
        true
    }

    /// Smallest interval-closed superset of `s`, computed by iterating
    /// `T ↦ ⋃_{x,y ∈ T} I(x, y)` to its fixpoint.
    pub fn hull_of(&self, s: &VertexSet) -> VertexSet {
        let mut hull = s.clone();
        loop {
            let members = hull.to_vec();
            let mut next = hull.clone();
            for (i, &x) in members.iter().enumerate() {
                for &y in &members[i + 1..] {
                    self.with_interval(x, y, |iv| next.union_with(iv));
                }
            }
            if next == hull {
                return hull;
            }
            hull = next;
        }
    }

    pub fn convex_hull(&self, s: &VertexSet) -> Result<ConvexSet> {
        if s.is_empty() {
            return Err(Error::EmptySet);
        }
        let members = self.hull_of(s);
        Ok(ConvexSet::new_unchecked(self, members))
    }

    pub fn convex_hull_of(&self, vertices: &[Vertex]) -> Result<ConvexSet> {
        for &v in vertices {
            self.check_vertex(v)?;
        }
        self.convex_hull(&VertexSet::from_iter_in(self.n, vertices.iter().copied()))
    }

    /// Wraps an already-convex set, rejecting anything else.
    pub fn convex_set(&self, s: VertexSet) -> Result<ConvexSet> {
        if s.universe() != self.n {
            return Err(Error::AmbientMismatch);
        }
        if s.is_empty() {
            return Err(Error::EmptySet);
        }
        if !self.is_convex(&s) {
            return Err(Error::NotConvex(s.to_vec()));
        }
        Ok(ConvexSet::new_unchecked(self, s))
    }

    pub fn convex_set_of(&self, vertices: &[Vertex]) -> Result<ConvexSet> {
        for &v in vertices {
            self.check_vertex(v)?;
        }
        self.convex_set(VertexSet::from_iter_in(self.n, vertices.iter().copied()))
    }

    pub fn singleton(&self, v: Vertex) -> ConvexSet {
        ConvexSet::new_unchecked(self, VertexSet::singleton(self.n, v))
    }

    pub fn whole(&self) -> ConvexSet {
        ConvexSet::new_unchecked(self, self.all_vertices())
    }

    pub(crate) fn check_ambient(&self, c: &ConvexSet) -> Result<()> {
        if c.ambient() == self.id {
            Ok(())
        } else {
            Err(Error::AmbientMismatch)
        }
    }

    /// Projection of `x` onto the convex set `c`: the unique point of `c`
    /// lying in `I(x, y)` for every `y ∈ c`.
    pub fn gate(&self, c: &ConvexSet, x: Vertex) -> Result<Vertex> {
        self.check_ambient(c)?;
        self.check_vertex(x)?;
        Ok(self.gate_unchecked(c.members(), x))
    }

    pub(crate) fn gate_unchecked(&self, c: &VertexSet, x: Vertex) -> Vertex {
        c.iter()
            .min_by_key(|&p| (self.distance(x, p), p))
            .expect("convex sets are nonempty")
    }

    /// A pair `(x1, x2)` of mutual gates realizing `d(C1, C2)`; the walls
    /// separating `x1` from `x2` are exactly the walls separating the sets.
    pub fn gate_pair(&self, c1: &ConvexSet, c2: &ConvexSet) -> Result<(Vertex, Vertex)> {
        self.check_ambient(c1)?;
        self.check_ambient(c2)?;
        let mut x1 = c1.members().first().expect("nonempty");
        let mut x2 = self.gate_unchecked(c2.members(), x1);
        loop {
            let y1 = self.gate_unchecked(c1.members(), x2);
            let y2 = self.gate_unchecked(c2.members(), y1);
            if (y1, y2) == (x1, x2) {
                return Ok((x1, x2));
            }
            x1 = y1;
            x2 = y2;
        }
    }

    /// Minimum distance between two vertex sets.
    pub fn set_distance(&self, a: &VertexSet, b: &VertexSet) -> u32 {
        a.iter()
            .flat_map(|x| b.iter().map(move |y| (x, y)))
            .map(|(x, y)| self.distance(x, y))
            .min()
            .unwrap_or(0)
    }
}

fn permutations(x: Vertex, y: Vertex, z: Vertex) -> [(Vertex, Vertex, Vertex); 6] {
    [
        (x, y, z),
        (x, z, y),
        (y, x, z),
        (y, z, x),
        (z, x, y),
        (z, y, x),
    ]
}

fn all_pairs_bfs(adjacency: &[Vec<Vertex>]) -> Result<Vec<u32>> {
    let n = adjacency.len();
    let mut dist = vec![u32::MAX; n * n];
    let mut queue = VecDeque::new();
    for s in 0..n {
        let row = &mut dist[s * n..(s + 1) * n];
        row[s] = 0;
        queue.push_back(s);
        while let Some(u) = queue.pop_front() {
            for &v in &adjacency[u] {
                if row[v] == u32::MAX {
                    row[v] = row[u] + 1;
                    queue.push_back(v);
                }
            }
        }
        if let Some(v) = row.iter().position(|&d| d == u32::MAX) {
            return Err(Error::NotConnected { unreachable: v });
        }
    }
    Ok(dist)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs;

    fn mg(g: Graph) -> MedianGraph {
        MedianGraph::verify(&g).unwrap()
    }

    #[test]
    fn single_edge_and_square_are_median() {
        let k2 = mg(graphs::path(2));
        assert_eq!(k2.wall_count(), 1);
        assert_eq!(k2.walls()[0].side_a().to_vec(), vec![0]);
        assert_eq!(k2.walls()[0].side_b().to_vec(), vec![1]);
        let c4 = mg(graphs::cycle(4));
        assert_eq!(c4.wall_count(), 2);
        assert_eq!(mg(graphs::path(3)).wall_count(), 2);
    }

    #[test]
    fn triangle_is_rejected_with_witness() {
        let err = MedianGraph::verify(&graphs::complete(3)).unwrap_err();
        assert_eq!(
            err,
            Error::NotMedian {
                triple: (0, 1, 2),
                medians: 0
            }
        );
    }

    #[test]
    fn disconnected_and_malformed_inputs() {
        assert_eq!(
            MedianGraph::verify(&Graph::new(3, [(0, 1)])).unwrap_err(),
            Error::NotConnected { unreachable: 2 }
        );
        assert!(matches!(
            MedianGraph::verify(&Graph::new(2, [(0, 0)])),
            Err(Error::InvalidGraph(_))
        ));
        assert!(matches!(
            MedianGraph::verify(&Graph::new(2, [(0, 1), (1, 0)])),
            Err(Error::InvalidGraph(_))
        ));
        assert_eq!(
            MedianGraph::verify(&Graph::new(0, [])).unwrap_err(),
            Error::EmptyGraph
        );
        // K_{2,3} has two medians for its three degree-2 vertices.
        assert!(matches!(
            MedianGraph::verify(&Graph::new(
                5,
                [(0, 2), (0, 3), (0, 4), (1, 2), (1, 3), (1, 4)]
            )),
            Err(Error::NotMedian { medians: 2, .. })
        ));
    }

    #[test]
    fn single_vertex_is_legal() {
        let g = mg(Graph::new(1, []));
        assert_eq!(g.wall_count(), 0);
        assert_eq!(g.median(0, 0, 0), 0);
        assert_eq!(g.interval(0, 0).to_vec(), vec![0]);
        assert!(g.walls_separating(0, 0).is_empty());
        let c = g.whole();
        assert_eq!(g.gate(&c, 0).unwrap(), 0);
    }

    #[test]
    fn intervals() {
        let k2 = mg(graphs::path(2));
        assert_eq!(k2.interval(0, 0).to_vec(), vec![0]);
        let c4 = mg(graphs::cycle(4));
        assert_eq!(c4.interval(0, 2).to_vec(), vec![0, 1, 2, 3]);
        let p3 = mg(graphs::path(3));
        assert_eq!(p3.interval(0, 2).to_vec(), vec![0, 1, 2]);
    }

    #[test]
    fn medians() {
        let c4 = mg(graphs::cycle(4));
        assert_eq!(c4.median(0, 0, 3), 0);
        assert_eq!(c4.median(0, 1, 2), 1);
        let grid = mg(graphs::grid(3, 3));
        let v = |i, j| graphs::grid_vertex(3, i, j);
        assert_eq!(grid.median(v(0, 0), v(2, 0), v(0, 2)), v(0, 0));
    }

    #[test]
    fn separating_walls() {
        let c4 = mg(graphs::cycle(4));
        assert!(c4.walls_separating(1, 1).is_empty());
        assert_eq!(c4.walls_separating(0, 2).len(), 2);
        let p3 = mg(graphs::path(3));
        assert_eq!(p3.walls_separating(0, 2).len(), 2);
    }

    #[test]
    fn hulls() {
        let c4 = mg(graphs::cycle(4));
        assert_eq!(
            c4.convex_hull_of(&[0, 2]).unwrap().to_vec(),
            vec![0, 1, 2, 3]
        );
        assert_eq!(c4.convex_hull_of(&[0, 1]).unwrap().to_vec(), vec![0, 1]);
        let grid = mg(graphs::grid(3, 3));
        let v = |i, j| graphs::grid_vertex(3, i, j);
        let hull = grid.convex_hull_of(&[v(0, 0), v(2, 1)]).unwrap();
        let mut expected: Vec<_> = (0..3).flat_map(|i| (0..2).map(move |j| v(i, j))).collect();
        expected.sort();
        assert_eq!(hull.to_vec(), expected);
        assert_eq!(
            grid.convex_hull(&grid.empty_set()).unwrap_err(),
            Error::EmptySet
        );
    }

    #[test]
    fn gates() {
        let p3 = mg(graphs::path(3));
        let c = p3.convex_set_of(&[0]).unwrap();
        assert_eq!(p3.gate(&c, 2).unwrap(), 0);
        assert_eq!(p3.gate(&p3.whole(), 1).unwrap(), 1);
        let grid = mg(graphs::grid(3, 3));
        let v = |i, j| graphs::grid_vertex(3, i, j);
        let bottom = grid.convex_set_of(&[v(0, 0), v(1, 0), v(2, 0)]).unwrap();
        assert_eq!(grid.gate(&bottom, v(1, 2)).unwrap(), v(1, 0));
    }

    #[test]
    fn gate_pairs() {
        let p4 = mg(graphs::path(4));
        let c1 = p4.convex_set_of(&[0]).unwrap();
        let c2 = p4.convex_set_of(&[2, 3]).unwrap();
        assert_eq!(p4.gate_pair(&c1, &c2).unwrap(), (0, 2));
        let (a, b) = p4.gate_pair(&c2, &c2).unwrap();
        assert_eq!(a, b);

        let grid = mg(graphs::grid(3, 3));
        let v = |i, j| graphs::grid_vertex(3, i, j);
        let left = grid.convex_set_of(&[v(0, 0), v(0, 1), v(0, 2)]).unwrap();
        let right = grid.convex_set_of(&[v(2, 0), v(2, 1), v(2, 2)]).unwrap();
        let (x1, x2) = grid.gate_pair(&left, &right).unwrap();
        assert_eq!(x1 / 3, x2 / 3, "same row");
        assert_eq!(grid.walls_separating(x1, x2).len(), 2);
        assert_eq!(
            grid.walls_separating(x1, x2),
            grid.walls_separating_sets(left.members(), right.members())
        );
    }

    #[test]
    fn ambient_mismatch() {
        let a = mg(graphs::path(3));
        let b = mg(graphs::path(3));
        let c = b.singleton(0);
        assert_eq!(a.gate(&c, 1).unwrap_err(), Error::AmbientMismatch);
    }
}
