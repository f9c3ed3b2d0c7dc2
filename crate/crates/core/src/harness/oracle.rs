//! Brute-force reference implementations.
//!
//! Everything here works from the raw edge list and a Floyd–Warshall distance
//! table, with vertex sets as bit masks. Nothing calls into the wall, hull,
//! convex-family or wreath-distance code it is used to check.

use std::collections::{HashMap, VecDeque};
use std::hash::Hash;
use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::lamplighter::{elementary_moves, GridWreath, Point, Rectangle};
use crate::median::Graph;
use crate::Vertex;

/// Largest graph the subset-scanning oracles accept.
pub const MAX_ORACLE_VERTICES: usize = 16;

pub type Mask = u64;

pub fn mask_of(vertices: impl IntoIterator<Item = Vertex>) -> Mask {
    vertices.into_iter().fold(0, |m, v| m | 1 << v)
}

pub fn members(mask: Mask) -> Vec<Vertex> {
    (0..64).filter(|&v| mask >> v & 1 == 1).collect()
}

/// All-pairs distances of a raw graph.
#[derive(Debug, Clone)]
pub struct Metric {
    n: usize,
    edges: Vec<[Vertex; 2]>,
    dist: Vec<Vec<u32>>,
    intervals: Vec<Mask>,
    convex: OnceLock<Vec<Mask>>,
}

impl Metric {
    pub fn new(g: &Graph) -> Result<Self> {
        let n = g.vertices;
        if n == 0 || n > MAX_ORACLE_VERTICES {
            return Err(Error::TooLarge {
                what: "oracle graph",
                size: n as u128,
                bound: MAX_ORACLE_VERTICES as u128,
            });
        }
        const INF: u32 = u32::MAX / 4;
        let mut dist = vec![vec![INF; n]; n];
        for (v, row) in dist.iter_mut().enumerate() {
            row[v] = 0;
        }
        for &[u, v] in &g.edges {
            dist[u][v] = 1;
            dist[v][u] = 1;
        }
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    let through = dist[i][k] + dist[k][j];
                    if through < dist[i][j] {
                        dist[i][j] = through;
                    }
                }
            }
        }
        if let Some(v) = (0..n).find(|&v| dist[0][v] >= INF) {
            return Err(Error::NotConnected { unreachable: v });
        }
        let between = |u: usize, z: usize, v: usize| dist[u][z] + dist[z][v] == dist[u][v];
        let intervals = (0..n * n)
            .map(|i| mask_of((0..n).filter(|&z| between(i / n, z, i % n))))
            .collect();
        Ok(Metric {
            n,
            edges: g.edges.clone(),
            dist,
            intervals,
            convex: OnceLock::new(),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn all(&self) -> Mask {
        if self.n == 64 {
            u64::MAX
        } else {
            (1 << self.n) - 1
        }
    }

    pub fn d(&self, u: Vertex, v: Vertex) -> u32 {
        self.dist[u][v]
    }

    pub fn between(&self, u: Vertex, z: Vertex, v: Vertex) -> bool {
        self.d(u, z) + self.d(z, v) == self.d(u, v)
    }

    pub fn interval(&self, u: Vertex, v: Vertex) -> Mask {
        self.intervals[u * self.n + v]
    }

    /// Every vertex in all three pairwise intervals.
    pub fn medians(&self, x: Vertex, y: Vertex, z: Vertex) -> Vec<Vertex> {
        members(self.interval(x, y) & self.interval(y, z) & self.interval(x, z))
    }

    pub fn is_convex(&self, s: Mask) -> bool {
        let pts = members(s);
        pts.iter()
            .enumerate()
            .all(|(i, &u)| pts[i + 1..].iter().all(|&v| self.interval(u, v) & !s == 0))
    }

    /// Every nonempty convex set, found by testing all subsets.
    pub fn convex_sets(&self) -> &[Mask] {
        self.convex
            .get_or_init(|| (1..=self.all()).filter(|&s| self.is_convex(s)).collect())
    }

    /// Intersection of every convex superset of `s`.
    pub fn hull(&self, s: Mask) -> Mask {
        self.convex_sets()
            .iter()
            .filter(|&&c| c & s == s)
            .fold(self.all(), |h, &c| h & c)
    }

    /// Fixpoint of `T ↦ T ∪ {m(x, y, z) : x, y ∈ T, z ∈ X}`.
    pub fn ternary_median_closure(&self, s: Mask) -> Mask {
        let mut t = s;
        loop {
            let mut next = t;
            let pts = members(t);
            for &x in &pts {
                for &y in &pts {
                    for z in 0..self.n {
                        for m in self.medians(x, y, z) {
                            next |= 1 << m;
                        }
                    }
                }
            }
            if next == t {
                return t;
            }
            t = next;
        }
    }

    /// Fixpoint of `F ↦ F ∪ {m(x, y, z) : x, y, z ∈ F}`.
    pub fn median_hull(&self, s: Mask) -> Mask {
        let mut t = s;
        loop {
            let mut next = t;
            let pts = members(t);
            for &x in &pts {
                for &y in &pts {
                    for &z in &pts {
                        for m in self.medians(x, y, z) {
                            next |= 1 << m;
                        }
                    }
                }
            }
            if next == t {
                return t;
            }
            t = next;
        }
    }

    /// Points `p` of `c` with `d(x, y) = d(x, p) + d(p, y)` for every `y ∈ c`.
    pub fn gates(&self, c: Mask, x: Vertex) -> Vec<Vertex> {
        let pts = members(c);
        pts.iter()
            .copied()
            .filter(|&p| pts.iter().all(|&y| self.between(x, p, y)))
            .collect()
    }

    /// Minimum distance between two vertex sets.
    pub fn set_distance(&self, a: Mask, b: Mask) -> u32 {
        let bs = members(b);
        members(a)
            .iter()
            .flat_map(|&u| bs.iter().map(move |&v| (u, v)))
            .map(|(u, v)| self.d(u, v))
            .min()
            .unwrap_or(0)
    }

    /// Edge classes of the Djoković–Winkler relation: `ab Θ cd` iff
    /// `d(a, c) + d(b, d) ≠ d(a, d) + d(b, c)`. Returns the class of each
    /// edge and the number of classes.
    pub fn edge_classes(&self) -> (Vec<usize>, usize) {
        let m = self.edges.len();
        let mut parent: Vec<usize> = (0..m).collect();
        fn find(p: &mut [usize], i: usize) -> usize {
            let mut r = i;
            while p[r] != r {
                r = p[r];
            }
            p[i] = r;
            r
        }
        for i in 0..m {
            for j in i + 1..m {
                let [a, b] = self.edges[i];
                let [c, d] = self.edges[j];
                if self.d(a, c) + self.d(b, d) != self.d(a, d) + self.d(b, c) {
                    let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                    parent[ri] = rj;
                }
            }
        }
        let mut ids = HashMap::new();
        let classes = (0..m)
            .map(|i| {
                let r = find(&mut parent, i);
                let next = ids.len();
                *ids.entry(r).or_insert(next)
            })
            .collect();
        (classes, ids.len())
    }

    /// Number of edge classes meeting the hull of `s`.
    pub fn hull_class_count(&self, s: Mask, classes: &[usize]) -> usize {
        let h = self.hull(s);
        let mut seen: Vec<usize> = self
            .edges
            .iter()
            .zip(classes)
            .filter(|([u, v], _)| h >> u & 1 == 1 && h >> v & 1 == 1)
            .map(|(_, &c)| c)
            .collect();
        seen.sort_unstable();
        seen.dedup();
        seen.len()
    }

    pub fn neighbors(&self, v: Vertex) -> Vec<Vertex> {
        (0..self.n).filter(|&w| self.d(v, w) == 1).collect()
    }
}

/// Breadth-first distances from `source` over `neighbors`.
pub fn bfs_oracle<N, F, I>(source: N, neighbors: F, max_nodes: usize) -> Result<HashMap<N, u64>>
where
    N: Clone + Eq + Hash,
    F: FnMut(&N) -> I,
    I: IntoIterator<Item = N>,
{
    bfs_ball(source, neighbors, u64::MAX, max_nodes)
}

/// Breadth-first distances from `source`, stopping at `radius`.
pub fn bfs_ball<N, F, I>(
    source: N,
    mut neighbors: F,
    radius: u64,
    max_nodes: usize,
) -> Result<HashMap<N, u64>>
where
    N: Clone + Eq + Hash,
    F: FnMut(&N) -> I,
    I: IntoIterator<Item = N>,
{
    let mut dist = HashMap::from([(source.clone(), 0)]);
    let mut queue = VecDeque::from([source]);
    while let Some(u) = queue.pop_front() {
        let du = dist[&u];
        if du == radius {
            continue;
        }
        for v in neighbors(&u) {
            if !dist.contains_key(&v) {
                if dist.len() == max_nodes {
                    return Err(Error::BoundExceeded(max_nodes));
                }
                dist.insert(v.clone(), du + 1);
                queue.push_back(v);
            }
        }
    }
    Ok(dist)
}

/// A wreath as the oracle sees it: a convex mask of the base graph and the
/// full lamp vector.
pub type RawWreath = (Mask, Vec<Vertex>);

/// The wreath graph generated by moves defined without any distance formula:
/// change one lamp inside the base to an adjacent value, or replace the base
/// by a convex set containing it (or contained in it) whose hull meets
/// exactly one more edge class.
#[derive(Debug, Clone)]
pub struct WreathMoves {
    lamp: Metric,
    base_convex: Vec<Mask>,
    covers: HashMap<Mask, Vec<Mask>>,
}

impl WreathMoves {
    pub fn new(lamp: &Graph, base: &Graph) -> Result<Self> {
        let lamp = Metric::new(lamp)?;
        let base = Metric::new(base)?;
        let (classes, _) = base.edge_classes();
        let base_convex = base.convex_sets().to_vec();
        let counts: Vec<usize> = base_convex
            .iter()
            .map(|&c| base.hull_class_count(c, &classes))
            .collect();
        let mut covers: HashMap<Mask, Vec<Mask>> = HashMap::new();
        for (i, &a) in base_convex.iter().enumerate() {
            for (j, &b) in base_convex.iter().enumerate() {
                let nested = (a & b == a || a & b == b) && a != b;
                if nested && counts[i].abs_diff(counts[j]) == 1 {
                    covers.entry(a).or_default().push(b);
                }
            }
        }
        Ok(WreathMoves {
            lamp,
            base_convex,
            covers,
        })
    }

    pub fn convex_bases(&self) -> &[Mask] {
        &self.base_convex
    }

    pub fn moves(&self, w: &RawWreath) -> Vec<RawWreath> {
        let (c, lamps) = w;
        let mut out: Vec<RawWreath> = self
            .covers
            .get(c)
            .into_iter()
            .flatten()
            .map(|&b| (b, lamps.clone()))
            .collect();
        for y in members(*c) {
            for x in self.lamp.neighbors(lamps[y]) {
                let mut l = lamps.clone();
                l[y] = x;
                out.push((*c, l));
            }
        }
        out
    }
}

/// Distances in the graph of grid wreaths under elementary moves, out to
/// `radius` from the base wreath.
pub fn grid_ball(radius: u64, max_nodes: usize) -> Result<HashMap<GridWreath, u64>> {
    bfs_ball(GridWreath::base(), elementary_moves, radius, max_nodes)
}

/// Rectangles with all corners inside a square box, with their side moves.
///
/// Used to compute the fewest side moves from one rectangle to another such
/// that every point of a set `F` lies inside some rectangle along the way.
#[derive(Debug, Clone)]
pub struct RectangleMoves {
    rects: Vec<Rectangle>,
    index: HashMap<Rectangle, usize>,
    moves: Vec<Vec<usize>>,
}

impl RectangleMoves {
    /// All rectangles with doubled corner coordinates in `[-bound, bound]`
    /// (`bound` odd).
    pub fn new(bound: i64) -> Self {
        let coords: Vec<i64> = (-bound..=bound).filter(|c| c.rem_euclid(2) == 1).collect();
        let mut rects = Vec::new();
        for (i, &x_lo) in coords.iter().enumerate() {
            for &x_hi in &coords[i + 1..] {
                for (j, &y_lo) in coords.iter().enumerate() {
                    for &y_hi in &coords[j + 1..] {
                        rects.push(
                            Rectangle::from_doubled(x_lo, x_hi, y_lo, y_hi).expect("odd corners"),
                        );
                    }
                }
            }
        }
        let index: HashMap<Rectangle, usize> =
            rects.iter().enumerate().map(|(i, r)| (*r, i)).collect();
        let moves = rects
            .iter()
            .map(|r| {
                let [x_lo, x_hi, y_lo, y_hi] = r.doubled();
                [
                    [x_lo - 2, x_hi, y_lo, y_hi],
                    [x_lo + 2, x_hi, y_lo, y_hi],
                    [x_lo, x_hi - 2, y_lo, y_hi],
                    [x_lo, x_hi + 2, y_lo, y_hi],
                    [x_lo, x_hi, y_lo - 2, y_hi],
                    [x_lo, x_hi, y_lo + 2, y_hi],
                    [x_lo, x_hi, y_lo, y_hi - 2],
                    [x_lo, x_hi, y_lo, y_hi + 2],
                ]
                .iter()
                .filter_map(|&[a, b, c, d]| Rectangle::from_doubled(a, b, c, d).ok())
                .filter_map(|m| index.get(&m).copied())
                .collect()
            })
            .collect();
        RectangleMoves {
            rects,
            index,
            moves,
        }
    }

    pub fn rectangles(&self) -> &[Rectangle] {
        &self.rects
    }

    pub fn index_of(&self, r: &Rectangle) -> Option<usize> {
        self.index.get(r).copied()
    }

    /// For every rectangle `R2` of the box, the fewest side moves from `r1`
    /// to `R2` along a path whose rectangles together contain every point of
    /// `f` (`u32::MAX` when unreachable).
    pub fn constrained_distances(&self, r1: usize, f: &[Point]) -> Vec<u32> {
        let k = f.len();
        let full = (1usize << k) - 1;
        let covered: Vec<usize> = self
            .rects
            .iter()
            .map(|r| {
                f.iter()
                    .enumerate()
                    .filter(|(_, &p)| r.contains(p))
                    .fold(0, |m, (i, _)| m | 1 << i)
            })
            .collect();
        let states = self.rects.len() << k;
        let mut dist = vec![u32::MAX; states];
        let start = r1 << k | covered[r1];
        dist[start] = 0;
        let mut queue = VecDeque::from([start]);
        while let Some(s) = queue.pop_front() {
            let (r, seen) = (s >> k, s & full);
            for &m in &self.moves[r] {
                let t = m << k | seen | covered[m];
                if dist[t] == u32::MAX {
                    dist[t] = dist[s] + 1;
                    queue.push_back(t);
                }
            }
        }
        (0..self.rects.len()).map(|r| dist[r << k | full]).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs;

    #[test]
    fn metric_basics() {
        let c4 = Metric::new(&graphs::cycle(4)).unwrap();
        assert_eq!(c4.interval(0, 2), 0b1111);
        assert_eq!(c4.medians(0, 1, 2), vec![1]);
        assert_eq!(c4.convex_sets().len(), 9);
        assert_eq!(c4.hull(0b0101), 0b1111);
        assert_eq!(c4.median_hull(0b0101), 0b0101);
        assert_eq!(c4.ternary_median_closure(0b0101), 0b1111);
        assert_eq!(c4.edge_classes().1, 2);
        let k3 = Metric::new(&graphs::complete(3)).unwrap();
        assert!(k3.medians(0, 1, 2).is_empty());
    }

    #[test]
    fn grid_gate_by_scan() {
        let g = Metric::new(&graphs::grid(3, 3)).unwrap();
        let bottom = mask_of([0, 1, 2]);
        assert_eq!(g.gates(bottom, graphs::grid_vertex(3, 1, 2)), vec![1]);
        assert_eq!(
            g.hull(mask_of([0, graphs::grid_vertex(3, 2, 1)]))
                .count_ones(),
            6
        );
    }

    #[test]
    fn bfs_single_vertex_and_bound() {
        let d = bfs_oracle(0u32, |_| Vec::new(), 10).unwrap();
        assert_eq!(d, HashMap::from([(0, 0)]));
        assert_eq!(
            bfs_oracle(0u32, |&v| vec![v + 1], 5).unwrap_err(),
            Error::BoundExceeded(5)
        );
    }

    #[test]
    fn wreath_moves_on_k2_k2() {
        let k2 = graphs::path(2);
        let moves = WreathMoves::new(&k2, &k2).unwrap();
        let d = bfs_oracle((0b01, vec![0, 0]), |w| moves.moves(w), 100).unwrap();
        assert_eq!(d.len(), 12);
        assert_eq!(d[&(0b11, vec![0, 0])], 1);
        assert_eq!(d[&(0b01, vec![0, 1])], 3);
    }

    #[test]
    fn grid_ball_radius_three_is_finite() {
        let ball = grid_ball(3, 100_000).unwrap();
        assert_eq!(ball.values().filter(|&&d| d == 1).count(), 6);
        assert!(ball.values().all(|&d| d <= 3));
    }

    #[test]
    fn constrained_rectangle_moves() {
        let rm = RectangleMoves::new(5);
        let a = rm.index_of(&Rectangle::cell((0, 0))).unwrap();
        let b = rm.index_of(&Rectangle::cell((1, 0))).unwrap();
        assert_eq!(rm.constrained_distances(a, &[])[b], 2);
        assert_eq!(rm.constrained_distances(a, &[(2, 0)])[a], 4);
    }
}
