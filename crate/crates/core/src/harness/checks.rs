//! The registered checks. Each pairs a name and the identity it tests with a
//! body that walks the model exhaustively when the model is small and draws
//! seeded samples otherwise.

use std::collections::{BTreeSet, HashMap};
use std::time::Instant;

use rand::Rng;
use serde_json::{json, Value};

use super::oracle::{
    self, bfs_ball, bfs_oracle, mask_of, Mask, Metric, RawWreath, RectangleMoves, WreathMoves,
};
use super::{CheckReport, Ctx, Model};
use crate::action::PointAction;
use crate::bitset::VertexSet;
use crate::convex::ConvexSet;
use crate::error::{Error, Result};
use crate::lamplighter::{
    grid_action, grid_delta, tc, GridConfig, GridElement, GridWreath, Point, Rectangle,
};
use crate::median::MedianGraph;
use crate::wreath::{Labelling, Wreath};
use crate::Vertex;

pub struct CheckSpec {
    pub name: &'static str,
    /// The identity under test, as a formula.
    pub anchor: &'static str,
    body: fn(&Model, &mut Ctx) -> Result<()>,
}

impl CheckSpec {
    pub fn run(&self, model: &Model) -> CheckReport {
        let started = Instant::now();
        let mut ctx = Ctx::new(model.document.seed, self.name);
        if let Err(e) = (self.body)(model, &mut ctx) {
            ctx.fail(json!({ "error": e.to_string() }));
        }
        ctx.finish(self.name, self.anchor, started)
    }
}

macro_rules! check {
    ($name:literal, $anchor:literal, $body:expr) => {
        CheckSpec {
            name: $name,
            anchor: $anchor,
            body: $body,
        }
    };
}

static CHECKS: &[CheckSpec] = &[
    check!(
        "walls-count-distance",
        "|W(x|y)| = d(x,y)",
        walls_count_distance
    ),
    check!(
        "walls-convex-halfspaces",
        "every wall {D, D^c} has convex sides",
        walls_convex_halfspaces
    ),
    check!(
        "median-unique",
        "I(x,y) ∩ I(y,z) ∩ I(x,z) = {m(x,y,z)}",
        median_unique
    ),
    check!(
        "hull-oracle",
        "interval closure = least convex superset = ternary median closure",
        hull_oracle
    ),
    check!(
        "median-hull",
        "M^n(F) ⊆ hull(F), hull(M^n(F)) = hull(F), M(A ∪ B) = M(M(A) ∪ M(B))",
        median_hull
    ),
    check!(
        "convex-enumeration",
        "enumerate_convex = all interval-closed subsets",
        convex_enumeration
    ),
    check!(
        "gate-identity",
        "d(x,w) = d(x,π_C(x)) + d(π_C(x),w) for w ∈ C",
        gate_identity
    ),
    check!(
        "gate-pair",
        "W(x1|x2) = W(C1|C2), d(x1,x2) = d(C1,C2)",
        gate_pair
    ),
    check!(
        "convex-intersection",
        "C1 ∩ C2 is convex when nonempty",
        convex_intersection
    ),
    check!(
        "family-metric",
        "d(C1,C2) = 2#H(C1∪C2) − #H(C1) − #H(C2) is a metric",
        family_metric
    ),
    check!(
        "family-interval",
        "C ∈ I(C1,C2) ⇔ wall conditions (i)–(iii)",
        family_interval
    ),
    check!(
        "family-median",
        "hull(C1∪C2) ∩ hull(C2∪C3) ∩ hull(C1∪C3) is the unique median",
        family_median
    ),
    check!(
        "family-claim",
        "1_H(C1∪C3) ≤ 1_H(C1∪C2) + 1_H(C2∪C3) − 1_H(C2)",
        family_claim
    ),
    check!(
        "family-embedding",
        "d({x},{y}) = 2 d(x,y)",
        family_embedding
    ),
    check!(
        "wreath-enumeration",
        "|W| = #F(Y) · |X|^|Y|",
        wreath_enumeration
    ),
    check!("wreath-metric", "δ is a metric", wreath_metric),
    check!(
        "wreath-graph-distance",
        "δ = path distance in the graph of wreaths",
        wreath_graph_distance
    ),
    check!(
        "wreath-median",
        "wreath_median is the unique median of every triple",
        wreath_median
    ),
    check!(
        "leaf-isometry",
        "C ↦ (C,φ) is an isometry F(Y) → W(φ)",
        leaf_isometry
    ),
    check!("leaf-convexity", "leaves W(φ) are convex", leaf_convexity),
    check!(
        "leaf-projection-gate",
        "δ(w,z) = δ(w,p_φ(w)) + δ(p_φ(w),z) for z ∈ W(φ)",
        leaf_projection_gate
    ),
    check!(
        "interval-meets-leaf",
        "I(w1,w2) ∩ W(φ) ≠ ∅ ⇔ φ(y) ∈ I(φ1(y),φ2(y)) for all y",
        interval_meets_leaf
    ),
    check!(
        "action-basepoints-free",
        "stab(x0) = stab(y0) = 1",
        action_basepoints_free
    ),
    check!("action-laws", "(e1 e2)·w = e1·(e2·w), 1·w = w", action_laws),
    check!(
        "action-isometry",
        "δ(e·w1, e·w2) = δ(w1,w2)",
        action_isometry
    ),
    check!(
        "stabilizer",
        "stab(({y0},ξ)) = 1; stab(w) = {e : e·w = w}",
        stabilizer
    ),
    check!(
        "properness-ball",
        "{(h,ψ) : δ((h,ψ)·({y0},ξ), ({y0},ξ)) ≤ R}",
        properness_ball
    ),
];

/// Every registered check, sorted by name.
pub fn registry() -> Vec<&'static CheckSpec> {
    let mut all: Vec<&CheckSpec> = CHECKS.iter().collect();
    all.sort_by_key(|c| c.name);
    all
}

/// Triples of a family are checked exhaustively up to this size.
const EXHAUSTIVE_FAMILY: usize = 80;
/// Wreath pairs/triples are checked exhaustively while the work stays below
/// this many distance evaluations.
const EXHAUSTIVE_WORK: usize = 30_000_000;
/// All nonempty vertex subsets are hulled up to this many vertices.
const EXHAUSTIVE_SUBSETS: usize = 10;

fn graphs(m: &Model) -> [(&'static str, &MedianGraph); 2] {
    [
        ("lamp", m.space().lamp_graph()),
        ("base", m.space().base_graph()),
    ]
}

fn mask(s: &VertexSet) -> Mask {
    mask_of(s.iter())
}

fn set_of(g: &MedianGraph, m: Mask) -> VertexSet {
    VertexSet::from_mask(g.vertex_count(), m)
}

fn metric(g: &MedianGraph, label: &str, ctx: &mut Ctx) -> Option<Metric> {
    match Metric::new(&g.to_graph()) {
        Ok(m) => Some(m),
        Err(e) => {
            ctx.note(format!("{label} graph: oracle skipped ({e})"));
            None
        }
    }
}

fn convex_sets(m: &Model, g: &MedianGraph, label: &str, ctx: &mut Ctx) -> Option<Vec<ConvexSet>> {
    match g.enumerate_convex(m.bounds().convex_vertices) {
        Ok(c) => Some(c),
        Err(e) => {
            ctx.note(format!("{label} graph: convex sets not enumerated ({e})"));
            None
        }
    }
}

/// Subsets to hull: all of them on small graphs, samples otherwise.
fn subsets(n: usize, samples: usize, ctx: &mut Ctx) -> Vec<Mask> {
    if n <= EXHAUSTIVE_SUBSETS {
        (1..1u64 << n).collect()
    } else {
        (0..samples)
            .map(|_| ctx.rng.gen_range(1..1u64 << n))
            .collect()
    }
}

/// `count` index triples, exhaustive when `len³` is small enough.
fn triples(len: usize, exhaustive: bool, samples: usize, ctx: &mut Ctx) -> Vec<[usize; 3]> {
    if exhaustive {
        let mut out = Vec::with_capacity(len * len * len);
        for a in 0..len {
            for b in 0..len {
                for c in 0..len {
                    out.push([a, b, c]);
                }
            }
        }
        out
    } else {
        (0..samples)
            .map(|_| [0; 3].map(|_| ctx.rng.gen_range(0..len)))
            .collect()
    }
}

fn walls_count_distance(m: &Model, ctx: &mut Ctx) -> Result<()> {
    for (label, g) in graphs(m) {
        let n = g.vertex_count();
        for u in g.vertices() {
            let d = bfs_oracle(u, |&v| g.neighbors(v).to_vec(), n)?;
            for v in g.vertices() {
                let walls = g.walls_separating(u, v).len() as u64;
                ctx.check(
                    walls == d[&v],
                    || json!({ "graph": label, "u": u, "v": v, "walls": walls, "distance": d[&v] }),
                );
            }
        }
    }
    Ok(())
}

fn walls_convex_halfspaces(m: &Model, ctx: &mut Ctx) -> Result<()> {
    for (label, g) in graphs(m) {
        let Some(o) = metric(g, label, ctx) else {
            continue;
        };
        for (i, w) in g.walls().iter().enumerate() {
            let (a, b) = (mask(w.side_a()), mask(w.side_b()));
            let ok = a & b == 0
                && a | b == o.all()
                && a != 0
                && b != 0
                && o.is_convex(a)
                && o.is_convex(b);
            ctx.check(ok, || json!({ "graph": label, "wall": i, "side_a": w.side_a().to_vec(), "side_b": w.side_b().to_vec() }));
        }
        let classes = o.edge_classes().1;
        ctx.check(
            classes == g.wall_count(),
            || json!({ "graph": label, "walls": g.wall_count(), "edge_classes": classes }),
        );
    }
    Ok(())
}

fn median_unique(m: &Model, ctx: &mut Ctx) -> Result<()> {
    for (label, g) in graphs(m) {
        let Some(o) = metric(g, label, ctx) else {
            continue;
        };
        for [x, y, z] in triples(g.vertex_count(), true, 0, ctx) {
            let med = g.median(x, y, z);
            let all = o.medians(x, y, z);
            let sym = [g.median(y, x, z), g.median(z, y, x), g.median(x, z, y)];
            ctx.check(
                all == [med] && sym.iter().all(|&s| s == med),
                || json!({ "graph": label, "triple": [x, y, z], "median": med, "oracle": all }),
            );
        }
    }
    Ok(())
}

fn hull_oracle(m: &Model, ctx: &mut Ctx) -> Result<()> {
    for (label, g) in graphs(m) {
        let Some(o) = metric(g, label, ctx) else {
            continue;
        };
        for s in subsets(g.vertex_count(), m.bounds().samples, ctx) {
            let h = mask(&g.hull_of(&set_of(g, s)));
            let least = o.hull(s);
            let ternary = o.ternary_median_closure(s);
            let again = mask(&g.hull_of(&set_of(g, h)));
            ctx.check(h == least && h == ternary && s & !h == 0 && again == h, || {
                json!({ "graph": label, "set": oracle::members(s), "hull": oracle::members(h),
                        "least_convex_superset": oracle::members(least), "ternary_closure": oracle::members(ternary) })
            });
            let v = ctx.rng.gen_range(0..g.vertex_count());
            let bigger = mask(&g.hull_of(&set_of(g, s | 1 << v)));
            ctx.check(
                h & !bigger == 0,
                || json!({ "graph": label, "set": oracle::members(s), "added": v }),
            );
        }
    }
    Ok(())
}

fn median_hull(m: &Model, ctx: &mut Ctx) -> Result<()> {
    for (label, g) in graphs(m) {
        let Some(o) = metric(g, label, ctx) else {
            continue;
        };
        let sets = subsets(g.vertex_count(), m.bounds().samples, ctx);
        for &s in &sets {
            let mh = mask(&g.median_hull(&set_of(g, s)));
            let expected = o.median_hull(s);
            let hull = o.hull(s);
            let members = oracle::members(mh);
            let stable = members.iter().all(|&x| {
                members
                    .iter()
                    .all(|&y| members.iter().all(|&z| mh >> g.median(x, y, z) & 1 == 1))
            });
            ctx.check(mh == expected && mh & !hull == 0 && o.hull(mh) == hull && stable, || {
                json!({ "graph": label, "set": oracle::members(s), "median_hull": members, "oracle": oracle::members(expected) })
            });
        }
        for _ in 0..sets.len().min(m.bounds().samples) {
            let a = sets[ctx.rng.gen_range(0..sets.len())];
            let b = sets[ctx.rng.gen_range(0..sets.len())];
            let mh = |s: Mask| mask(&g.median_hull(&set_of(g, s)));
            let (whole, parts) = (mh(a | b), mh(mh(a) | mh(b)));
            ctx.check(
                whole == parts,
                || json!({ "graph": label, "a": oracle::members(a), "b": oracle::members(b) }),
            );
        }
    }
    Ok(())
}

fn convex_enumeration(m: &Model, ctx: &mut Ctx) -> Result<()> {
    for (label, g) in graphs(m) {
        let Some(o) = metric(g, label, ctx) else {
            continue;
        };
        let Some(sets) = convex_sets(m, g, label, ctx) else {
            continue;
        };
        let ours: BTreeSet<Mask> = sets.iter().map(|c| mask(c.members())).collect();
        let theirs: BTreeSet<Mask> = o.convex_sets().iter().copied().collect();
        ctx.check(ours == theirs && ours.len() == sets.len(), || {
            json!({ "graph": label, "enumerated": ours.len(), "oracle": theirs.len(),
                    "missing": theirs.difference(&ours).map(|&s| oracle::members(s)).collect::<Vec<_>>() })
        });
    }
    Ok(())
}

fn gate_identity(m: &Model, ctx: &mut Ctx) -> Result<()> {
    for (label, g) in graphs(m) {
        let Some(o) = metric(g, label, ctx) else {
            continue;
        };
        let Some(sets) = convex_sets(m, g, label, ctx) else {
            continue;
        };
        for c in &sets {
            for x in g.vertices() {
                let p = g.gate(c, x)?;
                let scan = o.gates(mask(c.members()), x);
                ctx.check(scan == [p], || json!({ "graph": label, "set": c.to_vec(), "x": x, "gate": p, "oracle": scan }));
            }
        }
    }
    Ok(())
}

fn gate_pair(m: &Model, ctx: &mut Ctx) -> Result<()> {
    for (label, g) in graphs(m) {
        let Some(o) = metric(g, label, ctx) else {
            continue;
        };
        let Some(sets) = convex_sets(m, g, label, ctx) else {
            continue;
        };
        for c1 in &sets {
            for c2 in &sets {
                let (x1, x2) = g.gate_pair(c1, c2)?;
                let points = g.walls_separating(x1, x2);
                let sets_walls = g.walls_separating_sets(c1.members(), c2.members());
                let dist = o.set_distance(mask(c1.members()), mask(c2.members()));
                let disjoint = !c1.members().intersects(c2.members());
                let ok = c1.contains(x1)
                    && c2.contains(x2)
                    && points == sets_walls
                    && o.d(x1, x2) == dist
                    && (!disjoint || !sets_walls.is_empty());
                ctx.check(ok, || {
                    json!({ "graph": label, "c1": c1.to_vec(), "c2": c2.to_vec(), "pair": [x1, x2],
                            "walls_between_points": points.len(), "walls_between_sets": sets_walls.len(), "distance": dist })
                });
            }
        }
    }
    Ok(())
}

fn convex_intersection(m: &Model, ctx: &mut Ctx) -> Result<()> {
    for (label, g) in graphs(m) {
        let Some(o) = metric(g, label, ctx) else {
            continue;
        };
        let Some(sets) = convex_sets(m, g, label, ctx) else {
            continue;
        };
        for c1 in &sets {
            for c2 in &sets {
                let meet = mask(c1.members()) & mask(c2.members());
                let ok = match g.convex_intersection(c1, c2)? {
                    Some(c) => mask(c.members()) == meet && o.is_convex(meet),
                    None => meet == 0,
                };
                ctx.check(
                    ok,
                    || json!({ "graph": label, "c1": c1.to_vec(), "c2": c2.to_vec() }),
                );
            }
        }
    }
    Ok(())
}

/// Convex sets of a graph with their pairwise distance table.
struct Family<'a> {
    g: &'a MedianGraph,
    sets: Vec<ConvexSet>,
    dist: Vec<u64>,
}

impl<'a> Family<'a> {
    fn load(m: &Model, g: &'a MedianGraph, label: &str, ctx: &mut Ctx) -> Option<Self> {
        let sets = convex_sets(m, g, label, ctx)?;
        let dist = sets
            .iter()
            .flat_map(|a| sets.iter().map(move |b| g.convex_distance_unchecked(a, b)))
            .collect();
        Some(Family { g, sets, dist })
    }

    fn d(&self, i: usize, j: usize) -> u64 {
        self.dist[i * self.sets.len() + j]
    }

    fn between(&self, a: usize, z: usize, b: usize) -> bool {
        self.d(a, z) + self.d(z, b) == self.d(a, b)
    }

    fn triples(&self, m: &Model, ctx: &mut Ctx) -> Vec<[usize; 3]> {
        let k = self.sets.len();
        triples(k, k <= EXHAUSTIVE_FAMILY, m.bounds().samples, ctx)
    }
}

fn family_metric(m: &Model, ctx: &mut Ctx) -> Result<()> {
    for (label, g) in graphs(m) {
        let Some(f) = Family::load(m, g, label, ctx) else {
            continue;
        };
        let k = f.sets.len();
        for i in 0..k {
            for j in 0..k {
                let ok = f.d(i, j) == f.d(j, i) && (f.d(i, j) == 0) == (i == j);
                ctx.check(ok, || json!({ "graph": label, "c1": f.sets[i].to_vec(), "c2": f.sets[j].to_vec() }));
            }
        }
        for [a, b, c] in f.triples(m, ctx) {
            ctx.check(f.d(a, c) <= f.d(a, b) + f.d(b, c), || {
                json!({ "graph": label, "triple": [f.sets[a].to_vec(), f.sets[b].to_vec(), f.sets[c].to_vec()] })
            });
        }
    }
    Ok(())
}

fn family_interval(m: &Model, ctx: &mut Ctx) -> Result<()> {
    for (label, g) in graphs(m) {
        let Some(f) = Family::load(m, g, label, ctx) else {
            continue;
        };
        for [c, a, b] in f.triples(m, ctx) {
            let walls =
                f.g.convex_interval_contains(&f.sets[c], &f.sets[a], &f.sets[b])?;
            let metric = f.between(a, c, b);
            ctx.check(walls == metric, || {
                json!({ "graph": label, "c": f.sets[c].to_vec(), "c1": f.sets[a].to_vec(), "c2": f.sets[b].to_vec(),
                        "wall_conditions": walls, "metric_betweenness": metric })
            });
        }
    }
    Ok(())
}

fn family_median(m: &Model, ctx: &mut Ctx) -> Result<()> {
    for (label, g) in graphs(m) {
        let Some(f) = Family::load(m, g, label, ctx) else {
            continue;
        };
        for [a, b, c] in f.triples(m, ctx) {
            let med = f.g.convex_median(&f.sets[a], &f.sets[b], &f.sets[c])?;
            let found: Vec<usize> = (0..f.sets.len())
                .filter(|&z| f.between(a, z, b) && f.between(b, z, c) && f.between(a, z, c))
                .collect();
            ctx.check(found.len() == 1 && f.sets[found[0]] == med, || {
                json!({ "graph": label, "triple": [f.sets[a].to_vec(), f.sets[b].to_vec(), f.sets[c].to_vec()],
                        "median": med.to_vec(), "metric_medians": found.iter().map(|&z| f.sets[z].to_vec()).collect::<Vec<_>>() })
            });
        }
    }
    Ok(())
}

fn family_claim(m: &Model, ctx: &mut Ctx) -> Result<()> {
    for (label, g) in graphs(m) {
        let Some(f) = Family::load(m, g, label, ctx) else {
            continue;
        };
        let joint =
            |i: usize, j: usize| g.crossing(&f.sets[i].members().union(f.sets[j].members()));
        for [a, b, c] in f.triples(m, ctx) {
            let (h13, h12, h23) = (joint(a, c), joint(a, b), joint(b, c));
            let h2 = f.sets[b].crossing();
            let bad = (0..g.wall_count()).find(|&w| {
                let ind = |s: &VertexSet| s.contains(w) as i32;
                ind(&h13) > ind(&h12) + ind(&h23) - ind(h2)
            });
            ctx.check(bad.is_none(), || {
                json!({ "graph": label, "triple": [f.sets[a].to_vec(), f.sets[b].to_vec(), f.sets[c].to_vec()], "wall": bad })
            });
        }
    }
    Ok(())
}

fn family_embedding(m: &Model, ctx: &mut Ctx) -> Result<()> {
    for (label, g) in graphs(m) {
        let n = g.vertex_count();
        for x in g.vertices() {
            let d = bfs_oracle(x, |&v| g.neighbors(v).to_vec(), n)?;
            for y in g.vertices() {
                let f = g.convex_distance(&g.singleton(x), &g.singleton(y))?;
                ctx.check(f == 2 * d[&y], || json!({ "graph": label, "x": x, "y": y, "family": f, "graph_distance": d[&y] }));
            }
        }
    }
    Ok(())
}

fn raw(m: &Model, w: &Wreath) -> RawWreath {
    let ny = m.space().base_graph().vertex_count();
    (
        mask(w.base.members()),
        (0..ny).map(|y| w.lamps.get(y)).collect(),
    )
}

fn from_raw(m: &Model, w: &RawWreath) -> Result<Wreath> {
    m.space()
        .wreath(&oracle::members(w.0), w.1.iter().copied().enumerate())
}

fn lit(m: &Model, w: &Wreath) -> Value {
    json!(m.space().literal(w))
}

fn enumerated<'a>(m: &'a Model, ctx: &mut Ctx) -> Option<&'a [Wreath]> {
    let all = m.wreaths();
    if all.is_none() {
        ctx.note("space of wreaths exceeds the enumeration bounds; exhaustive parts skipped");
    }
    all
}

/// A random wreath: the hull of up to three random base vertices and
/// uniformly random lamps.
fn random_wreath(m: &Model, ctx: &mut Ctx) -> Result<Wreath> {
    let s = m.space();
    if let Some(all) = m.wreaths() {
        return Ok(all[ctx.rng.gen_range(0..all.len())].clone());
    }
    let (nx, ny) = (s.lamp_graph().vertex_count(), s.base_graph().vertex_count());
    let k = ctx.rng.gen_range(1..=3);
    let pts: Vec<Vertex> = (0..k).map(|_| ctx.rng.gen_range(0..ny)).collect();
    let base = s.base_graph().convex_hull_of(&pts)?;
    let lamps = Labelling::from_pairs(s.x0(), (0..ny).map(|y| (y, ctx.rng.gen_range(0..nx))));
    Ok(Wreath::new(base, lamps))
}

fn wreath_enumeration(m: &Model, ctx: &mut Ctx) -> Result<()> {
    let Some(all) = enumerated(m, ctx) else {
        return Ok(());
    };
    let s = m.space();
    let (x, y) = (s.lamp_graph(), s.base_graph());
    let sorted = all.windows(2).all(|p| p[0] < p[1]);
    ctx.check(sorted, || json!({ "unsorted": true }));
    let Some(o) = metric(y, "base", ctx) else {
        return Ok(());
    };
    let expected =
        o.convex_sets().len() as u128 * (x.vertex_count() as u128).pow(y.vertex_count() as u32);
    ctx.check(
        all.len() as u128 == expected,
        || json!({ "enumerated": all.len(), "expected": expected.to_string() }),
    );
    let ours: BTreeSet<RawWreath> = all.iter().map(|w| raw(m, w)).collect();
    let mut theirs = BTreeSet::new();
    for &c in o.convex_sets() {
        for lamps in 0..(x.vertex_count() as u64).pow(y.vertex_count() as u32) {
            let mut code = lamps;
            let vec: Vec<Vertex> = (0..y.vertex_count())
                .map(|_| {
                    let v = (code % x.vertex_count() as u64) as Vertex;
                    code /= x.vertex_count() as u64;
                    v
                })
                .collect();
            theirs.insert((c, vec));
        }
    }
    ctx.check(
        ours == theirs,
        || json!({ "enumerated": ours.len(), "oracle": theirs.len() }),
    );
    Ok(())
}

fn wreath_metric(m: &Model, ctx: &mut Ctx) -> Result<()> {
    if let Some(all) = enumerated(m, ctx) {
        let n = all.len();
        for i in 0..n {
            for j in 0..n {
                let ok =
                    m.delta_at(i, j) == m.delta_at(j, i) && (m.delta_at(i, j) == 0) == (i == j);
                ctx.check(
                    ok,
                    || json!({ "w1": lit(m, &all[i]), "w2": lit(m, &all[j]) }),
                );
            }
        }
        let exhaustive = n.pow(3) <= EXHAUSTIVE_WORK;
        for [a, b, c] in triples(n, exhaustive, m.bounds().samples, ctx) {
            ctx.check(
                m.delta_at(a, c) <= m.delta_at(a, b) + m.delta_at(b, c),
                || json!({ "triple": [lit(m, &all[a]), lit(m, &all[b]), lit(m, &all[c])] }),
            );
        }
        return Ok(());
    }
    let s = m.space();
    for _ in 0..m.bounds().samples {
        let (a, b, c) = (
            random_wreath(m, ctx)?,
            random_wreath(m, ctx)?,
            random_wreath(m, ctx)?,
        );
        let (ab, bc, ac) = (s.delta(&a, &b)?, s.delta(&b, &c)?, s.delta(&a, &c)?);
        ctx.check(
            ac <= ab + bc && s.delta(&b, &a)? == ab && (ab == 0) == (a == b),
            || json!({ "triple": [lit(m, &a), lit(m, &b), lit(m, &c)] }),
        );
    }
    Ok(())
}

fn wreath_graph_distance(m: &Model, ctx: &mut Ctx) -> Result<()> {
    let s = m.space();
    let moves = match WreathMoves::new(&s.lamp_graph().to_graph(), &s.base_graph().to_graph()) {
        Ok(mv) => mv,
        Err(e) => {
            ctx.note(format!("oracle skipped ({e})"));
            return Ok(());
        }
    };
    if let Some(all) = enumerated(m, ctx) {
        let n = all.len();
        let index: HashMap<RawWreath, usize> = all
            .iter()
            .enumerate()
            .map(|(i, w)| (raw(m, w), i))
            .collect();
        let adjacency: Vec<Vec<usize>> = all
            .iter()
            .map(|w| moves.moves(&raw(m, w)).iter().map(|r| index[r]).collect())
            .collect();
        for (i, w) in all.iter().enumerate() {
            let ours: BTreeSet<usize> = s
                .neighbors(w, usize::MAX)?
                .iter()
                .map(|v| m.index_of(v).expect("in model"))
                .collect();
            let theirs: BTreeSet<usize> = adjacency[i].iter().copied().collect();
            ctx.check(ours == theirs, || json!({ "wreath": lit(m, w), "neighbors": ours.len(), "oracle_moves": theirs.len() }));
        }
        let sources: Vec<usize> = if n * n <= EXHAUSTIVE_WORK {
            (0..n).collect()
        } else {
            (0..m.bounds().samples.min(n))
                .map(|_| ctx.rng.gen_range(0..n))
                .collect()
        };
        for src in sources {
            let dist = bfs_oracle(src, |&v| adjacency[v].clone(), n)?;
            for j in 0..n {
                let bfs = dist.get(&j).copied();
                ctx.check(bfs == Some(m.delta_at(src, j)), || {
                    json!({ "w1": lit(m, &all[src]), "w2": lit(m, &all[j]), "delta": m.delta_at(src, j), "bfs": bfs })
                });
            }
        }
        return Ok(());
    }
    for _ in 0..m.bounds().samples.min(50) {
        let w = random_wreath(m, ctx)?;
        let ball = bfs_ball(raw(m, &w), |r| moves.moves(r), 3, 1_000_000)?;
        for (r, d) in ball {
            let v = from_raw(m, &r)?;
            let delta = s.delta(&w, &v)?;
            ctx.check(
                delta == d,
                || json!({ "w1": lit(m, &w), "w2": lit(m, &v), "delta": delta, "bfs": d }),
            );
        }
    }
    Ok(())
}

fn wreath_median(m: &Model, ctx: &mut Ctx) -> Result<()> {
    let s = m.space();
    let Some(all) = enumerated(m, ctx) else {
        for _ in 0..m.bounds().samples {
            let (a, b, c) = (
                random_wreath(m, ctx)?,
                random_wreath(m, ctx)?,
                random_wreath(m, ctx)?,
            );
            let med = s.wreath_median(&a, &b, &c)?;
            let between = |p: &Wreath, q: &Wreath| -> Result<bool> {
                Ok(s.delta(p, &med)? + s.delta(&med, q)? == s.delta(p, q)?)
            };
            let ok = between(&a, &b)? && between(&b, &c)? && between(&a, &c)?;
            ctx.check(ok, || json!({ "triple": [lit(m, &a), lit(m, &b), lit(m, &c)], "median": lit(m, &med) }));
        }
        return Ok(());
    };
    let n = all.len();
    let exhaustive = n.pow(4) <= EXHAUSTIVE_WORK;
    let between =
        |a: usize, z: usize, b: usize| m.delta_at(a, z) + m.delta_at(z, b) == m.delta_at(a, b);
    for [a, b, c] in triples(n, exhaustive, m.bounds().samples, ctx) {
        let med = s.wreath_median(&all[a], &all[b], &all[c])?;
        let found: Vec<usize> = (0..n)
            .filter(|&z| between(a, z, b) && between(b, z, c) && between(a, z, c))
            .collect();
        ctx.check(found.len() == 1 && all[found[0]] == med, || {
            json!({ "triple": [lit(m, &all[a]), lit(m, &all[b]), lit(m, &all[c])], "median": lit(m, &med),
                    "metric_medians": found.iter().map(|&z| lit(m, &all[z])).collect::<Vec<_>>() })
        });
    }
    Ok(())
}

/// Enumerated wreaths grouped by labelling, each group ordered by base.
fn leaves(all: &[Wreath]) -> Vec<(Labelling, Vec<usize>)> {
    let mut by: HashMap<&Labelling, Vec<usize>> = HashMap::new();
    for (i, w) in all.iter().enumerate() {
        by.entry(&w.lamps).or_default().push(i);
    }
    let mut out: Vec<(Labelling, Vec<usize>)> =
        by.into_iter().map(|(l, v)| (l.clone(), v)).collect();
    out.sort();
    out
}

fn leaf_isometry(m: &Model, ctx: &mut Ctx) -> Result<()> {
    let Some(all) = enumerated(m, ctx) else {
        return Ok(());
    };
    let y = m.space().base_graph();
    for (leaf, members) in leaves(all) {
        for &i in &members {
            for &j in &members {
                let f = y.convex_distance(&all[i].base, &all[j].base)?;
                ctx.check(m.delta_at(i, j) == f, || {
                    json!({ "leaf": lit(m, &all[i]).get("lamps"), "c1": all[i].base.to_vec(), "c2": all[j].base.to_vec(),
                            "delta": m.delta_at(i, j), "family": f, "lamps": format!("{leaf:?}") })
                });
            }
        }
    }
    Ok(())
}

fn leaf_convexity(m: &Model, ctx: &mut Ctx) -> Result<()> {
    let Some(all) = enumerated(m, ctx) else {
        return Ok(());
    };
    let n = all.len();
    let groups = leaves(all);
    let pairs: usize = groups.iter().map(|(_, g)| g.len() * g.len()).sum();
    let exhaustive = pairs.saturating_mul(n) <= EXHAUSTIVE_WORK;
    let check_pair = |i: usize, j: usize, ctx: &mut Ctx| {
        let outside = (0..n).find(|&z| {
            m.delta_at(i, z) + m.delta_at(z, j) == m.delta_at(i, j) && all[z].lamps != all[i].lamps
        });
        ctx.check(outside.is_none(), || {
            json!({ "w1": lit(m, &all[i]), "w2": lit(m, &all[j]), "outside": outside.map(|z| lit(m, &all[z])) })
        });
    };
    if exhaustive {
        for (_, members) in &groups {
            for &i in members {
                for &j in members {
                    check_pair(i, j, ctx);
                }
            }
        }
    } else {
        for _ in 0..m.bounds().samples {
            let (_, members) = &groups[ctx.rng.gen_range(0..groups.len())];
            let i = members[ctx.rng.gen_range(0..members.len())];
            let j = members[ctx.rng.gen_range(0..members.len())];
            check_pair(i, j, ctx);
        }
    }
    Ok(())
}

fn leaf_projection_gate(m: &Model, ctx: &mut Ctx) -> Result<()> {
    let Some(all) = enumerated(m, ctx) else {
        return Ok(());
    };
    let s = m.space();
    let groups = leaves(all);
    let work: usize = groups.iter().map(|(_, g)| g.len()).sum::<usize>() * all.len();
    let picks: Vec<(usize, usize)> = if work <= EXHAUSTIVE_WORK {
        (0..groups.len())
            .flat_map(|l| (0..all.len()).map(move |w| (l, w)))
            .collect()
    } else {
        (0..m.bounds().samples)
            .map(|_| {
                (
                    ctx.rng.gen_range(0..groups.len()),
                    ctx.rng.gen_range(0..all.len()),
                )
            })
            .collect()
    };
    for (l, w) in picks {
        let (leaf, members) = &groups[l];
        let p = s.leaf_projection(leaf, &all[w])?;
        let pi = m.index_of(&p).expect("projection lies in the model");
        let bad = members
            .iter()
            .find(|&&z| m.delta_at(w, z) != m.delta_at(w, pi) + m.delta_at(pi, z));
        ctx.check(p.lamps == *leaf && bad.is_none(), || {
            json!({ "wreath": lit(m, &all[w]), "projection": lit(m, &p), "leaf_point": bad.map(|&z| lit(m, &all[z])) })
        });
    }
    Ok(())
}

fn interval_meets_leaf(m: &Model, ctx: &mut Ctx) -> Result<()> {
    let Some(all) = enumerated(m, ctx) else {
        return Ok(());
    };
    let s = m.space();
    let n = all.len();
    let groups = leaves(all);
    // Each instance costs one criterion evaluation plus a scan of the leaf.
    let work = groups.len().saturating_mul(n * n);
    let picks: Vec<(usize, usize, usize)> = if work <= EXHAUSTIVE_WORK / 10 {
        (0..groups.len())
            .flat_map(|l| (0..n).flat_map(move |a| (0..n).map(move |b| (l, a, b))))
            .collect()
    } else {
        (0..m.bounds().samples)
            .map(|_| {
                (
                    ctx.rng.gen_range(0..groups.len()),
                    ctx.rng.gen_range(0..n),
                    ctx.rng.gen_range(0..n),
                )
            })
            .collect()
    };
    for (l, a, b) in picks {
        let (leaf, members) = &groups[l];
        let criterion = s.interval_meets_leaf(leaf, &all[a], &all[b])?;
        let brute = members
            .iter()
            .any(|&z| m.delta_at(a, z) + m.delta_at(z, b) == m.delta_at(a, b));
        ctx.check(criterion == brute, || {
            json!({ "leaf": format!("{leaf:?}"), "w1": lit(m, &all[a]), "w2": lit(m, &all[b]), "criterion": criterion, "brute_force": brute })
        });
    }
    Ok(())
}

fn action_basepoints_free(m: &Model, ctx: &mut Ctx) -> Result<()> {
    let (a, s) = (&m.action, m.space());
    let lamp = a.lamp_action().stabilizer(s.x0()).len();
    let base = a.base_action().stabilizer(s.y0()).len();
    ctx.check(
        lamp == 1,
        || json!({ "x0": s.x0(), "stabiliser_order": lamp }),
    );
    ctx.check(
        base == 1,
        || json!({ "y0": s.y0(), "stabiliser_order": base }),
    );
    Ok(())
}

type ElementOf = crate::action::WreathElement<crate::action::AnyElement, crate::action::AnyElement>;

/// Group elements to test with: all of them when few, samples otherwise.
fn elements(m: &Model, ctx: &mut Ctx) -> Result<Vec<ElementOf>> {
    match m.action.enumerate_elements(m.bounds().group) {
        Ok(all) if all.len() <= m.bounds().samples => Ok(all),
        Ok(all) => Ok((0..m.bounds().samples)
            .map(|_| all[ctx.rng.gen_range(0..all.len())].clone())
            .collect()),
        Err(Error::TooLarge { .. }) => {
            ctx.note("wreath product too large to enumerate; sampling elements");
            let a = &m.action;
            let hs = a.base_action().elements();
            let gs = a.lamp_action().elements();
            let orbit: Vec<Vertex> = a.orbit().iter().copied().collect();
            (0..m.bounds().samples)
                .map(|_| {
                    let h = hs[ctx.rng.gen_range(0..hs.len())].clone();
                    let lamps: Vec<_> = (0..ctx.rng.gen_range(0..=3))
                        .map(|_| {
                            (
                                orbit[ctx.rng.gen_range(0..orbit.len())],
                                gs[ctx.rng.gen_range(0..gs.len())].clone(),
                            )
                        })
                        .collect();
                    a.element(h, lamps)
                })
                .collect()
        }
        Err(e) => Err(e),
    }
}

fn apply(m: &Model, e: &ElementOf, w: &Wreath) -> Result<Option<Wreath>> {
    match m.action.apply(e, w) {
        Ok(v) => Ok(Some(v)),
        Err(Error::SupportOutsideModel) => Ok(None),
        Err(other) => Err(other),
    }
}

fn truncated(m: &Model) -> bool {
    use crate::action::AnyAction;
    let a = &m.action;
    matches!(a.lamp_action(), AnyAction::Translations(..))
        || matches!(a.base_action(), AnyAction::Translations(..))
}

fn action_laws(m: &Model, ctx: &mut Ctx) -> Result<()> {
    let a = &m.action;
    // Random elements rarely stay inside a truncation; there, use elements
    // that move the basepoint a little and wreaths in its orbit.
    let near = truncated(m);
    let els = if near {
        a.properness_ball(
            m.bounds().ball_radius.min(2),
            crate::action::Truncation::Clip,
        )?
    } else {
        elements(m, ctx)?
    };
    let mut skipped = 0;
    for _ in 0..m.bounds().samples {
        let e1 = &els[ctx.rng.gen_range(0..els.len())];
        let e2 = &els[ctx.rng.gen_range(0..els.len())];
        let w = if near {
            let e3 = &els[ctx.rng.gen_range(0..els.len())];
            a.apply(e3, &m.space().basepoint())?
        } else {
            random_wreath(m, ctx)?
        };
        let id = apply(m, &a.identity(), &w)?;
        ctx.check(id.as_ref() == Some(&w), || json!({ "wreath": lit(m, &w) }));
        let step = match apply(m, e2, &w)? {
            Some(v) => apply(m, e1, &v)?,
            None => None,
        };
        let product = match a.compose(e1, e2) {
            Ok(p) => apply(m, &p, &w)?,
            Err(Error::SupportOutsideModel) => None,
            Err(e) => return Err(e),
        };
        let (Some(step), Some(product)) = (step, product) else {
            skipped += 1;
            continue;
        };
        let back = apply(m, &a.inverse(e1)?, &step)?;
        ctx.check(step == product && back.as_ref() == apply(m, e2, &w)?.as_ref(), || {
            json!({ "e1": e1, "e2": e2, "wreath": lit(m, &w), "sequential": lit(m, &step), "product": lit(m, &product) })
        });
    }
    if skipped > 0 {
        ctx.note(format!("{skipped} samples left the truncated model"));
    }
    Ok(())
}

fn action_isometry(m: &Model, ctx: &mut Ctx) -> Result<()> {
    let s = m.space();
    let gens = m.action.standard_generators();
    if let Some(all) = enumerated(m, ctx) {
        let n = all.len();
        for e in &gens {
            let images: Vec<Option<usize>> = all
                .iter()
                .map(|w| Ok(apply(m, e, w)?.and_then(|v| m.index_of(&v))))
                .collect::<Result<_>>()?;
            let defined: Vec<usize> = (0..n).filter(|&i| images[i].is_some()).collect();
            let distinct: BTreeSet<usize> = defined.iter().map(|&i| images[i].unwrap()).collect();
            ctx.check(
                distinct.len() == defined.len(),
                || json!({ "generator": e, "not_injective": true }),
            );
            if defined.len() < n {
                ctx.note(format!(
                    "generator {}: {} wreaths leave the truncated model",
                    json!(e),
                    n - defined.len()
                ));
            }
            let exhaustive = defined.len().pow(2) <= EXHAUSTIVE_WORK;
            let pairs: Vec<(usize, usize)> = if exhaustive {
                defined
                    .iter()
                    .flat_map(|&i| defined.iter().map(move |&j| (i, j)))
                    .collect()
            } else {
                (0..m.bounds().samples)
                    .map(|_| {
                        (
                            defined[ctx.rng.gen_range(0..defined.len())],
                            defined[ctx.rng.gen_range(0..defined.len())],
                        )
                    })
                    .collect()
            };
            for (i, j) in pairs {
                let (ei, ej) = (images[i].unwrap(), images[j].unwrap());
                ctx.check(m.delta_at(ei, ej) == m.delta_at(i, j), || {
                    json!({ "generator": e, "w1": lit(m, &all[i]), "w2": lit(m, &all[j]),
                            "before": m.delta_at(i, j), "after": m.delta_at(ei, ej) })
                });
            }
        }
        return Ok(());
    }
    for _ in 0..m.bounds().samples {
        let e = &gens[ctx.rng.gen_range(0..gens.len())];
        let (w1, w2) = (random_wreath(m, ctx)?, random_wreath(m, ctx)?);
        if let (Some(a), Some(b)) = (apply(m, e, &w1)?, apply(m, e, &w2)?) {
            let (before, after) = (s.delta(&w1, &w2)?, s.delta(&a, &b)?);
            ctx.check(
                before == after,
                || json!({ "generator": e, "w1": lit(m, &w1), "w2": lit(m, &w2) }),
            );
        }
    }
    Ok(())
}

fn stabilizer(m: &Model, ctx: &mut Ctx) -> Result<()> {
    let a = &m.action;
    let base = m.space().basepoint();
    let stab = a.stabilizer(&base, m.bounds().group)?;
    ctx.check(
        stab == vec![a.identity()],
        || json!({ "wreath": lit(m, &base), "stabiliser": stab }),
    );
    let all = match a.enumerate_elements(m.bounds().group) {
        Ok(all) => all,
        Err(Error::TooLarge { .. }) => {
            ctx.note("wreath product too large to compare stabilisers with brute force");
            return Ok(());
        }
        Err(e) => return Err(e),
    };
    let wreaths: Vec<Wreath> = match m.wreaths() {
        Some(ws) if ws.len() * all.len() <= EXHAUSTIVE_WORK / 10 => ws.to_vec(),
        _ => (0..m.bounds().samples.min(200))
            .map(|_| random_wreath(m, ctx))
            .collect::<Result<_>>()?,
    };
    for w in wreaths {
        let fast = a.stabilizer(&w, m.bounds().group)?;
        let mut brute = Vec::new();
        for e in &all {
            if apply(m, e, &w)?.as_ref() == Some(&w) {
                brute.push(e.clone());
            }
        }
        brute.sort();
        ctx.check(fast == brute, || json!({ "wreath": lit(m, &w), "stabiliser": fast.len(), "brute_force": brute.len() }));
    }
    Ok(())
}

fn properness_ball(m: &Model, ctx: &mut Ctx) -> Result<()> {
    use crate::action::Truncation;
    let a = &m.action;
    let s = m.space();
    let base = s.basepoint();
    let all = match a.enumerate_elements(m.bounds().group) {
        Ok(all) => all,
        Err(Error::TooLarge { .. }) => {
            ctx.note("wreath product too large for the brute-force comparison");
            return Ok(());
        }
        Err(e) => return Err(e),
    };
    let mut moved: Vec<(u64, &ElementOf)> = Vec::new();
    for e in &all {
        if let Some(v) = apply(m, e, &base)? {
            moved.push((s.delta(&v, &base)?, e));
        }
    }
    let reach = moved.iter().map(|&(d, _)| d).max().unwrap_or(0);
    let mut previous: Vec<ElementOf> = Vec::new();
    for r in 0..=m
        .bounds()
        .ball_radius
        .max(reach.min(m.bounds().ball_radius + 4))
    {
        if let Err(e @ Error::TruncationTooSmall { .. }) = a.properness_ball(r, Truncation::Strict)
        {
            ctx.note(format!("R = {r}: {e}; compared within the truncation"));
        }
        let ball = a.properness_ball(r, Truncation::Clip)?;
        let mut brute: Vec<ElementOf> = moved
            .iter()
            .filter(|&&(d, _)| d <= r)
            .map(|&(_, e)| e.clone())
            .collect();
        brute.sort();
        let nested = previous.iter().all(|e| ball.binary_search(e).is_ok());
        ctx.check(
            ball == brute && nested,
            || json!({ "radius": r, "ball": ball.len(), "brute_force": brute.len() }),
        );
        if r >= reach {
            ctx.check(
                ball.len() == moved.len(),
                || json!({ "radius": r, "ball": ball.len(), "representable": moved.len() }),
            );
        }
        previous = ball;
    }
    Ok(())
}

/// Parameters of the lamplighter checks.
#[derive(Debug, Clone)]
pub struct LamplighterBounds {
    /// Radius of the ball around the base wreath compared with breadth-first
    /// distances.
    pub radius: u64,
    /// Radius of the ball within which all pairs are compared.
    pub pair_radius: u64,
    /// Rectangles for the sweep distance have corners in `[-b, b]²`.
    pub tc_box: i64,
    /// Largest number of points to sweep.
    pub tc_points: usize,
    pub samples: usize,
    pub seed: u64,
}

impl Default for LamplighterBounds {
    fn default() -> Self {
        LamplighterBounds {
            radius: 5,
            pair_radius: 2,
            tc_box: 3,
            tc_points: 2,
            samples: 100,
            seed: 0,
        }
    }
}

/// Checks of the grid model of `ℤ ≀ ℤ²`, sorted by name.
pub fn lamplighter_reports(b: &LamplighterBounds) -> Result<Vec<CheckReport>> {
    type Body = fn(&LamplighterBounds, &mut Ctx) -> Result<()>;
    let checks: [(&str, &str, Body); 5] = [
        (
            "lamplighter-action",
            "(p,ψ)·(R,φ) = (R+p, ψ + φ(·−p)) is an isometric action",
            grid_action_check,
        ),
        (
            "lamplighter-ball",
            "δ(w0,w) = path distance under elementary moves",
            grid_ball_check,
        ),
        (
            "lamplighter-left-invariance",
            "d(g,h) = d(1, g⁻¹h) on unit-cell wreaths",
            grid_left_invariance,
        ),
        (
            "lamplighter-pairs",
            "δ(w1,w2) = path distance under elementary moves",
            grid_pairs_check,
        ),
        (
            "lamplighter-tc",
            "TC(R1,F,R2) = 2#H(R1∪R2∪F) − #H(R1) − #H(R2)",
            grid_tc_check,
        ),
    ];
    let mut out = Vec::new();
    for (name, anchor, body) in checks {
        let started = Instant::now();
        let mut ctx = Ctx::new(b.seed, name);
        if let Err(e) = body(b, &mut ctx) {
            ctx.fail(json!({ "error": e.to_string() }));
        }
        out.push(ctx.finish(name, anchor, started));
    }
    Ok(out)
}

const GRID_BALL_NODES: usize = 5_000_000;

fn grid_ball_check(b: &LamplighterBounds, ctx: &mut Ctx) -> Result<()> {
    let base = GridWreath::base();
    // One layer further, so wreaths just outside the ball are seen too.
    let ball = oracle::grid_ball(b.radius + 1, GRID_BALL_NODES)?;
    let mut entries: Vec<(&GridWreath, &u64)> = ball.iter().collect();
    entries.sort_by(|p, q| (p.1, p.0).cmp(&(q.1, q.0)));
    for (w, &d) in entries {
        let delta = grid_delta(&base, w);
        ctx.check(
            delta == d,
            || json!({ "wreath": w, "delta": delta, "bfs": d }),
        );
    }
    ctx.note(format!(
        "{} wreaths within distance {}",
        ball.len(),
        b.radius + 1
    ));
    Ok(())
}

fn grid_pairs_check(b: &LamplighterBounds, ctx: &mut Ctx) -> Result<()> {
    let mut ball: Vec<GridWreath> = oracle::grid_ball(b.pair_radius, GRID_BALL_NODES)?
        .into_keys()
        .collect();
    ball.sort();
    for a in &ball {
        let from_a = bfs_ball(
            a.clone(),
            crate::lamplighter::elementary_moves,
            2 * b.pair_radius,
            GRID_BALL_NODES,
        )?;
        for w in &ball {
            let delta = grid_delta(a, w);
            let d = from_a.get(w).copied();
            ctx.check(
                Some(delta) == d,
                || json!({ "w1": a, "w2": w, "delta": delta, "bfs": d }),
            );
        }
    }
    Ok(())
}

/// The dihedral symmetries of the square acting on points.
fn symmetries() -> [fn(Point) -> Point; 8] {
    [
        |(x, y)| (x, y),
        |(x, y)| (-y, x),
        |(x, y)| (-x, -y),
        |(x, y)| (y, -x),
        |(x, y)| (-x, y),
        |(x, y)| (x, -y),
        |(x, y)| (y, x),
        |(x, y)| (-y, -x),
    ]
}

fn grid_tc_check(b: &LamplighterBounds, ctx: &mut Ctx) -> Result<()> {
    // Rectangles have corners in [-box, box]; the search may use one more
    // unit on each side, which contains every shortest sweep (clamping a
    // path to the bounding box of R1, R2 and F never lengthens it).
    let inner = 2 * b.tc_box - 1;
    let moves = RectangleMoves::new(inner + 2);
    let rects: Vec<usize> = (0..moves.rectangles().len())
        .filter(|&i| {
            moves.rectangles()[i]
                .doubled()
                .iter()
                .all(|c| c.abs() <= inner)
        })
        .collect();
    let pts: Vec<Point> = (-b.tc_box..=b.tc_box)
        .flat_map(|x| (-b.tc_box..=b.tc_box).map(move |y| (x, y)))
        .collect();
    let mut sets: Vec<Vec<Point>> = vec![Vec::new()];
    for k in 1..=b.tc_points.min(2) {
        for (i, &p) in pts.iter().enumerate() {
            if k == 1 {
                sets.push(vec![p]);
            } else {
                for &q in &pts[i + 1..] {
                    sets.push(vec![p, q]);
                }
            }
        }
    }
    // Keep one point set per symmetry class; the rectangle range is symmetric.
    let canonical = |f: &[Point]| {
        symmetries()
            .iter()
            .map(|s| {
                let mut v: Vec<Point> = f.iter().map(|&p| s(p)).collect();
                v.sort();
                v
            })
            .min()
            .unwrap()
    };
    sets.retain(|f| canonical(f) == *f);
    let mut witnesses: Vec<(u64, Value)> = Vec::new();
    for f in &sets {
        for &r1 in &rects {
            let dist = moves.constrained_distances(r1, f);
            for &r2 in &rects {
                let (a, c) = (moves.rectangles()[r1], moves.rectangles()[r2]);
                let formula = tc(&a, f, &c);
                let bfs = dist[r2] as u64;
                ctx.check(
                    formula == bfs,
                    || json!({ "r1": a, "f": f, "r2": c, "formula": formula, "bfs": bfs }),
                );
                if formula != bfs {
                    witnesses.push((
                        formula + f.len() as u64,
                        json!({ "r1": a, "f": f, "r2": c }),
                    ));
                }
            }
        }
    }
    if let Some((_, w)) = witnesses.into_iter().min_by_key(|(size, _)| *size) {
        ctx.note(format!("smallest counterexample: {w}"));
    }
    ctx.note(format!(
        "{} point sets up to symmetry, {} rectangles",
        sets.len(),
        rects.len()
    ));
    Ok(())
}

fn random_config(ctx: &mut Ctx, spread: i64) -> GridConfig {
    let k = ctx.rng.gen_range(0..=3);
    GridConfig::from_pairs((0..k).map(|_| {
        (
            (
                ctx.rng.gen_range(-spread..=spread),
                ctx.rng.gen_range(-spread..=spread),
            ),
            ctx.rng.gen_range(-2..=2),
        )
    }))
}

fn random_element(ctx: &mut Ctx) -> GridElement {
    GridElement {
        shift: (ctx.rng.gen_range(-3..=3), ctx.rng.gen_range(-3..=3)),
        lamps: random_config(ctx, 3),
    }
}

fn random_grid_wreath(ctx: &mut Ctx) -> GridWreath {
    let (x0, y0) = (ctx.rng.gen_range(-3..=3), ctx.rng.gen_range(-3..=3));
    let rect = Rectangle::spanning(
        x0,
        x0 + ctx.rng.gen_range(0..3),
        y0,
        y0 + ctx.rng.gen_range(0..3),
    )
    .expect("ordered");
    GridWreath::new(rect, random_config(ctx, 4))
}

fn grid_action_check(b: &LamplighterBounds, ctx: &mut Ctx) -> Result<()> {
    for _ in 0..b.samples {
        let (e1, e2) = (random_element(ctx), random_element(ctx));
        let (w1, w2) = (random_grid_wreath(ctx), random_grid_wreath(ctx));
        let seq = grid_action(&e1, &grid_action(&e2, &w1));
        let prod = grid_action(&e1.compose(&e2), &w1);
        let id = grid_action(&GridElement::identity(), &w1);
        let inv = grid_action(&e1.inverse(), &grid_action(&e1, &w1));
        ctx.check(
            seq == prod && id == w1 && inv == w1,
            || json!({ "e1": e1, "e2": e2, "wreath": w1 }),
        );
        let (before, after) = (
            grid_delta(&w1, &w2),
            grid_delta(&grid_action(&e1, &w1), &grid_action(&e1, &w2)),
        );
        ctx.check(
            before == after,
            || json!({ "e": e1, "w1": w1, "w2": w2, "before": before, "after": after }),
        );
    }
    Ok(())
}

fn grid_left_invariance(b: &LamplighterBounds, ctx: &mut Ctx) -> Result<()> {
    let d = |g: &GridElement, h: &GridElement| grid_delta(&g.orbit_point(), &h.orbit_point());
    for _ in 0..b.samples {
        let (g, h, k) = (
            random_element(ctx),
            random_element(ctx),
            random_element(ctx),
        );
        let ok = d(&g, &h) == d(&GridElement::identity(), &g.inverse().compose(&h))
            && d(&g, &h) == d(&h, &g)
            && (d(&g, &h) == 0) == (g == h)
            && d(&g, &k) <= d(&g, &h) + d(&h, &k);
        ctx.check(ok, || json!({ "g": g, "h": h, "k": k }));
    }
    Ok(())
}
