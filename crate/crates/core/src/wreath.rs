//! The space of wreaths over a lamp graph `X` and a base graph `Y`.
//!
//! A wreath `(C, φ)` is a convex set `C` of `Y` together with a finitely
//! supported lamp labelling `φ: Y → X` (default `x0`). The distance is
//!
//! ```text
//! δ((C1, φ1), (C2, φ2)) = 2·#H(C1 ∪ C2 ∪ φ1Δφ2) − #H(C1) − #H(C2) + Σ_y d_X(φ1(y), φ2(y))
//! ```
//!
//! where `φ1Δφ2` is the set of base points at which the labellings differ.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::bitset::VertexSet;
use crate::convex::ConvexSet;
use crate::error::{Error, Result};
use crate::median::MedianGraph;
use crate::Vertex;

/// Default cap on the number of wreaths a finite model may enumerate.
pub const DEFAULT_WREATH_BOUND: u128 = 200_000;

/// A finitely supported map `Y → X`, stored as overrides of a default lamp.
///
/// Canonical: no override equals the default.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Labelling {
    default: Vertex,
    overrides: BTreeMap<Vertex, Vertex>,
}

impl Labelling {
    pub fn constant(default: Vertex) -> Self {
        Labelling {
            default,
            overrides: BTreeMap::new(),
        }
    }

    pub fn from_pairs(default: Vertex, pairs: impl IntoIterator<Item = (Vertex, Vertex)>) -> Self {
        let mut l = Self::constant(default);
        for (y, x) in pairs {
            l.set(y, x);
        }
        l
    }

    pub fn default_lamp(&self) -> Vertex {
        self.default
    }

    #[inline]
    pub fn get(&self, y: Vertex) -> Vertex {
        self.overrides.get(&y).copied().unwrap_or(self.default)
    }

    pub fn set(&mut self, y: Vertex, x: Vertex) {
        if x == self.default {
            self.overrides.remove(&y);
        } else {
            self.overrides.insert(y, x);
        }
    }

    pub fn with(&self, y: Vertex, x: Vertex) -> Self {
        let mut l = self.clone();
        l.set(y, x);
        l
    }

    pub fn overrides(&self) -> &BTreeMap<Vertex, Vertex> {
        &self.overrides
    }

    pub fn support(&self) -> impl Iterator<Item = Vertex> + '_ {
        self.overrides.keys().copied()
    }

    /// Points where either labelling is not the default.
    fn joint_support<'a>(&'a self, other: &'a Labelling) -> impl Iterator<Item = Vertex> + 'a {
        let keys: BTreeSet<Vertex> = self.support().chain(other.support()).collect();
        keys.into_iter()
    }

    /// `φ1Δφ2` as a vertex set over a base graph with `universe` vertices.
    pub fn difference_set(&self, other: &Labelling, universe: usize) -> VertexSet {
        VertexSet::from_iter_in(
            universe,
            self.joint_support(other)
                .filter(|&y| self.get(y) != other.get(y)),
        )
    }
}

impl fmt::Debug for Labelling {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{:?}", self.default, self.overrides)
    }
}

/// A leaf `{ (C, φ) : C convex }` is identified by its labelling.
pub type Leaf = Labelling;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Wreath {
    pub base: ConvexSet,
    pub lamps: Labelling,
}

impl Wreath {
    pub fn new(base: ConvexSet, lamps: Labelling) -> Self {
        Wreath { base, lamps }
    }
}

impl fmt::Debug for Wreath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?}, {:?})", self.base.members(), self.lamps)
    }
}

/// Serialized form: `{ "base": [ids], "lamps": { "y": x, ... } }`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WreathLiteral {
    pub base: Vec<Vertex>,
    #[serde(default)]
    pub lamps: BTreeMap<Vertex, Vertex>,
}

/// A finite model of the space of wreaths.
#[derive(Debug, Clone)]
pub struct WreathSpace {
    lamp: MedianGraph,
    base: MedianGraph,
    x0: Vertex,
    y0: Vertex,
}

impl WreathSpace {
    pub fn new(lamp: MedianGraph, base: MedianGraph, x0: Vertex, y0: Vertex) -> Result<Self> {
        lamp.check_vertex(x0)?;
        base.check_vertex(y0)?;
        Ok(WreathSpace { lamp, base, x0, y0 })
    }

    /// Lamp graph `X`.
    pub fn lamp_graph(&self) -> &MedianGraph {
        &self.lamp
    }

    /// Base graph `Y`.
    pub fn base_graph(&self) -> &MedianGraph {
        &self.base
    }

    pub fn x0(&self) -> Vertex {
        self.x0
    }

    pub fn y0(&self) -> Vertex {
        self.y0
    }

    /// The constant labelling `ξ ≡ x0`.
    pub fn constant_lamps(&self) -> Labelling {
        Labelling::constant(self.x0)
    }

    /// `({y0}, ξ)`.
    pub fn basepoint(&self) -> Wreath {
        Wreath::new(self.base.singleton(self.y0), self.constant_lamps())
    }

    pub fn check_labelling(&self, l: &Labelling) -> Result<()> {
        if l.default != self.x0 {
            return Err(Error::AmbientMismatch);
        }
        for (&y, &x) in &l.overrides {
            self.base.check_vertex(y)?;
            self.lamp.check_vertex(x)?;
        }
        Ok(())
    }

    pub fn check_wreath(&self, w: &Wreath) -> Result<()> {
        self.base.check_ambient(&w.base)?;
        self.check_labelling(&w.lamps)
    }

    pub fn wreath(
        &self,
        base: &[Vertex],
        lamps: impl IntoIterator<Item = (Vertex, Vertex)>,
    ) -> Result<Wreath> {
        let base = self.base.convex_set_of(base)?;
        let w = Wreath::new(base, Labelling::from_pairs(self.x0, lamps));
        self.check_wreath(&w)?;
        Ok(w)
    }

    pub fn parse(&self, lit: &WreathLiteral) -> Result<Wreath> {
        self.wreath(&lit.base, lit.lamps.iter().map(|(&y, &x)| (y, x)))
    }

    pub fn literal(&self, w: &Wreath) -> WreathLiteral {
        WreathLiteral {
            base: w.base.to_vec(),
            lamps: w.lamps.overrides.clone(),
        }
    }

    fn lamp_sum(&self, l1: &Labelling, l2: &Labelling) -> u64 {
        l1.joint_support(l2)
            .map(|y| self.lamp.distance(l1.get(y), l2.get(y)) as u64)
            .sum()
    }

    /// The wreath distance `δ`.
    pub fn delta(&self, w1: &Wreath, w2: &Wreath) -> Result<u64> {
        self.check_wreath(w1)?;
        self.check_wreath(w2)?;
        Ok(self.delta_unchecked(w1, w2))
    }

    pub(crate) fn delta_unchecked(&self, w1: &Wreath, w2: &Wreath) -> u64 {
        let n = self.base.vertex_count();
        let mut span = w1.lamps.difference_set(&w2.lamps, n);
        span.union_with(w1.base.members());
        span.union_with(w2.base.members());
        let joint = self.base.crossing_count(&span) as u64;
        2 * joint - w1.base.crossing().len() as u64 - w2.base.crossing().len() as u64
            + self.lamp_sum(&w1.lamps, &w2.lamps)
    }

    /// `p_φ(C, ψ) = (hull(C ∪ ψΔφ), φ)`: the nearest point of the leaf of `φ`.
    pub fn leaf_projection(&self, leaf: &Leaf, w: &Wreath) -> Result<Wreath> {
        self.check_labelling(leaf)?;
        self.check_wreath(w)?;
        let mut span = w.lamps.difference_set(leaf, self.base.vertex_count());
        span.union_with(w.base.members());
        Ok(Wreath::new(self.base.convex_hull(&span)?, leaf.clone()))
    }

    /// The unique median of three wreaths: lamps are the pointwise medians in
    /// `X`, and the base is the hull of all `m(y1, y2, y3)` with
    /// `yi ∈ Ci ∪ (φiΔφ)`.
    pub fn wreath_median(&self, w1: &Wreath, w2: &Wreath, w3: &Wreath) -> Result<Wreath> {
        for w in [w1, w2, w3] {
            self.check_wreath(w)?;
        }
        let support: BTreeSet<Vertex> = w1
            .lamps
            .support()
            .chain(w2.lamps.support())
            .chain(w3.lamps.support())
            .collect();
        let lamps = Labelling::from_pairs(
            self.x0,
            support.into_iter().map(|y| {
                (
                    y,
                    self.lamp
                        .median(w1.lamps.get(y), w2.lamps.get(y), w3.lamps.get(y)),
                )
            }),
        );
        let n = self.base.vertex_count();
        let reach = |w: &Wreath| {
            let mut s = w.lamps.difference_set(&lamps, n);
            s.union_with(w.base.members());
            s.to_vec()
        };
        let (p1, p2, p3) = (reach(w1), reach(w2), reach(w3));
        let mut generators = self.base.empty_set();
        for &a in &p1 {
            for &b in &p2 {
                for &c in &p3 {
                    generators.insert(self.base.median(a, b, c));
                }
            }
        }
        Ok(Wreath::new(self.base.convex_hull(&generators)?, lamps))
    }

    /// All wreaths at distance exactly one from `w`.
    ///
    /// Candidates: grow the base by `hull(C ∪ {v})` for `v` adjacent to `C`;
    /// shrink it to `C ∩ D` for each halfspace `D` of a wall crossing `C`;
    /// move one lamp at `y ∈ C` to an adjacent vertex of `X`. Each candidate
    /// is kept only if `δ = 1`.
    pub fn neighbors(&self, w: &Wreath, bound: usize) -> Result<Vec<Wreath>> {
        self.check_wreath(w)?;
        let members = w.base.members();
        let mut candidates: BTreeSet<Wreath> = BTreeSet::new();
        let push = |candidates: &mut BTreeSet<Wreath>, c: Wreath| -> Result<()> {
            candidates.insert(c);
            if candidates.len() > bound {
                return Err(Error::TooLarge {
                    what: "neighbor candidates",
                    size: candidates.len() as u128,
                    bound: bound as u128,
                });
            }
            Ok(())
        };

        let mut boundary = self.base.empty_set();
        for v in members.iter() {
            for &u in self.base.neighbors(v) {
                if !members.contains(u) {
                    boundary.insert(u);
                }
            }
        }
        for u in boundary.iter() {
            let mut grown = members.clone();
            grown.insert(u);
            push(
                &mut candidates,
                Wreath::new(self.base.convex_hull(&grown)?, w.lamps.clone()),
            )?;
        }
        for wall in w.base.crossing().iter() {
            let wall = &self.base.walls()[wall];
            for side in [wall.side_a(), wall.side_b()] {
                let part = members.intersection(side);
                push(
                    &mut candidates,
                    Wreath::new(self.base.convex_set(part)?, w.lamps.clone()),
                )?;
            }
        }
        for y in members.iter() {
            for &x in self.lamp.neighbors(w.lamps.get(y)) {
                push(
                    &mut candidates,
                    Wreath::new(w.base.clone(), w.lamps.with(y, x)),
                )?;
            }
        }
        Ok(candidates
            .into_iter()
            .filter(|c| self.delta_unchecked(w, c) == 1)
            .collect())
    }

    /// Number of wreaths in the finite model.
    pub fn model_size(&self, convex_count: usize) -> u128 {
        let labellings = (self.lamp.vertex_count() as u128)
            .checked_pow(self.base.vertex_count() as u32)
            .unwrap_or(u128::MAX);
        labellings.saturating_mul(convex_count as u128)
    }

    /// Every wreath of the finite model, canonically ordered.
    pub fn enumerate_wreaths(&self, bound: u128) -> Result<Vec<Wreath>> {
        let bases = self.base.enumerate_convex(usize::MAX)?;
        let size = self.model_size(bases.len());
        if size > bound {
            return Err(Error::TooLarge {
                what: "space of wreaths",
                size,
                bound,
            });
        }
        let labellings = self.enumerate_labellings();
        let mut out = Vec::with_capacity(size as usize);
        for b in &bases {
            for l in &labellings {
                out.push(Wreath::new(b.clone(), l.clone()));
            }
        }
        out.sort();
        Ok(out)
    }

    /// Every labelling `Y → X` (all are finitely supported on a finite base).
    pub fn enumerate_labellings(&self) -> Vec<Labelling> {
        let nx = self.lamp.vertex_count();
        let ny = self.base.vertex_count();
        let mut out = Vec::new();
        let mut digits = vec![0usize; ny];
        loop {
            out.push(Labelling::from_pairs(
                self.x0,
                digits.iter().copied().enumerate(),
            ));
            let mut k = 0;
            loop {
                if k == ny {
                    return out;
                }
                digits[k] += 1;
                if digits[k] < nx {
                    break;
                }
                digits[k] = 0;
                k += 1;
            }
        }
    }

    /// Whether the leaf of `φ` meets the interval between `w1` and `w2`:
    /// exactly when `φ(y) ∈ I(φ1(y), φ2(y))` for every `y`.
    pub fn interval_meets_leaf(&self, leaf: &Leaf, w1: &Wreath, w2: &Wreath) -> Result<bool> {
        self.check_labelling(leaf)?;
        self.check_wreath(w1)?;
        self.check_wreath(w2)?;
        let points: BTreeSet<Vertex> = leaf
            .support()
            .chain(w1.lamps.support())
            .chain(w2.lamps.support())
            .collect();
        Ok(points.into_iter().all(|y| {
            let (a, b, x) = (w1.lamps.get(y), w2.lamps.get(y), leaf.get(y));
            self.lamp.distance(a, x) + self.lamp.distance(x, b) == self.lamp.distance(a, b)
        }))
    }
}
