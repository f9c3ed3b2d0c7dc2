use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use super::PointAction;
use crate::bitset::VertexSet;
use crate::error::{Error, Result};
use crate::wreath::{Labelling, Wreath, WreathSpace};
use crate::Vertex;

/// An element `(h, ψ)` of the wreath product `G ≀ H`.
///
/// `lamps` is `ψ̄` restricted to its support: keys are points of the orbit
/// `H·y0`, values are non-identity elements of `G`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct WreathElement<G, H> {
    pub h: H,
    pub lamps: BTreeMap<Vertex, G>,
}

/// How [`WreathModel::properness_ball`] treats a truncated model that is too
/// small to contain every candidate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Truncation {
    /// Fail with [`Error::TruncationTooSmall`].
    Strict,
    /// Restrict the search to elements representable in the model.
    Clip,
}

/// `G ≀ H` acting on the space of wreaths over `X` (acted on by `G`) and `Y`
/// (acted on by `H`) by
///
/// ```text
/// (h, ψ)·(C, φ) = (hC, y ↦ ψ̄(y)·φ(h⁻¹y))
/// ```
///
/// with `ψ̄(g·y0) = ψ(g)` on the orbit of `y0` and `ψ̄ = 1` elsewhere. Both
/// basepoints must have trivial stabilisers.
#[derive(Debug, Clone)]
pub struct WreathModel<A: PointAction, B: PointAction> {
    space: WreathSpace,
    lamp_action: A,
    base_action: B,
    orbit: BTreeSet<Vertex>,
}

pub type Element<A, B> = WreathElement<<A as PointAction>::Element, <B as PointAction>::Element>;

impl<A: PointAction, B: PointAction> WreathModel<A, B> {
    pub fn new(lamp_action: A, base_action: B, x0: Vertex, y0: Vertex) -> Result<Self> {
        let space = WreathSpace::new(
            lamp_action.graph().clone(),
            base_action.graph().clone(),
            x0,
            y0,
        )?;
        if lamp_action.stabilizer(x0).len() != 1 {
            return Err(Error::BasepointNotFree(x0));
        }
        if base_action.stabilizer(y0).len() != 1 {
            return Err(Error::BasepointNotFree(y0));
        }
        let orbit = base_action.orbit(y0).into_iter().collect();
        Ok(WreathModel {
            space,
            lamp_action,
            base_action,
            orbit,
        })
    }

    pub fn space(&self) -> &WreathSpace {
        &self.space
    }

    pub fn lamp_action(&self) -> &A {
        &self.lamp_action
    }

    pub fn base_action(&self) -> &B {
        &self.base_action
    }

    /// `H·y0` inside the model.
    pub fn orbit(&self) -> &BTreeSet<Vertex> {
        &self.orbit
    }

    pub fn identity(&self) -> Element<A, B> {
        WreathElement {
            h: self.base_action.identity(),
            lamps: BTreeMap::new(),
        }
    }

    /// Builds `(h, ψ)`, dropping identity lamps and rejecting support points
    /// outside the orbit of `y0`.
    pub fn element(
        &self,
        h: B::Element,
        lamps: impl IntoIterator<Item = (Vertex, A::Element)>,
    ) -> Result<Element<A, B>> {
        let mut map = BTreeMap::new();
        for (y, g) in lamps {
            if !self.orbit.contains(&y) {
                return Err(Error::NotInOrbit(y));
            }
            if !self.lamp_action.is_identity(&g) {
                map.insert(y, g);
            }
        }
        Ok(WreathElement { h, lamps: map })
    }

    fn lamp_at<'a>(&self, e: &'a Element<A, B>, y: Vertex) -> Option<&'a A::Element> {
        e.lamps.get(&y)
    }

    /// `(h, ψ)·(C, φ)`.
    pub fn apply(&self, e: &Element<A, B>, w: &Wreath) -> Result<Wreath> {
        self.space.check_wreath(w)?;
        let y_graph = self.space.base_graph();
        let x0 = self.space.x0();
        let h = &e.h;
        let h_inv = self.base_action.inverse(h);

        let mut moved = y_graph.empty_set();
        for c in w.base.members().iter() {
            moved.insert(
                self.base_action
                    .act(h, c)
                    .ok_or(Error::SupportOutsideModel)?,
            );
        }
        for s in w.lamps.support() {
            self.base_action
                .act(h, s)
                .ok_or(Error::SupportOutsideModel)?;
        }
        let base = y_graph.convex_set(moved)?;

        let mut lamps = Labelling::constant(x0);
        for y in y_graph.vertices() {
            let source = self
                .base_action
                .act(&h_inv, y)
                .map_or(x0, |s| w.lamps.get(s));
            let lamp = match self.lamp_at(e, y) {
                Some(g) => self
                    .lamp_action
                    .act(g, source)
                    .ok_or(Error::SupportOutsideModel)?,
                None => source,
            };
            lamps.set(y, lamp);
        }
        Ok(Wreath::new(base, lamps))
    }

    /// `(h1, ψ1)·(h2, ψ2) = (h1h2, y ↦ ψ1(y)·ψ2(h1⁻¹y))`.
    pub fn compose(&self, e1: &Element<A, B>, e2: &Element<A, B>) -> Result<Element<A, B>> {
        let h = self.base_action.compose(&e1.h, &e2.h);
        let mut lamps = e1.lamps.clone();
        for (y2, g2) in &e2.lamps {
            let y = self
                .base_action
                .act(&e1.h, *y2)
                .ok_or(Error::SupportOutsideModel)?;
            let g = match lamps.get(&y) {
                Some(g1) => self.lamp_action.compose(g1, g2),
                None => g2.clone(),
            };
            lamps.insert(y, g);
        }
        self.element(h, lamps)
    }

    /// `(h, ψ)⁻¹ = (h⁻¹, z ↦ ψ(hz)⁻¹)`.
    pub fn inverse(&self, e: &Element<A, B>) -> Result<Element<A, B>> {
        let h_inv = self.base_action.inverse(&e.h);
        let mut lamps = BTreeMap::new();
        for (y, g) in &e.lamps {
            let z = self
                .base_action
                .act(&h_inv, *y)
                .ok_or(Error::SupportOutsideModel)?;
            lamps.insert(z, self.lamp_action.inverse(g));
        }
        self.element(h_inv, lamps)
    }

    /// A generating set: every `(h, 1)` and every `(1, g at y0)`.
    pub fn standard_generators(&self) -> Vec<Element<A, B>> {
        let y0 = self.space.y0();
        let mut out: Vec<_> = self
            .base_action
            .elements()
            .iter()
            .map(|h| WreathElement {
                h: h.clone(),
                lamps: BTreeMap::new(),
            })
            .collect();
        for g in self.lamp_action.elements() {
            if !self.lamp_action.is_identity(g) {
                out.push(WreathElement {
                    h: self.base_action.identity(),
                    lamps: BTreeMap::from([(y0, g.clone())]),
                });
            }
        }
        out
    }

    /// Every element of the (truncated) wreath product.
    pub fn enumerate_elements(&self, bound: u128) -> Result<Vec<Element<A, B>>> {
        let hs = self.base_action.elements();
        let gs = self.lamp_action.elements();
        let size = (gs.len() as u128)
            .checked_pow(self.orbit.len() as u32)
            .and_then(|p| p.checked_mul(hs.len() as u128))
            .unwrap_or(u128::MAX);
        if size > bound {
            return Err(Error::TooLarge {
                what: "wreath product",
                size,
                bound,
            });
        }
        let points: Vec<Vertex> = self.orbit.iter().copied().collect();
        let mut out = Vec::with_capacity(size as usize);
        let mut digits = vec![0usize; points.len()];
        for h in hs {
            digits.iter_mut().for_each(|d| *d = 0);
            loop {
                let lamps = points
                    .iter()
                    .zip(&digits)
                    .filter(|(_, &d)| d != 0)
                    .map(|(&y, &d)| (y, gs[d].clone()))
                    .collect();
                out.push(WreathElement {
                    h: h.clone(),
                    lamps,
                });
                let mut k = 0;
                while k < digits.len() {
                    digits[k] += 1;
                    if digits[k] < gs.len() {
                        break;
                    }
                    digits[k] = 0;
                    k += 1;
                }
                if k == digits.len() {
                    break;
                }
            }
        }
        Ok(out)
    }

    /// `{ (h, ψ) : δ((h, ψ)·({y0}, ξ), ({y0}, ξ)) ≤ R }`.
    ///
    /// The search is pruned in three stages: `d(y0, h·y0) ≤ ⌊R/2⌋`; lamp
    /// support inside the ball of radius `⌊R/2⌋` around `y0`; lamp values
    /// moving `x0` by at most `R`. Survivors are filtered by the exact
    /// distance.
    pub fn properness_ball(&self, radius: u64, policy: Truncation) -> Result<Vec<Element<A, B>>> {
        let x0 = self.space.x0();
        let y0 = self.space.y0();
        let x_graph = self.space.lamp_graph();
        let y_graph = self.space.base_graph();
        let half = radius / 2;
        if policy == Truncation::Strict {
            if let Some(r) = self.base_action.exact_radius(y0) {
                if half > r as u64 {
                    return Err(Error::TruncationTooSmall {
                        side: "base",
                        needed: half,
                        available: r as u64,
                    });
                }
            }
            if let Some(r) = self.lamp_action.exact_radius(x0) {
                if radius > r as u64 {
                    return Err(Error::TruncationTooSmall {
                        side: "lamp",
                        needed: radius,
                        available: r as u64,
                    });
                }
            }
        }

        let hs: Vec<(&B::Element, Vertex)> = self
            .base_action
            .elements()
            .iter()
            .filter_map(|h| self.base_action.act(h, y0).map(|hy| (h, hy)))
            .filter(|&(_, hy)| y_graph.distance(y0, hy) as u64 <= half)
            .collect();
        let support: Vec<Vertex> = self
            .orbit
            .iter()
            .copied()
            .filter(|&s| y_graph.distance(y0, s) as u64 <= half)
            .collect();
        let values: Vec<(&A::Element, u64)> = self
            .lamp_action
            .elements()
            .iter()
            .filter(|g| !self.lamp_action.is_identity(g))
            .filter_map(|g| {
                self.lamp_action
                    .act(g, x0)
                    .map(|gx| (g, x_graph.distance(x0, gx) as u64))
            })
            .filter(|&(_, d)| d <= radius)
            .collect();

        let origin = self.space.basepoint();
        let mut out = Vec::new();
        for (h, hy) in hs {
            let mut span = y_graph.empty_set();
            span.insert(y0);
            span.insert(hy);
            let mut search = BallSearch {
                model: self,
                h,
                radius,
                support: &support,
                values: &values,
                origin: &origin,
                out: &mut out,
            };
            search.descend(0, &mut BTreeMap::new(), span, 0)?;
        }
        out.sort();
        Ok(out)
    }

    /// Every element fixing `w`.
    ///
    /// For each `h` with `hC = C`, the lamp condition `ψ̄(y)·φ(h⁻¹y) = φ(y)`
    /// decouples over `y`, so the stabiliser is a union of products of
    /// per-point choice sets.
    pub fn stabilizer(&self, w: &Wreath, bound: u128) -> Result<Vec<Element<A, B>>> {
        self.space.check_wreath(w)?;
        let x0 = self.space.x0();
        let y_graph = self.space.base_graph();
        let mut out = Vec::new();
        'h: for h in self.base_action.elements() {
            let mut image = y_graph.empty_set();
            for c in w.base.members().iter() {
                match self.base_action.act(h, c) {
                    Some(v) => {
                        image.insert(v);
                    }
                    None => continue 'h,
                }
            }
            if &image != w.base.members() {
                continue;
            }
            if w.lamps
                .support()
                .any(|s| self.base_action.act(h, s).is_none())
            {
                continue;
            }
            let h_inv = self.base_action.inverse(h);
            let mut choices: Vec<(Vertex, Vec<&A::Element>)> = Vec::new();
            for y in y_graph.vertices() {
                let source = self
                    .base_action
                    .act(&h_inv, y)
                    .map_or(x0, |s| w.lamps.get(s));
                let target = w.lamps.get(y);
                if self.orbit.contains(&y) {
                    let ok: Vec<_> = self
                        .lamp_action
                        .elements()
                        .iter()
                        .filter(|g| self.lamp_action.act(g, source) == Some(target))
                        .collect();
                    if ok.is_empty() {
                        continue 'h;
                    }
                    choices.push((y, ok));
                } else if source != target {
                    continue 'h;
                }
            }
            let count = choices
                .iter()
                .try_fold(1u128, |acc, (_, c)| acc.checked_mul(c.len() as u128))
                .unwrap_or(u128::MAX);
            if out.len() as u128 + count > bound {
                return Err(Error::TooLarge {
                    what: "stabiliser",
                    size: out.len() as u128 + count,
                    bound,
                });
            }
            let mut digits = vec![0usize; choices.len()];
            loop {
                let lamps = choices
                    .iter()
                    .zip(&digits)
                    .map(|((y, c), &d)| (*y, c[d].clone()));
                out.push(self.element(h.clone(), lamps)?);
                let mut k = 0;
                while k < digits.len() {
                    digits[k] += 1;
                    if digits[k] < choices[k].1.len() {
                        break;
                    }
                    digits[k] = 0;
                    k += 1;
                }
                if k == digits.len() {
                    break;
                }
            }
        }
        out.sort();
        Ok(out)
    }
}

struct BallSearch<'a, A: PointAction, B: PointAction> {
    model: &'a WreathModel<A, B>,
    h: &'a B::Element,
    radius: u64,
    support: &'a [Vertex],
    values: &'a [(&'a A::Element, u64)],
    origin: &'a Wreath,
    out: &'a mut Vec<Element<A, B>>,
}

impl<A: PointAction, B: PointAction> BallSearch<'_, A, B> {
    fn descend(
        &mut self,
        next: usize,
        lamps: &mut BTreeMap<Vertex, A::Element>,
        span: VertexSet,
        lamp_sum: u64,
    ) -> Result<()> {
        let y_graph = self.model.space.base_graph();
        // Both terms only grow as more support points are added.
        if 2 * y_graph.crossing_count(&span) as u64 + lamp_sum > self.radius {
            return Ok(());
        }
        if next == self.support.len() {
            let e = WreathElement {
                h: self.h.clone(),
                lamps: lamps.clone(),
            };
            match self.model.apply(&e, self.origin) {
                Ok(moved) => {
                    if self.model.space.delta_unchecked(&moved, self.origin) <= self.radius {
                        self.out.push(e);
                    }
                }
                Err(Error::SupportOutsideModel) => {}
                Err(other) => return Err(other),
            }
            return Ok(());
        }
        self.descend(next + 1, lamps, span.clone(), lamp_sum)?;
        let y = self.support[next];
        let mut with_point = span;
        with_point.insert(y);
        for &(g, d) in self.values {
            if lamp_sum + d > self.radius {
                continue;
            }
            lamps.insert(y, g.clone());
            self.descend(next + 1, lamps, with_point.clone(), lamp_sum + d)?;
            lamps.remove(&y);
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::action::{augment_free_basepoint, Generator, PermutationAction, TranslationAction};
    use crate::graphs;
    use crate::median::MedianGraph;

    fn flip_p3() -> PermutationAction {
        let g = MedianGraph::verify(&graphs::path(3)).unwrap();
        PermutationAction::new(
            g,
            &[Generator {
                name: "s".into(),
                perm: vec![2, 1, 0],
            }],
        )
        .unwrap()
    }

    fn k2_swap() -> PermutationAction {
        let g = MedianGraph::verify(&graphs::path(2)).unwrap();
        PermutationAction::new(
            g,
            &[Generator {
                name: "t".into(),
                perm: vec![1, 0],
            }],
        )
        .unwrap()
    }

    #[test]
    fn rejects_basepoints_with_stabilisers() {
        let trivial = PermutationAction::trivial(MedianGraph::verify(&graphs::path(2)).unwrap());
        assert_eq!(
            WreathModel::new(trivial, flip_p3(), 0, 1).unwrap_err(),
            Error::BasepointNotFree(1)
        );
    }

    #[test]
    fn identity_and_base_permutation() {
        // Z/2 swapping K2 acts freely, so no augmentation is needed.
        let trivial = PermutationAction::trivial(MedianGraph::verify(&graphs::path(2)).unwrap());
        let model = WreathModel::new(trivial, k2_swap(), 0, 0).unwrap();
        let w = model.space().basepoint();
        assert_eq!(model.apply(&model.identity(), &w).unwrap(), w);
        let swap = model
            .element(Perm::from_images(vec![1, 0]).unwrap(), [])
            .unwrap();
        assert_eq!(
            model.apply(&swap, &w).unwrap(),
            model.space().wreath(&[1], []).unwrap()
        );
    }

    #[test]
    fn lamp_flip_at_basepoint() {
        let trivial = PermutationAction::trivial(MedianGraph::verify(&graphs::path(2)).unwrap());
        let model = WreathModel::new(k2_swap(), trivial, 0, 0).unwrap();
        let full = model.space().wreath(&[0, 1], []).unwrap();
        let e = model
            .element(
                Perm::identity(2),
                [(0, Perm::from_images(vec![1, 0]).unwrap())],
            )
            .unwrap();
        assert_eq!(
            model.apply(&e, &full).unwrap(),
            model.space().wreath(&[0, 1], [(0, 1)]).unwrap()
        );
        assert_eq!(
            model
                .element(Perm::identity(2), [(1, Perm::identity(2))])
                .unwrap_err(),
            Error::NotInOrbit(1)
        );
    }

    use crate::action::Perm;

    #[test]
    fn literal_pullback_by_h_is_not_isometric() {
        // With lamps y ↦ φ(h·y) instead of φ(h⁻¹·y), a shift moves the base
        // and the lamp difference in opposite directions.
        let model = WreathModel::new(
            TranslationAction::new(3, 1).unwrap(),
            TranslationAction::new(7, 3).unwrap(),
            1,
            3,
        )
        .unwrap();
        let s = model.space();
        let a = s.wreath(&[3], []).unwrap();
        let b = s.wreath(&[3], [(3, 2)]).unwrap();
        let e = model.element(1, []).unwrap();
        let (ea, eb) = (model.apply(&e, &a).unwrap(), model.apply(&e, &b).unwrap());
        assert_eq!(s.delta(&ea, &eb).unwrap(), s.delta(&a, &b).unwrap());
        let pulled = s.wreath(&[4], [(2, 2)]).unwrap();
        assert_eq!(s.delta(&ea, &pulled).unwrap(), 5);
    }

    #[test]
    fn composition_matches_sequential_application() {
        let aug = augment_free_basepoint(&flip_p3(), 1).unwrap();
        let trivial = PermutationAction::trivial(MedianGraph::verify(&graphs::path(2)).unwrap());
        let model = WreathModel::new(aug.action.clone(), trivial, aug.basepoint, 0).unwrap();
        let elements = model.enumerate_elements(1000).unwrap();
        let wreaths = model.space().enumerate_wreaths(10_000).unwrap();
        for e1 in &elements {
            let inv = model.inverse(e1).unwrap();
            assert_eq!(model.compose(e1, &inv).unwrap(), model.identity());
            for e2 in &elements {
                let e12 = model.compose(e1, e2).unwrap();
                for w in wreaths.iter().step_by(7) {
                    let seq = model.apply(e1, &model.apply(e2, w).unwrap()).unwrap();
                    assert_eq!(model.apply(&e12, w).unwrap(), seq);
                }
            }
        }
    }

    #[test]
    fn ball_of_radius_zero_is_identity() {
        let model = WreathModel::new(
            TranslationAction::new(5, 2).unwrap(),
            TranslationAction::new(7, 3).unwrap(),
            2,
            3,
        )
        .unwrap();
        assert_eq!(
            model.properness_ball(0, Truncation::Strict).unwrap(),
            vec![model.identity()]
        );
        assert!(matches!(
            model.properness_ball(3, Truncation::Strict),
            Err(Error::TruncationTooSmall { side: "lamp", .. })
        ));
        assert!(model.properness_ball(3, Truncation::Clip).unwrap().len() > 1);
    }

    #[test]
    fn stabiliser_of_basepoint_is_trivial() {
        let model = WreathModel::new(
            TranslationAction::new(5, 2).unwrap(),
            TranslationAction::new(7, 3).unwrap(),
            2,
            3,
        )
        .unwrap();
        let w = model.space().basepoint();
        assert_eq!(model.stabilizer(&w, 1000).unwrap(), vec![model.identity()]);
    }
}
