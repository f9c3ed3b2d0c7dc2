//! Group actions on median graphs by automorphisms.
//!
//! Finite groups are given by generating permutations and closed under
//! composition. Infinite groups are modelled by truncations whose elements
//! act as partial maps: [`PointAction::act`] returns `None` when the image
//! leaves the finite model.

mod wreath_product;

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::fmt::Debug;
use std::hash::Hash;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graphs;
use crate::median::{Graph, MedianGraph};
use crate::Vertex;

pub use wreath_product::{Truncation, WreathElement, WreathModel};

/// Cap on the order of a permutation group closed by enumeration.
pub const DEFAULT_GROUP_BOUND: usize = 100_000;

pub trait PointAction {
    type Element: Clone + Eq + Ord + Hash + Debug + Send + Sync;

    fn graph(&self) -> &MedianGraph;

    fn identity(&self) -> Self::Element;

    /// The product `a·b`, acting by `b` first.
    fn compose(&self, a: &Self::Element, b: &Self::Element) -> Self::Element;

    fn inverse(&self, a: &Self::Element) -> Self::Element;

    /// Image of `v`, or `None` when it falls outside a truncated model.
    fn act(&self, a: &Self::Element, v: Vertex) -> Option<Vertex>;

    /// Every element of the group (or of its truncation), identity first.
    fn elements(&self) -> &[Self::Element];

    /// Radius around `basepoint` inside which the model reproduces the whole
    /// group action; `None` when the model is the exact finite action.
    fn exact_radius(&self, basepoint: Vertex) -> Option<u32>;

    fn is_identity(&self, a: &Self::Element) -> bool {
        *a == self.identity()
    }

    /// Orbit of `v` in first-reached order.
    fn orbit(&self, v: Vertex) -> Vec<Vertex> {
        let mut seen = BTreeMap::new();
        for e in self.elements() {
            if let Some(w) = self.act(e, v) {
                let next = seen.len();
                seen.entry(w).or_insert(next);
            }
        }
        let mut orbit: Vec<_> = seen.into_iter().collect();
        orbit.sort_by_key(|&(_, order)| order);
        orbit.into_iter().map(|(w, _)| w).collect()
    }

    /// Elements fixing `v`.
    fn stabilizer(&self, v: Vertex) -> Vec<Self::Element> {
        self.elements()
            .iter()
            .filter(|e| self.act(e, v) == Some(v))
            .cloned()
            .collect()
    }
}

/// A bijection of `0..n`, stored as the image of each point.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Perm(Vec<Vertex>);

impl Perm {
    pub fn identity(n: usize) -> Perm {
        Perm((0..n).collect())
    }

    pub fn from_images(images: Vec<Vertex>) -> std::result::Result<Perm, String> {
        let n = images.len();
        let mut hit = vec![false; n];
        for &i in &images {
            if i >= n {
                return Err(format!("image {i} out of range 0..{n}"));
            }
            if std::mem::replace(&mut hit[i], true) {
                return Err(format!("image {i} repeated"));
            }
        }
        Ok(Perm(images))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    #[inline]
    pub fn apply(&self, v: Vertex) -> Vertex {
        self.0[v]
    }

    pub fn images(&self) -> &[Vertex] {
        &self.0
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Perm) -> Perm {
        Perm(other.0.iter().map(|&v| self.0[v]).collect())
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0; self.0.len()];
        for (v, &w) in self.0.iter().enumerate() {
            inv[w] = v;
        }
        Perm(inv)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Generator {
    pub name: String,
    pub perm: Vec<Vertex>,
}

/// A finite group of graph automorphisms generated by named permutations.
#[derive(Debug, Clone)]
pub struct PermutationAction {
    graph: MedianGraph,
    generators: Vec<(String, Perm)>,
    elements: Vec<Perm>,
    words: Vec<Vec<(usize, bool)>>,
    index: HashMap<Perm, usize>,
}

impl PermutationAction {
    pub fn new(graph: MedianGraph, generators: &[Generator]) -> Result<Self> {
        Self::with_bound(graph, generators, DEFAULT_GROUP_BOUND)
    }

    pub fn with_bound(graph: MedianGraph, generators: &[Generator], bound: usize) -> Result<Self> {
        let n = graph.vertex_count();
        let mut gens = Vec::with_capacity(generators.len());
        for g in generators {
            if g.perm.len() != n {
                return Err(Error::InvalidPermutation {
                    name: g.name.clone(),
                    reason: format!("length {} for {n} vertices", g.perm.len()),
                });
            }
            let perm =
                Perm::from_images(g.perm.clone()).map_err(|reason| Error::InvalidPermutation {
                    name: g.name.clone(),
                    reason,
                })?;
            let preserves = graph
                .edges()
                .iter()
                .all(|&(u, v)| graph.is_adjacent(perm.apply(u), perm.apply(v)));
            if !preserves {
                return Err(Error::NotAutomorphism {
                    name: g.name.clone(),
                });
            }
            gens.push((g.name.clone(), perm));
        }

        // Breadth-first closure; generator i is tried before its inverse.
        let identity = Perm::identity(n);
        let mut elements = vec![identity.clone()];
        let mut words = vec![Vec::new()];
        let mut index = HashMap::from([(identity, 0)]);
        let mut queue = VecDeque::from([0]);
        while let Some(i) = queue.pop_front() {
            for (gi, (_, g)) in gens.iter().enumerate() {
                for inverse in [false, true] {
                    let step = if inverse { g.inverse() } else { g.clone() };
                    let next = step.compose(&elements[i]);
                    if index.contains_key(&next) {
                        continue;
                    }
                    if elements.len() >= bound {
                        return Err(Error::TooLarge {
                            what: "permutation group",
                            size: elements.len() as u128 + 1,
                            bound: bound as u128,
                        });
                    }
                    let mut word = words[i].clone();
                    word.push((gi, inverse));
                    index.insert(next.clone(), elements.len());
                    queue.push_back(elements.len());
                    elements.push(next);
                    words.push(word);
                }
            }
        }
        Ok(PermutationAction {
            graph,
            generators: gens,
            elements,
            words,
            index,
        })
    }

    /// The trivial group acting on `graph`.
    pub fn trivial(graph: MedianGraph) -> Self {
        Self::new(graph, &[]).expect("trivial group is valid")
    }

    pub fn generators(&self) -> &[(String, Perm)] {
        &self.generators
    }

    pub fn generator_specs(&self) -> Vec<Generator> {
        self.generators
            .iter()
            .map(|(name, p)| Generator {
                name: name.clone(),
                perm: p.images().to_vec(),
            })
            .collect()
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn index_of(&self, p: &Perm) -> Option<usize> {
        self.index.get(p).copied()
    }

    /// Generator word reaching `p` first in breadth-first order, written as a
    /// product whose rightmost factor acts first.
    pub fn word(&self, p: &Perm) -> Option<String> {
        let word = &self.words[self.index_of(p)?];
        if word.is_empty() {
            return Some("1".to_owned());
        }
        Some(
            word.iter()
                .rev()
                .map(|&(g, inv)| {
                    let name = &self.generators[g].0;
                    if inv {
                        format!("{name}^-1")
                    } else {
                        name.clone()
                    }
                })
                .collect::<Vec<_>>()
                .join(" "),
        )
    }

    /// First element in breadth-first order mapping `from` to `to`.
    pub fn transporter(&self, from: Vertex, to: Vertex) -> Option<&Perm> {
        self.elements.iter().find(|e| e.apply(from) == to)
    }
}

impl PointAction for PermutationAction {
    type Element = Perm;

    fn graph(&self) -> &MedianGraph {
        &self.graph
    }

    fn identity(&self) -> Perm {
        Perm::identity(self.graph.vertex_count())
    }

    fn compose(&self, a: &Perm, b: &Perm) -> Perm {
        a.compose(b)
    }

    fn inverse(&self, a: &Perm) -> Perm {
        a.inverse()
    }

    fn act(&self, a: &Perm, v: Vertex) -> Option<Vertex> {
        Some(a.apply(v))
    }

    fn elements(&self) -> &[Perm] {
        &self.elements
    }

    fn exact_radius(&self, _basepoint: Vertex) -> Option<u32> {
        None
    }
}

/// The integers acting on themselves by translation, truncated to the path
/// `0 - 1 - ... - (len-1)`. Elements are the shifts keeping the basepoint
/// inside the path.
#[derive(Debug, Clone)]
pub struct TranslationAction {
    graph: MedianGraph,
    basepoint: Vertex,
    elements: Vec<i64>,
}

impl TranslationAction {
    pub fn new(len: usize, basepoint: Vertex) -> Result<Self> {
        let graph = MedianGraph::verify(&graphs::path(len))?;
        graph.check_vertex(basepoint)?;
        let b = basepoint as i64;
        let mut elements = vec![0];
        for k in 1..len as i64 {
            for s in [k, -k] {
                if (0..len as i64).contains(&(b + s)) {
                    elements.push(s);
                }
            }
        }
        Ok(TranslationAction {
            graph,
            basepoint,
            elements,
        })
    }

    pub fn basepoint(&self) -> Vertex {
        self.basepoint
    }
}

impl PointAction for TranslationAction {
    type Element = i64;

    fn graph(&self) -> &MedianGraph {
        &self.graph
    }

    fn identity(&self) -> i64 {
        0
    }

    fn compose(&self, a: &i64, b: &i64) -> i64 {
        a + b
    }

    fn inverse(&self, a: &i64) -> i64 {
        -a
    }

    fn act(&self, a: &i64, v: Vertex) -> Option<Vertex> {
        let w = v as i64 + a;
        (0..self.graph.vertex_count() as i64)
            .contains(&w)
            .then_some(w as Vertex)
    }

    fn elements(&self) -> &[i64] {
        &self.elements
    }

    fn exact_radius(&self, basepoint: Vertex) -> Option<u32> {
        let last = self.graph.vertex_count() - 1;
        Some(basepoint.min(last - basepoint) as u32)
    }
}

/// Either kind of action, as loaded from an action document.
#[derive(Debug, Clone)]
pub enum AnyAction {
    Permutations(PermutationAction, Vec<AnyElement>),
    Translations(TranslationAction, Vec<AnyElement>),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(untagged)]
pub enum AnyElement {
    Perm(Perm),
    Shift(i64),
}

impl From<PermutationAction> for AnyAction {
    fn from(a: PermutationAction) -> Self {
        let els = a.elements().iter().cloned().map(AnyElement::Perm).collect();
        AnyAction::Permutations(a, els)
    }
}

impl From<TranslationAction> for AnyAction {
    fn from(a: TranslationAction) -> Self {
        let els = a
            .elements()
            .iter()
            .copied()
            .map(AnyElement::Shift)
            .collect();
        AnyAction::Translations(a, els)
    }
}

impl AnyAction {
    pub fn as_permutations(&self) -> Option<&PermutationAction> {
        match self {
            AnyAction::Permutations(a, _) => Some(a),
            AnyAction::Translations(..) => None,
        }
    }
}

impl PointAction for AnyAction {
    type Element = AnyElement;

    fn graph(&self) -> &MedianGraph {
        match self {
            AnyAction::Permutations(a, _) => a.graph(),
            AnyAction::Translations(a, _) => a.graph(),
        }
    }

    fn identity(&self) -> AnyElement {
        match self {
            AnyAction::Permutations(a, _) => AnyElement::Perm(a.identity()),
            AnyAction::Translations(..) => AnyElement::Shift(0),
        }
    }

    fn compose(&self, a: &AnyElement, b: &AnyElement) -> AnyElement {
        match (a, b) {
            (AnyElement::Perm(a), AnyElement::Perm(b)) => AnyElement::Perm(a.compose(b)),
            (AnyElement::Shift(a), AnyElement::Shift(b)) => AnyElement::Shift(a + b),
            _ => panic!("elements of different actions"),
        }
    }

    fn inverse(&self, a: &AnyElement) -> AnyElement {
        match a {
            AnyElement::Perm(p) => AnyElement::Perm(p.inverse()),
            AnyElement::Shift(k) => AnyElement::Shift(-k),
        }
    }

    fn act(&self, a: &AnyElement, v: Vertex) -> Option<Vertex> {
        match (self, a) {
            (AnyAction::Permutations(s, _), AnyElement::Perm(p)) => s.act(p, v),
            (AnyAction::Translations(s, _), AnyElement::Shift(k)) => s.act(k, v),
            _ => panic!("element does not belong to this action"),
        }
    }

    fn elements(&self) -> &[AnyElement] {
        match self {
            AnyAction::Permutations(_, e) | AnyAction::Translations(_, e) => e,
        }
    }

    fn exact_radius(&self, basepoint: Vertex) -> Option<u32> {
        match self {
            AnyAction::Permutations(a, _) => a.exact_radius(basepoint),
            AnyAction::Translations(a, _) => a.exact_radius(basepoint),
        }
    }
}

/// Action document:
/// `{ "graph": {...}, "generators": [{ "name": "a", "perm": [...] }] }` or
/// `{ "translation": { "length": n } }`, each with an optional `"basepoint"`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ActionDocument {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub graph: Option<Graph>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub generators: Vec<Generator>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub translation: Option<TranslationSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub basepoint: Option<Vertex>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TranslationSpec {
    pub length: usize,
}

impl ActionDocument {
    pub fn basepoint(&self) -> Vertex {
        self.basepoint.unwrap_or(0)
    }

    pub fn build(&self) -> Result<AnyAction> {
        match (&self.graph, &self.translation) {
            (Some(g), None) => {
                let graph = MedianGraph::verify(g)?;
                Ok(PermutationAction::new(graph, &self.generators)?.into())
            }
            (None, Some(t)) => {
                if !self.generators.is_empty() {
                    return Err(Error::InvalidDocument(
                        "translation actions take no generators".into(),
                    ));
                }
                Ok(TranslationAction::new(t.length, self.basepoint())?.into())
            }
            _ => Err(Error::InvalidDocument(
                "action needs exactly one of \"graph\" or \"translation\"".into(),
            )),
        }
    }

    pub fn from_action(a: &PermutationAction, basepoint: Option<Vertex>) -> Self {
        ActionDocument {
            graph: Some(a.graph().to_graph()),
            generators: a.generator_specs(),
            translation: None,
            basepoint,
        }
    }
}

/// Result of [`augment_free_basepoint`].
#[derive(Debug, Clone)]
pub struct Augmented {
    pub action: PermutationAction,
    /// The pendant `(x0, 1)`, whose stabiliser is trivial.
    pub basepoint: Vertex,
    /// `(x, k)` for each pendant vertex `n + i`.
    pub pendants: Vec<(Vertex, Perm)>,
}

/// Attaches a pendant vertex `(x, k)` to every orbit point `x` of `x0` for
/// every `k` in the stabiliser of `x`, and extends the action by
/// `g·(x, k) = (gx, g k h_x h_{gx}⁻¹)`, where `h_x` is the transporter from
/// `x0` to `x` chosen first in breadth-first order.
pub fn augment_free_basepoint(action: &PermutationAction, x0: Vertex) -> Result<Augmented> {
    let g = action.graph();
    g.check_vertex(x0)?;
    let n = g.vertex_count();
    let mut orbit = action.orbit(x0);
    orbit.sort_unstable();

    let transporter: BTreeMap<Vertex, Perm> = orbit
        .iter()
        .map(|&x| {
            (
                x,
                action
                    .transporter(x0, x)
                    .expect("orbit point is reachable")
                    .clone(),
            )
        })
        .collect();
    let mut pendants = Vec::new();
    let mut pendant_id: HashMap<(Vertex, Perm), Vertex> = HashMap::new();
    for &x in &orbit {
        for k in action.stabilizer(x) {
            pendant_id.insert((x, k.clone()), n + pendants.len());
            pendants.push((x, k));
        }
    }

    let mut edges = g.to_graph().edges;
    edges.extend(pendants.iter().enumerate().map(|(i, (x, _))| [*x, n + i]));
    let augmented = MedianGraph::verify(&Graph {
        vertices: n + pendants.len(),
        edges,
    })?;

    let generators: Vec<Generator> = action
        .generators()
        .iter()
        .map(|(name, perm)| {
            let mut images = perm.images().to_vec();
            for (x, k) in &pendants {
                let gx = perm.apply(*x);
                let label = perm
                    .compose(k)
                    .compose(&transporter[x])
                    .compose(&transporter[&gx].inverse());
                images.push(pendant_id[&(gx, label)]);
            }
            Generator {
                name: name.clone(),
                perm: images,
            }
        })
        .collect();
    let extended = PermutationAction::new(augmented, &generators)?;
    let basepoint = pendant_id[&(x0, Perm::identity(n))];
    Ok(Augmented {
        action: extended,
        basepoint,
        pendants,
    })
}
