//! Model documents and the named property checks run against them.
//!
//! A document fixes two median graphs (lamps `X`, base `Y`), basepoints and
//! optional group actions. [`run_check_suite`] runs every registered check (or
//! a selection) and returns one [`CheckReport`] per check, sorted by name.

pub mod checks;
pub mod dot;
pub mod oracle;

use std::sync::OnceLock;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::action::{
    augment_free_basepoint, AnyAction, Generator, PermutationAction, TranslationAction, WreathModel,
};
use crate::error::{Error, Result};
use crate::graphs;
use crate::median::{Graph, MedianGraph};
use crate::wreath::{Wreath, WreathSpace, DEFAULT_WREATH_BOUND};
use crate::Vertex;

pub use checks::{lamplighter_reports, registry, CheckSpec, LamplighterBounds};

/// Failures kept per report; the count of all failures is kept separately.
pub const MAX_WITNESSES: usize = 5;

/// Largest model for which a full table of wreath distances is built.
pub const DISTANCE_TABLE_LIMIT: usize = 2048;

/// `{ "generators": [...] }` or `{ "translation": true }` on the document's
/// graph.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ActionSpec {
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub generators: Vec<Generator>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub translation: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct Bounds {
    /// Largest space of wreaths enumerated exhaustively.
    pub wreaths: u128,
    /// Largest wreath product enumerated exhaustively.
    pub group: u128,
    /// Largest graph whose convex sets are enumerated.
    pub convex_vertices: usize,
    /// Largest radius for the properness check.
    pub ball_radius: u64,
    /// Random instances drawn when a check cannot be exhaustive.
    pub samples: usize,
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds {
            wreaths: DEFAULT_WREATH_BOUND,
            group: 1_000_000,
            convex_vertices: crate::convex::DEFAULT_ENUMERATION_BOUND,
            ball_radius: 3,
            samples: 2000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModelDocument {
    pub lamp_graph: Graph,
    pub base_graph: Graph,
    #[serde(default)]
    pub x0: Vertex,
    #[serde(default)]
    pub y0: Vertex,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lamp_action: Option<ActionSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub base_action: Option<ActionSpec>,
    /// Replace each permutation action by its augmentation at the basepoint.
    #[serde(default)]
    pub augment: bool,
    #[serde(default)]
    pub bounds: Bounds,
    #[serde(default)]
    pub seed: u64,
}

impl ModelDocument {
    pub fn new(lamp_graph: Graph, base_graph: Graph) -> Self {
        ModelDocument {
            lamp_graph,
            base_graph,
            x0: 0,
            y0: 0,
            lamp_action: None,
            base_action: None,
            augment: false,
            bounds: Bounds::default(),
            seed: 0,
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::InvalidDocument(e.to_string()))
    }
}

fn invalid(what: &str, e: Error) -> Error {
    match e {
        Error::InvalidDocument(_) => e,
        other => Error::InvalidDocument(format!("{what}: {other}")),
    }
}

fn build_action(
    what: &str,
    graph: MedianGraph,
    basepoint: Vertex,
    spec: Option<&ActionSpec>,
    augment: bool,
) -> Result<(AnyAction, Vertex)> {
    let Some(spec) = spec else {
        return Ok((PermutationAction::trivial(graph).into(), basepoint));
    };
    graph
        .check_vertex(basepoint)
        .map_err(|e| invalid(what, e))?;
    if spec.translation {
        if !spec.generators.is_empty() {
            return Err(Error::InvalidDocument(format!(
                "{what}: translation actions take no generators"
            )));
        }
        let n = graph.vertex_count();
        let path = MedianGraph::verify(&graphs::path(n)).expect("paths are median");
        if path.to_graph() != graph.to_graph() {
            return Err(Error::InvalidDocument(format!(
                "{what}: translation action needs the path 0 - 1 - ... - {}",
                n - 1
            )));
        }
        return Ok((TranslationAction::new(n, basepoint)?.into(), basepoint));
    }
    let action = PermutationAction::new(graph, &spec.generators).map_err(|e| invalid(what, e))?;
    if augment {
        let aug = augment_free_basepoint(&action, basepoint).map_err(|e| invalid(what, e))?;
        return Ok((aug.action.into(), aug.basepoint));
    }
    Ok((action.into(), basepoint))
}

/// A loaded document: the space of wreaths and the wreath-product action.
pub struct Model {
    pub document: ModelDocument,
    pub action: WreathModel<AnyAction, AnyAction>,
    wreaths: OnceLock<Option<Vec<Wreath>>>,
    table: OnceLock<Option<Vec<u32>>>,
}

impl Model {
    pub fn load(document: &ModelDocument) -> Result<Self> {
        let x = MedianGraph::verify(&document.lamp_graph).map_err(|e| invalid("lamp graph", e))?;
        let y = MedianGraph::verify(&document.base_graph).map_err(|e| invalid("base graph", e))?;
        let b = &document.bounds;
        if b.wreaths == 0 || b.group == 0 || b.convex_vertices == 0 || b.samples == 0 {
            return Err(Error::InvalidDocument("bounds must be positive".into()));
        }
        let (lamp, x0) = build_action(
            "lamp action",
            x,
            document.x0,
            document.lamp_action.as_ref(),
            document.augment,
        )?;
        let (base, y0) = build_action(
            "base action",
            y,
            document.y0,
            document.base_action.as_ref(),
            document.augment,
        )?;
        let action = WreathModel::new(lamp, base, x0, y0).map_err(|e| invalid("model", e))?;
        Ok(Model {
            document: document.clone(),
            action,
            wreaths: OnceLock::new(),
            table: OnceLock::new(),
        })
    }

    pub fn space(&self) -> &WreathSpace {
        self.action.space()
    }

    pub fn bounds(&self) -> &Bounds {
        &self.document.bounds
    }

    /// The whole space of wreaths, when within the bounds.
    pub fn wreaths(&self) -> Option<&[Wreath]> {
        self.wreaths
            .get_or_init(|| {
                let y = self.space().base_graph();
                if y.vertex_count() > self.bounds().convex_vertices {
                    return None;
                }
                self.space().enumerate_wreaths(self.bounds().wreaths).ok()
            })
            .as_deref()
    }

    pub fn index_of(&self, w: &Wreath) -> Option<usize> {
        self.wreaths()?.binary_search(w).ok()
    }

    /// `δ` between enumerated wreaths `i` and `j`, from a table when the model
    /// is small enough.
    pub fn delta_at(&self, i: usize, j: usize) -> u64 {
        let all = self.wreaths().expect("model is enumerated");
        match self.table() {
            Some(t) => t[i * all.len() + j] as u64,
            None => self.space().delta_unchecked(&all[i], &all[j]),
        }
    }

    fn table(&self) -> Option<&[u32]> {
        self.table
            .get_or_init(|| {
                let all = self.wreaths()?;
                if all.len() > DISTANCE_TABLE_LIMIT {
                    return None;
                }
                let s = self.space();
                Some(
                    all.iter()
                        .flat_map(|a| all.iter().map(move |b| s.delta_unchecked(a, b) as u32))
                        .collect(),
                )
            })
            .as_deref()
    }

    /// Runs the selected checks (all when `selection` is empty).
    pub fn run_checks(&self, selection: &[String]) -> Result<Vec<CheckReport>> {
        let all = registry();
        for name in selection {
            if !all.iter().any(|c| c.name == name) {
                return Err(Error::InvalidDocument(format!("unknown check {name:?}")));
            }
        }
        let chosen: Vec<&CheckSpec> = all
            .iter()
            .copied()
            .filter(|c| selection.is_empty() || selection.iter().any(|s| s == c.name))
            .collect();
        // Warm the shared caches before fanning out.
        self.wreaths();
        self.table();
        let mut reports: Vec<CheckReport> = chosen.par_iter().map(|c| c.run(self)).collect();
        reports.sort_by(|a, b| a.name.cmp(&b.name));
        Ok(reports)
    }
}

/// Loads `doc` and runs the selected checks (all when `selection` is empty).
pub fn run_check_suite(doc: &ModelDocument, selection: &[String]) -> Result<Vec<CheckReport>> {
    Model::load(doc)?.run_checks(selection)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckReport {
    pub name: String,
    pub anchor: String,
    pub instances: u64,
    pub failure_count: u64,
    /// The first failures found, in enumeration order (smallest first).
    pub failures: Vec<Value>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    pub duration_ms: u64,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.failure_count == 0
    }

    /// One line: `PASS name (n instances)` or `FAIL name (k of n failed)`.
    pub fn summary(&self) -> String {
        if self.passed() {
            format!("PASS {} ({} instances)", self.name, self.instances)
        } else {
            format!(
                "FAIL {} ({} of {} instances failed)",
                self.name, self.failure_count, self.instances
            )
        }
    }
}

/// Per-check accumulator handed to check bodies.
pub struct Ctx {
    pub rng: ChaCha8Rng,
    instances: u64,
    failure_count: u64,
    failures: Vec<Value>,
    notes: Vec<String>,
}

impl Ctx {
    pub fn new(seed: u64, name: &str) -> Self {
        // Each check gets its own stream so selections do not change results.
        let salt = name.bytes().fold(0xcbf2_9ce4_8422_2325u64, |h, b| {
            (h ^ b as u64).wrapping_mul(0x100_0000_01b3)
        });
        Ctx {
            rng: ChaCha8Rng::seed_from_u64(seed ^ salt),
            instances: 0,
            failure_count: 0,
            failures: Vec::new(),
            notes: Vec::new(),
        }
    }

    /// Records one instance; `witness` is only built on failure.
    pub fn check(&mut self, ok: bool, witness: impl FnOnce() -> Value) {
        self.instances += 1;
        if !ok {
            self.fail(witness());
        }
    }

    pub fn fail(&mut self, witness: Value) {
        self.failure_count += 1;
        if self.failures.len() < MAX_WITNESSES {
            self.failures.push(witness);
        }
    }

    pub fn note(&mut self, note: impl Into<String>) {
        self.notes.push(note.into());
    }

    pub fn finish(self, name: &str, anchor: &str, started: Instant) -> CheckReport {
        CheckReport {
            name: name.to_string(),
            anchor: anchor.to_string(),
            instances: self.instances,
            failure_count: self.failure_count,
            failures: self.failures,
            notes: self.notes,
            duration_ms: started.elapsed().as_millis() as u64,
        }
    }
}
