//! Median graphs, the median space of their convex subsets, and the space of
//! wreaths on which a wreath product of groups acts.

pub mod action;
pub mod bitset;
pub mod convex;
pub mod error;
pub mod graphs;
pub mod harness;
pub mod lamplighter;
pub mod median;
pub mod wreath;

pub use action::{
    augment_free_basepoint, AnyAction, AnyElement, Perm, PermutationAction, PointAction,
    TranslationAction, Truncation, WreathElement, WreathModel,
};
pub use bitset::{BitSet, VertexSet, WallSet};
pub use convex::ConvexSet;
pub use error::{Error, Result};
pub use harness::{run_check_suite, CheckReport, Model, ModelDocument};
pub use lamplighter::{GridConfig, GridElement, GridWreath, Point, Rectangle};
pub use median::{Graph, MedianGraph, Wall};
pub use wreath::{Labelling, Leaf, Wreath, WreathLiteral, WreathSpace};

/// Dense vertex id of a graph.
pub type Vertex = usize;
