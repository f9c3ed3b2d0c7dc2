//! Graphviz output for median graphs, spaces of wreaths and lamplighter
//! move graphs.

use std::collections::hash_map::DefaultHasher;
use std::fmt::Write as _;
use std::hash::{Hash, Hasher};
use std::path::Path;

use crate::error::{Error, Result};
use crate::lamplighter::{elementary_moves, GridWreath};
use crate::median::MedianGraph;
use crate::wreath::{Wreath, WreathSpace};

/// Largest graph written as DOT.
pub const MAX_DOT_VERTICES: usize = 5000;

const PALETTE: [&str; 12] = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
    "#bcbd22", "#17becf", "#393b79", "#637939",
];

fn check_size(n: usize) -> Result<()> {
    if n > MAX_DOT_VERTICES {
        return Err(Error::TooLarge {
            what: "graph for DOT export",
            size: n as u128,
            bound: MAX_DOT_VERTICES as u128,
        });
    }
    Ok(())
}

fn color_of(h: &impl Hash) -> &'static str {
    let mut s = DefaultHasher::new();
    h.hash(&mut s);
    PALETTE[(s.finish() % PALETTE.len() as u64) as usize]
}

/// The graph with each edge coloured by its wall.
pub fn median_graph_dot(g: &MedianGraph) -> Result<String> {
    check_size(g.vertex_count())?;
    let mut out = String::from("graph median {\n  node [shape=circle];\n");
    for v in g.vertices() {
        writeln!(out, "  {v};").unwrap();
    }
    for (&(u, v), &w) in g.edges().iter().zip(g.edge_walls()) {
        writeln!(
            out,
            "  {u} -- {v} [color=\"{}\", label=\"w{w}\"];",
            PALETTE[w % PALETTE.len()]
        )
        .unwrap();
    }
    out.push_str("}\n");
    Ok(out)
}

fn wreath_label(space: &WreathSpace, w: &Wreath) -> String {
    let lit = space.literal(w);
    let lamps: Vec<String> = lit.lamps.iter().map(|(y, x)| format!("{y}:{x}")).collect();
    format!("{:?} [{}]", lit.base, lamps.join(" "))
}

/// The graph of wreaths (edges at distance one), nodes coloured by leaf.
pub fn wreath_graph_dot(space: &WreathSpace, bound: u128) -> Result<String> {
    let all = space.enumerate_wreaths(bound.min(MAX_DOT_VERTICES as u128))?;
    check_size(all.len())?;
    let mut out = String::from("graph wreaths {\n  node [shape=box, style=filled];\n");
    for (i, w) in all.iter().enumerate() {
        writeln!(
            out,
            "  {i} [label=\"{}\", fillcolor=\"{}\"];",
            wreath_label(space, w),
            color_of(&w.lamps)
        )
        .unwrap();
    }
    for (i, w) in all.iter().enumerate() {
        for v in space.neighbors(w, usize::MAX)? {
            let j = all.binary_search(&v).expect("neighbour lies in the model");
            if i < j {
                writeln!(out, "  {i} -- {j};").unwrap();
            }
        }
    }
    out.push_str("}\n");
    Ok(out)
}

/// Grid wreaths within `radius` elementary moves of the base wreath.
pub fn grid_ball_dot(radius: u64) -> Result<String> {
    let ball =
        super::oracle::grid_ball(radius, MAX_DOT_VERTICES + 1).map_err(|_| Error::TooLarge {
            what: "graph for DOT export",
            size: MAX_DOT_VERTICES as u128 + 1,
            bound: MAX_DOT_VERTICES as u128,
        })?;
    check_size(ball.len())?;
    let mut nodes: Vec<&GridWreath> = ball.keys().collect();
    nodes.sort();
    let mut out = String::from("graph lamplighter {\n  node [shape=box, style=filled];\n");
    for (i, w) in nodes.iter().enumerate() {
        let [a, b, c, d] = w.rect.doubled();
        let lamps: Vec<String> = w
            .config
            .support()
            .map(|p| format!("{p:?}={}", w.config.get(p)))
            .collect();
        writeln!(
            out,
            "  {i} [label=\"{a}/2..{b}/2 x {c}/2..{d}/2 {}\", fillcolor=\"{}\"];",
            lamps.join(" "),
            color_of(&w.config)
        )
        .unwrap();
    }
    for (i, w) in nodes.iter().enumerate() {
        for v in elementary_moves(w) {
            if let Ok(j) = nodes.binary_search(&&v) {
                if i < j {
                    writeln!(out, "  {i} -- {j};").unwrap();
                }
            }
        }
    }
    out.push_str("}\n");
    Ok(out)
}

pub fn write_dot(path: &Path, dot: &str) -> Result<()> {
    std::fs::write(path, dot)?;
    Ok(())
}
