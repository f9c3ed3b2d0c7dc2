use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};
use mwreath::action::{ActionDocument, PointAction};
use mwreath::harness::dot::{grid_ball_dot, median_graph_dot, wreath_graph_dot, write_dot};
use mwreath::harness::{lamplighter_reports, registry, LamplighterBounds};
use mwreath::lamplighter::{grid_action, grid_delta, tc};
use mwreath::{
    augment_free_basepoint, CheckReport, Graph, GridElement, GridWreath, MedianGraph, Model,
    ModelDocument, Point, Rectangle, Truncation, Wreath, WreathLiteral,
};
use serde::de::DeserializeOwned;
use serde::Serialize;

/// Median graphs, spaces of wreaths and their wreath-product actions.
///
/// JSON arguments are given inline or as `@path`.
#[derive(Parser)]
#[command(name = "mwreath", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the property checks against a model document.
    Verify {
        doc: PathBuf,
        /// Run only the named check (repeatable).
        #[arg(long = "check")]
        checks: Vec<String>,
        #[arg(long)]
        seed: Option<u64>,
        /// Print the reports as JSON.
        #[arg(long)]
        json: bool,
    },
    /// List the registered checks.
    Checks,
    /// Validate a graph and list its walls.
    Graph { graph: String },
    #[command(subcommand)]
    Wreath(WreathCommand),
    #[command(subcommand)]
    Action(ActionCommand),
    #[command(subcommand)]
    Lamplighter(LamplighterCommand),
    /// Write a DOT file: the lamp graph, the base graph or the graph of wreaths
    /// of a model document.
    ExportDot {
        doc: PathBuf,
        out: PathBuf,
        #[arg(long, value_enum, default_value = "wreaths")]
        what: DotTarget,
    },
}

#[derive(Clone, Copy, clap::ValueEnum)]
enum DotTarget {
    Lamp,
    Base,
    Wreaths,
}

#[derive(Subcommand)]
enum WreathCommand {
    /// δ between two wreath literals.
    Distance {
        doc: PathBuf,
        w1: String,
        w2: String,
    },
    Median {
        doc: PathBuf,
        w1: String,
        w2: String,
        w3: String,
    },
    Neighbors {
        doc: PathBuf,
        w: String,
    },
    /// Nearest point of the leaf with the given lamps.
    Project {
        doc: PathBuf,
        lamps: String,
        w: String,
    },
    /// Print every wreath of the model.
    Enumerate {
        doc: PathBuf,
        #[arg(long)]
        limit: Option<usize>,
    },
}

#[derive(Subcommand)]
enum ActionCommand {
    /// Check an action document and print its order and basepoint stabiliser.
    Verify {
        action: String,
    },
    /// Print the augmented action document with a free basepoint.
    Augment {
        action: String,
    },
    Orbit {
        action: String,
        vertex: usize,
    },
    /// Stabiliser of a wreath under the model's wreath product.
    Stabilizer {
        doc: PathBuf,
        w: String,
    },
    /// Elements moving the basepoint wreath at most `radius`.
    Ball {
        doc: PathBuf,
        radius: u64,
        /// Restrict to elements representable in a truncated model instead of
        /// failing.
        #[arg(long)]
        clip: bool,
    },
}

#[derive(Subcommand)]
enum LamplighterCommand {
    Distance {
        w1: String,
        w2: String,
    },
    /// Side moves needed to sweep rectangle `r1` to `r2` through the points.
    Tc {
        r1: String,
        points: String,
        r2: String,
    },
    /// Apply a group element `{"shift": [x, y], "lamps": [[x, y, v], ...]}`.
    Action {
        element: String,
        w: String,
    },
    /// Run the lamplighter checks.
    Verify {
        #[arg(long, default_value_t = 5)]
        radius: u64,
        #[arg(long)]
        json: bool,
    },
    /// Write the move graph around the base wreath as DOT.
    Dot {
        out: PathBuf,
        #[arg(long, default_value_t = 2)]
        radius: u64,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn json_arg<T: DeserializeOwned>(what: &str, arg: &str) -> Result<T> {
    let text = match arg.strip_prefix('@') {
        Some(path) => std::fs::read_to_string(path).with_context(|| format!("reading {path}"))?,
        None => arg.to_string(),
    };
    serde_json::from_str(&text).with_context(|| format!("parsing {what}"))
}

fn load(doc: &Path) -> Result<Model> {
    let text =
        std::fs::read_to_string(doc).with_context(|| format!("reading {}", doc.display()))?;
    Ok(Model::load(&ModelDocument::from_json(&text)?)?)
}

fn wreath(model: &Model, arg: &str) -> Result<Wreath> {
    let lit: WreathLiteral = json_arg("wreath", arg)?;
    Ok(model.space().parse(&lit)?)
}

fn print(value: &impl Serialize) -> Result<bool> {
    println!("{}", serde_json::to_string_pretty(value)?);
    Ok(true)
}

fn report(reports: &[CheckReport], json: bool) -> Result<bool> {
    if json {
        println!("{}", serde_json::to_string_pretty(reports)?);
    } else {
        for r in reports {
            println!("{}", r.summary());
            for f in &r.failures {
                println!("  witness: {f}");
            }
            for n in &r.notes {
                println!("  note: {n}");
            }
        }
    }
    Ok(reports.iter().all(CheckReport::passed))
}

fn run(command: Command) -> Result<bool> {
    match command {
        Command::Verify {
            doc,
            checks,
            seed,
            json,
        } => {
            let text = std::fs::read_to_string(&doc)
                .with_context(|| format!("reading {}", doc.display()))?;
            let mut document = ModelDocument::from_json(&text)?;
            if let Some(seed) = seed {
                document.seed = seed;
            }
            let reports = Model::load(&document)?.run_checks(&checks)?;
            report(&reports, json)
        }
        Command::Checks => {
            for c in registry() {
                println!("{:<26} {}", c.name, c.anchor);
            }
            Ok(true)
        }
        Command::Graph { graph } => {
            let g = MedianGraph::verify(&json_arg::<Graph>("graph", &graph)?)?;
            let walls: Vec<_> = g
                .walls()
                .iter()
                .map(|w| (w.side_a().to_vec(), w.side_b().to_vec()))
                .collect();
            print(
                &serde_json::json!({ "vertices": g.vertex_count(), "diameter": g.diameter(), "walls": walls }),
            )
        }
        Command::Wreath(c) => wreath_command(c),
        Command::Action(c) => action_command(c),
        Command::Lamplighter(c) => lamplighter_command(c),
        Command::ExportDot { doc, out, what } => {
            let model = load(&doc)?;
            let s = model.space();
            let text = match what {
                DotTarget::Lamp => median_graph_dot(s.lamp_graph())?,
                DotTarget::Base => median_graph_dot(s.base_graph())?,
                DotTarget::Wreaths => wreath_graph_dot(s, model.bounds().wreaths)?,
            };
            write_dot(&out, &text)?;
            Ok(true)
        }
    }
}

fn wreath_command(c: WreathCommand) -> Result<bool> {
    match c {
        WreathCommand::Distance { doc, w1, w2 } => {
            let m = load(&doc)?;
            print(&m.space().delta(&wreath(&m, &w1)?, &wreath(&m, &w2)?)?)
        }
        WreathCommand::Median { doc, w1, w2, w3 } => {
            let m = load(&doc)?;
            let s = m.space();
            let med = s.wreath_median(&wreath(&m, &w1)?, &wreath(&m, &w2)?, &wreath(&m, &w3)?)?;
            print(&s.literal(&med))
        }
        WreathCommand::Neighbors { doc, w } => {
            let m = load(&doc)?;
            let s = m.space();
            let ns = s.neighbors(&wreath(&m, &w)?, usize::MAX)?;
            print(&ns.iter().map(|v| s.literal(v)).collect::<Vec<_>>())
        }
        WreathCommand::Project { doc, lamps, w } => {
            let m = load(&doc)?;
            let s = m.space();
            let pairs: std::collections::BTreeMap<usize, usize> = json_arg("lamps", &lamps)?;
            let leaf = mwreath::Labelling::from_pairs(s.x0(), pairs);
            s.check_labelling(&leaf)?;
            print(&s.literal(&s.leaf_projection(&leaf, &wreath(&m, &w)?)?))
        }
        WreathCommand::Enumerate { doc, limit } => {
            let m = load(&doc)?;
            let s = m.space();
            let all = s.enumerate_wreaths(m.bounds().wreaths)?;
            for w in all.iter().take(limit.unwrap_or(usize::MAX)) {
                println!("{}", serde_json::to_string(&s.literal(w))?);
            }
            eprintln!("{} wreaths", all.len());
            Ok(true)
        }
    }
}

fn action_command(c: ActionCommand) -> Result<bool> {
    match c {
        ActionCommand::Verify { action } => {
            let doc: ActionDocument = json_arg("action", &action)?;
            let a = doc.build()?;
            let b = doc.basepoint();
            a.graph().check_vertex(b)?;
            let stab = a.stabilizer(b).len();
            print(&serde_json::json!({
                "order": a.elements().len(),
                "basepoint": b,
                "orbit": a.orbit(b),
                "basepoint_stabiliser_order": stab,
                "free_basepoint": stab == 1,
            }))?;
            Ok(stab == 1)
        }
        ActionCommand::Augment { action } => {
            let doc: ActionDocument = json_arg("action", &action)?;
            let a = doc.build()?;
            let Some(perms) = a.as_permutations() else {
                bail!("only permutation actions can be augmented");
            };
            let aug = augment_free_basepoint(perms, doc.basepoint())?;
            print(&ActionDocument::from_action(
                &aug.action,
                Some(aug.basepoint),
            ))
        }
        ActionCommand::Orbit { action, vertex } => {
            let a = json_arg::<ActionDocument>("action", &action)?.build()?;
            a.graph().check_vertex(vertex)?;
            let mut orbit = a.orbit(vertex);
            orbit.sort_unstable();
            print(&orbit)
        }
        ActionCommand::Stabilizer { doc, w } => {
            let m = load(&doc)?;
            print(&m.action.stabilizer(&wreath(&m, &w)?, m.bounds().group)?)
        }
        ActionCommand::Ball { doc, radius, clip } => {
            let m = load(&doc)?;
            let policy = if clip {
                Truncation::Clip
            } else {
                Truncation::Strict
            };
            print(&m.action.properness_ball(radius, policy)?)
        }
    }
}

fn lamplighter_command(c: LamplighterCommand) -> Result<bool> {
    match c {
        LamplighterCommand::Distance { w1, w2 } => {
            let (a, b): (GridWreath, GridWreath) =
                (json_arg("wreath", &w1)?, json_arg("wreath", &w2)?);
            print(&grid_delta(&a, &b))
        }
        LamplighterCommand::Tc { r1, points, r2 } => {
            let (a, b): (Rectangle, Rectangle) =
                (json_arg("rectangle", &r1)?, json_arg("rectangle", &r2)?);
            let f: Vec<Point> = json_arg("points", &points)?;
            print(&tc(&a, &f, &b))
        }
        LamplighterCommand::Action { element, w } => {
            let e: GridElement = json_arg("element", &element)?;
            let w: GridWreath = json_arg("wreath", &w)?;
            print(&grid_action(&e, &w))
        }
        LamplighterCommand::Verify { radius, json } => {
            let bounds = LamplighterBounds {
                radius,
                ..LamplighterBounds::default()
            };
            report(&lamplighter_reports(&bounds)?, json)
        }
        LamplighterCommand::Dot { out, radius } => {
            write_dot(&out, &grid_ball_dot(radius)?)?;
            Ok(true)
        }
    }
}
