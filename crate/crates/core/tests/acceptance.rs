//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any
//! failure. Run with `cargo test -p mwreath --test acceptance`.

use std::time::{Duration, Instant};

use mwreath::action::Generator;
use mwreath::harness::{lamplighter_reports, ActionSpec, LamplighterBounds};
use mwreath::{graphs, CheckReport, Graph, MedianGraph, Model, ModelDocument};

fn graph_family() -> Vec<(String, Graph)> {
    let mut out = vec![
        ("K2".to_string(), graphs::path(2)),
        ("C4".to_string(), graphs::cycle(4)),
    ];
    for n in 1..=6 {
        out.push((format!("P{n}"), graphs::path(n)));
    }
    for (w, h) in [(2, 2), (2, 3), (3, 3)] {
        out.push((format!("grid {w}x{h}"), graphs::grid(w, h)));
    }
    for n in 1..=7 {
        for (i, t) in graphs::nonisomorphic_trees(n).into_iter().enumerate() {
            out.push((format!("tree {n}.{i}"), t));
        }
    }
    out
}

/// A document whose lamp graph is `g`, so the graph checks run on `g`.
fn graph_document(g: &Graph) -> ModelDocument {
    ModelDocument::new(g.clone(), graphs::single_vertex())
}

fn run(doc: &ModelDocument, checks: &[&str]) -> Result<Vec<CheckReport>, String> {
    let model = Model::load(doc).map_err(|e| e.to_string())?;
    let names: Vec<String> = checks.iter().map(|s| s.to_string()).collect();
    model.run_checks(&names).map_err(|e| e.to_string())
}

fn all_pass(label: &str, reports: &[CheckReport]) -> Result<u64, String> {
    let mut instances = 0;
    for r in reports {
        if !r.passed() {
            return Err(format!(
                "{label}: {} {}",
                r.summary(),
                serde_json::to_string(&r.failures).unwrap()
            ));
        }
        instances += r.instances;
    }
    Ok(instances)
}

fn find<'a>(reports: &'a [CheckReport], name: &str) -> &'a CheckReport {
    reports
        .iter()
        .find(|r| r.name == name)
        .expect("selected check")
}

fn convex_count(g: &Graph) -> u64 {
    MedianGraph::verify(g)
        .unwrap()
        .enumerate_convex(12)
        .unwrap()
        .len() as u64
}

fn criterion_1() -> Result<String, String> {
    let mut instances = 0;
    let family = graph_family();
    for (label, g) in &family {
        MedianGraph::verify(g).map_err(|e| format!("{label}: {e}"))?;
        let reports = run(&graph_document(g), &["walls-count-distance"])?;
        instances += all_pass(label, &reports)?;
        let n = g.vertices as u64;
        if find(&reports, "walls-count-distance").instances != n * n + 1 {
            return Err(format!("{label}: not every pair was checked"));
        }
    }
    Ok(format!("{} graphs, {instances} vertex pairs", family.len()))
}

fn criterion_2() -> Result<String, String> {
    let mut instances = 0;
    for (label, g) in &graph_family() {
        let reports = run(
            &graph_document(g),
            &["convex-enumeration", "gate-identity", "gate-pair"],
        )?;
        instances += all_pass(label, &reports)?;
        let k = convex_count(g);
        if find(&reports, "gate-pair").instances != k * k + 1 {
            return Err(format!(
                "{label}: gate-pair did not cover all pairs of convex sets"
            ));
        }
    }
    Ok(format!("{instances} instances"))
}

fn criterion_3() -> Result<String, String> {
    let mut instances = 0;
    let mut graphs_checked = 0;
    for (label, g) in graph_family().iter().filter(|(_, g)| g.vertices <= 9) {
        let reports = run(
            &graph_document(g),
            &["family-interval", "family-median", "family-metric"],
        )?;
        instances += all_pass(label, &reports)?;
        let k = convex_count(g);
        for name in ["family-interval", "family-median"] {
            if find(&reports, name).instances != k * k * k + 1 {
                return Err(format!("{label}: {name} was not exhaustive"));
            }
        }
        graphs_checked += 1;
    }
    Ok(format!("{graphs_checked} graphs, {instances} instances"))
}

fn small_models() -> Vec<(&'static str, ModelDocument, u64)> {
    vec![
        (
            "K2/K2",
            ModelDocument::new(graphs::path(2), graphs::path(2)),
            12,
        ),
        (
            "K2/P3",
            ModelDocument::new(graphs::path(2), graphs::path(3)),
            48,
        ),
        (
            "P3/K2",
            ModelDocument::new(graphs::path(3), graphs::path(2)),
            27,
        ),
    ]
}

fn criterion_4() -> Result<String, String> {
    let mut parts = Vec::new();
    for (label, doc, size) in small_models() {
        let reports = run(
            &doc,
            &[
                "wreath-enumeration",
                "wreath-graph-distance",
                "wreath-median",
            ],
        )?;
        all_pass(label, &reports)?;
        let model = Model::load(&doc).unwrap();
        let n = model.wreaths().map_or(0, |w| w.len()) as u64;
        if n != size {
            return Err(format!("{label}: {n} wreaths, expected {size}"));
        }
        if find(&reports, "wreath-median").instances != n * n * n {
            return Err(format!("{label}: median check was not exhaustive"));
        }
        parts.push(format!("{label}: {n} wreaths"));
    }
    Ok(parts.join(", "))
}

fn criterion_5() -> Result<String, String> {
    let mut instances = 0;
    for (label, doc, _) in small_models() {
        let reports = run(
            &doc,
            &[
                "interval-meets-leaf",
                "leaf-convexity",
                "leaf-isometry",
                "leaf-projection-gate",
            ],
        )?;
        instances += all_pass(label, &reports)?;
    }
    Ok(format!("{instances} instances"))
}

fn generator(name: &str, perm: &[usize]) -> Generator {
    Generator {
        name: name.into(),
        perm: perm.to_vec(),
    }
}

fn action_models() -> Vec<(&'static str, ModelDocument)> {
    let flip = ActionSpec {
        generators: vec![generator("s", &[2, 1, 0])],
        translation: false,
    };
    let klein = ActionSpec {
        generators: vec![generator("a", &[0, 3, 2, 1]), generator("b", &[2, 1, 0, 3])],
        translation: false,
    };
    let mut m1 = ModelDocument::new(graphs::path(3), graphs::path(2));
    m1.x0 = 1;
    m1.lamp_action = Some(flip.clone());
    m1.augment = true;
    let mut m2 = ModelDocument::new(graphs::path(2), graphs::path(3));
    m2.y0 = 1;
    m2.base_action = Some(flip);
    m2.augment = true;
    let mut m3 = ModelDocument::new(graphs::cycle(4), graphs::path(2));
    m3.lamp_action = Some(klein);
    m3.augment = true;
    vec![
        ("Z/2 on P3 (lamps)", m1),
        ("Z/2 on P3 (base)", m2),
        ("Z/2xZ/2 on C4 (lamps)", m3),
    ]
}

fn criterion_6() -> Result<String, String> {
    let mut parts = Vec::new();
    for (label, doc) in action_models() {
        // Loading verifies the augmented graphs are median.
        let model = Model::load(&doc).map_err(|e| format!("{label}: {e}"))?;
        let reports = run(
            &doc,
            &[
                "action-basepoints-free",
                "action-isometry",
                "action-laws",
                "stabilizer",
            ],
        )?;
        all_pass(label, &reports)?;
        let n = model
            .wreaths()
            .ok_or(format!("{label}: model not enumerated"))?
            .len() as u64;
        let gens = model.action.standard_generators().len() as u64;
        if find(&reports, "action-isometry").instances != gens * (1 + n * n) {
            return Err(format!("{label}: isometry check did not cover all pairs"));
        }
        let s = model.space();
        parts.push(format!(
            "{label}: |X|={} |Y|={} {} wreaths",
            s.lamp_graph().vertex_count(),
            s.base_graph().vertex_count(),
            n
        ));
    }
    Ok(parts.join(", "))
}

fn criterion_7() -> Result<String, String> {
    let mut doc = ModelDocument::new(graphs::path(5), graphs::path(7));
    doc.x0 = 2;
    doc.y0 = 3;
    let shift = ActionSpec {
        generators: vec![],
        translation: true,
    };
    doc.lamp_action = Some(shift.clone());
    doc.base_action = Some(shift);
    doc.bounds.ball_radius = 4;
    let reports = run(&doc, &["properness-ball"])?;
    all_pass("Z wr Z on P5/P7", &reports)?;
    let r = find(&reports, "properness-ball");
    Ok(format!(
        "{} ball comparisons against 5^7 * 7 elements",
        r.instances
    ))
}

fn criterion_8() -> Result<String, String> {
    let reports = lamplighter_reports(&LamplighterBounds::default()).map_err(|e| e.to_string())?;
    let instances = all_pass("lamplighter", &reports)?;
    let notes: Vec<String> = reports.iter().flat_map(|r| r.notes.clone()).collect();
    Ok(format!("{instances} instances; {}", notes.join("; ")))
}

fn criterion_9() -> Result<String, String> {
    let mut instances = 0;
    for (label, g) in graph_family().iter().filter(|(_, g)| g.vertices <= 10) {
        let reports = run(&graph_document(g), &["hull-oracle", "median-hull"])?;
        instances += all_pass(label, &reports)?;
        let subsets = (1u64 << g.vertices) - 1;
        if find(&reports, "hull-oracle").instances < subsets {
            return Err(format!("{label}: not every subset was hulled"));
        }
    }
    Ok(format!("{instances} instances"))
}

type Criterion = (u32, &'static str, fn() -> Result<String, String>, u64);

fn main() {
    let criteria: [Criterion; 9] = [
        (1, "median-graph validation and wall counts", criterion_1, 1),
        (2, "gate laws", criterion_2, 10),
        (3, "convex family is median", criterion_3, 60),
        (4, "space of wreaths is a median graph", criterion_4, 60),
        (5, "leaf geometry", criterion_5, 30),
        (6, "action correctness", criterion_6, 60),
        (7, "properness ball", criterion_7, 120),
        (8, "lamplighter formulas", criterion_8, 120),
        (9, "hull oracle cross-validation", criterion_9, 30),
    ];
    let mut failed = 0;
    for (id, title, body, limit) in criteria {
        let started = Instant::now();
        let result = body();
        let took = started.elapsed();
        let result = match result {
            Ok(detail) if took > Duration::from_secs(limit) => {
                Err(format!("{detail}; exceeded {limit} s"))
            }
            other => other,
        };
        match result {
            Ok(detail) => println!("PASS {id} {title} ({:.2} s): {detail}", took.as_secs_f64()),
            Err(detail) => {
                failed += 1;
                println!("FAIL {id} {title} ({:.2} s): {detail}", took.as_secs_f64());
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
