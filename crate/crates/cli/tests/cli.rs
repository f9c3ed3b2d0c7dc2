use std::path::Path;
use std::process::{Command, Output};

const K2_K2: &str =
    r#"{"lamp_graph":{"vertices":2,"edges":[[0,1]]},"base_graph":{"vertices":2,"edges":[[0,1]]}}"#;

fn mwreath(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mwreath"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn verify_passes_on_k2_k2() {
    let dir = tempfile::tempdir().unwrap();
    let doc = write(dir.path(), "doc.json", K2_K2);
    let out = mwreath(&["verify", &doc]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    assert!(stdout(&out).lines().all(|l| !l.starts_with("FAIL")));
}

#[test]
fn verify_json_selection() {
    let dir = tempfile::tempdir().unwrap();
    let doc = write(dir.path(), "doc.json", K2_K2);
    let out = mwreath(&[
        "verify",
        &doc,
        "--check",
        "leaf-convexity",
        "--json",
        "--seed",
        "7",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let reports: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(reports.as_array().unwrap().len(), 1);
    assert_eq!(reports[0]["name"], "leaf-convexity");
}

#[test]
fn invalid_input_exits_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let k3 = r#"{"lamp_graph":{"vertices":3,"edges":[[0,1],[1,2],[0,2]]},"base_graph":{"vertices":1,"edges":[]}}"#;
    let doc = write(dir.path(), "k3.json", k3);
    let out = mwreath(&["verify", &doc]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("(0, 1, 2)"));
    let good = write(dir.path(), "doc.json", K2_K2);
    assert_eq!(
        mwreath(&["verify", &good, "--check", "no-such-check"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        mwreath(&["verify", "/nonexistent/doc.json"]).status.code(),
        Some(2)
    );
}

#[test]
fn wreath_distance_and_median() {
    let dir = tempfile::tempdir().unwrap();
    let doc = write(dir.path(), "doc.json", K2_K2);
    let out = mwreath(&[
        "wreath",
        "distance",
        &doc,
        r#"{"base":[0]}"#,
        r#"{"base":[1],"lamps":{"0":1}}"#,
    ]);
    assert_eq!(stdout(&out).trim(), "3");
    let out = mwreath(&[
        "wreath",
        "median",
        &doc,
        r#"{"base":[0]}"#,
        r#"{"base":[1]}"#,
        r#"{"base":[0,1]}"#,
    ]);
    let med: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(med["base"], serde_json::json!([0, 1]));
    let out = mwreath(&["wreath", "enumerate", &doc]);
    assert_eq!(stdout(&out).lines().count(), 12);
}

#[test]
fn wreath_arguments_from_files() {
    let dir = tempfile::tempdir().unwrap();
    let doc = write(dir.path(), "doc.json", K2_K2);
    let w = write(dir.path(), "w.json", r#"{"base":[0,1]}"#);
    let out = mwreath(&["wreath", "neighbors", &doc, &format!("@{w}")]);
    let ns: Vec<serde_json::Value> = serde_json::from_str(&stdout(&out)).unwrap();
    // Shrink to either endpoint; switch the lamp at either vertex.
    assert_eq!(ns.len(), 4);
}

#[test]
fn action_augment_frees_the_basepoint() {
    let flip = r#"{"graph":{"vertices":3,"edges":[[0,1],[1,2]]},"generators":[{"name":"s","perm":[2,1,0]}],"basepoint":1}"#;
    assert_eq!(mwreath(&["action", "verify", flip]).status.code(), Some(1));
    let out = mwreath(&["action", "augment", flip]);
    assert_eq!(out.status.code(), Some(0));
    let augmented = stdout(&out);
    let doc: serde_json::Value = serde_json::from_str(&augmented).unwrap();
    assert_eq!(doc["graph"]["vertices"], 5);
    assert_eq!(
        mwreath(&["action", "verify", &augmented]).status.code(),
        Some(0)
    );
}

#[test]
fn lamplighter_commands() {
    let cell = r#"{"x_lo":-1,"x_hi":1,"y_lo":-1,"y_hi":1}"#;
    let base = format!(r#"{{"rect":{cell},"config":[]}}"#);
    let lit = format!(r#"{{"rect":{cell},"config":[[0,0,1]]}}"#);
    assert_eq!(
        stdout(&mwreath(&["lamplighter", "distance", &base, &lit])).trim(),
        "1"
    );
    assert_eq!(
        stdout(&mwreath(&["lamplighter", "tc", cell, "[[2,0]]", cell])).trim(),
        "4"
    );
    let moved = stdout(&mwreath(&[
        "lamplighter",
        "action",
        r#"{"shift":[1,0],"lamps":[]}"#,
        &lit,
    ]));
    let w: serde_json::Value = serde_json::from_str(&moved).unwrap();
    assert_eq!(w["config"], serde_json::json!([[1, 0, 1]]));
    assert_eq!(
        mwreath(&["lamplighter", "tc", "{}", "[]", cell])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn export_dot_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let doc = write(dir.path(), "doc.json", K2_K2);
    let out = dir.path().join("w.dot");
    let status = mwreath(&["export-dot", &doc, out.to_str().unwrap()]).status;
    assert_eq!(status.code(), Some(0));
    assert_eq!(
        std::fs::read_to_string(&out)
            .unwrap()
            .matches("fillcolor")
            .count(),
        12
    );
    let base = dir.path().join("base.dot");
    mwreath(&["export-dot", &doc, base.to_str().unwrap(), "--what", "base"]);
    assert!(std::fs::read_to_string(base).unwrap().contains("0 -- 1"));
}

#[test]
fn bundled_models_pass() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../models");
    let mut seen = 0;
    for entry in std::fs::read_dir(dir).unwrap() {
        let path = entry.unwrap().path();
        let out = mwreath(&["verify", path.to_str().unwrap()]);
        assert_eq!(
            out.status.code(),
            Some(0),
            "{}: {}",
            path.display(),
            stdout(&out)
        );
        seen += 1;
    }
    assert!(seen >= 5);
}
