use std::path::Path;
use std::process::{Command, Output};

fn wconvex(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wconvex"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn generate(dir: &Path, name: &str, args: &[&str]) -> String {
    let path = dir.join(name);
    let p = path.to_str().unwrap().to_string();
    let mut full = vec!["generate"];
    full.extend_from_slice(args);
    full.extend_from_slice(&["--out", &p]);
    let o = wconvex(&full);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    p
}

#[test]
fn rays_scene_traps_the_origin() {
    let dir = tempfile::tempdir().unwrap();
    let e2 = generate(
        dir.path(),
        "e2.json",
        &["--family", "paper-e2", "--mode", "rays"],
    );
    let o = wconvex(&["classify", "--scene", &e2, "--point", "0/1,0/1"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "TrappedBoth");
    let o = wconvex(&["components", "--scene", &e2]);
    assert!(stdout(&o).contains("scene components: 3"), "{}", stdout(&o));
}

#[test]
fn empty_scene_is_free_everywhere() {
    let dir = tempfile::tempdir().unwrap();
    let empty = generate(dir.path(), "empty.json", &["--family", "empty"]);
    let o = wconvex(&["classify", "--scene", &empty, "--point", "0,0"]);
    assert_eq!(stdout(&o).trim(), "Free (1,0)");
    let svg = dir.path().join("empty.svg");
    let o = wconvex(&[
        "render-svg",
        "--scene",
        &empty,
        "--out",
        svg.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    let text = std::fs::read_to_string(svg).unwrap();
    assert!(text.contains("<rect") && !text.contains("<path"));
}

#[test]
fn malformed_documents_exit_with_error() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"version":1,"dim":2,"polygons":[[["1/0","0"]]]}"#).unwrap();
    let o = wconvex(&[
        "classify",
        "--scene",
        bad.to_str().unwrap(),
        "--point",
        "0,0",
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("parsing"));
    let o = wconvex(&["classify", "--scene"]);
    assert_eq!(o.status.code(), Some(1));
    let o = wconvex(&["verify-theorems", "--only", "99"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn uncut_control_fails_the_check() {
    let dir = tempfile::tempdir().unwrap();
    let none = generate(
        dir.path(),
        "none.json",
        &["--family", "e2", "--mode", "none"],
    );
    let o = wconvex(&["check", "--scene", &none, "--mode", "line"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).contains("weakly convex: no"));
    let lines = generate(
        dir.path(),
        "lines.json",
        &["--family", "e2", "--mode", "lines"],
    );
    let o = wconvex(&["check", "--scene", &lines]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("matches the prediction"));
}

#[test]
fn region_outputs_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let lines = generate(
        dir.path(),
        "lines.json",
        &["--family", "e2", "--mode", "lines"],
    );
    let mut outs = Vec::new();
    for i in 0..2 {
        let json = dir.path().join(format!("cells{i}.json"));
        let svg = dir.path().join(format!("cells{i}.svg"));
        let o = wconvex(&[
            "region",
            "--scene",
            &lines,
            "--out",
            json.to_str().unwrap(),
            "--svg",
            svg.to_str().unwrap(),
        ]);
        assert!(o.status.success());
        outs.push((std::fs::read(json).unwrap(), std::fs::read(svg).unwrap()));
    }
    assert_eq!(outs[0], outs[1]);
    let cells: serde_json::Value = serde_json::from_slice(&outs[0].0).unwrap();
    assert_eq!(cells["areas"]["TrappedBoth"], "6/1");
    assert_eq!(cells["areas"]["TrappedLinesOnly"], "0/1");
}

#[test]
fn certify_reports_a_radius() {
    let dir = tempfile::tempdir().unwrap();
    let rays = generate(
        dir.path(),
        "rays.json",
        &["--family", "e2", "--mode", "rays"],
    );
    let out = dir.path().join("cert.json");
    let o = wconvex(&[
        "certify",
        "--scene",
        &rays,
        "--point",
        "1/3,0",
        "--mode",
        "ray",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let cert: serde_json::Value = serde_json::from_slice(&std::fs::read(out).unwrap()).unwrap();
    assert!(!cert["witnesses"].as_array().unwrap().is_empty());
    let o = wconvex(&[
        "certify", "--scene", &rays, "--point", "-3,-3", "--mode", "ray",
    ]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn solid_scenes_classify() {
    let dir = tempfile::tempdir().unwrap();
    let e3 = generate(dir.path(), "e3.json", &["--family", "e3-bounded"]);
    let o = wconvex(&[
        "classify",
        "--scene",
        &e3,
        "--point",
        "0,0,1",
        "--samples",
        "32",
    ]);
    assert_eq!(stdout(&o).lines().next(), Some("EvidenceTrapped(32)"));
    let o = wconvex(&["classify", "--scene", &e3, "--point", "3,3,0"]);
    assert_eq!(stdout(&o).trim(), "InE");
    let o = wconvex(&["classify", "--scene", &e3, "--point", "0,0,20"]);
    assert!(stdout(&o).starts_with("CertifiedFree"));
    let o = wconvex(&["classify", "--scene", &e3, "--point", "0,0"]);
    assert_eq!(o.status.code(), Some(1));

    let e4 = generate(
        dir.path(),
        "e4.json",
        &["--family", "en-product", "--n", "4"],
    );
    let o = wconvex(&[
        "classify",
        "--scene",
        &e4,
        "--point",
        "0,0,1,0",
        "--samples",
        "16",
    ]);
    assert_eq!(stdout(&o).lines().next(), Some("EvidenceTrapped(16)"));
}

#[test]
fn exhausted_floor_budget_is_inconclusive() {
    let dir = tempfile::tempdir().unwrap();
    let st = generate(
        dir.path(),
        "st.json",
        &["--family", "e3-stacked", "--floor-budget", "0"],
    );
    let o = wconvex(&[
        "classify",
        "--scene",
        &st,
        "--point",
        "5/8,11/24,-1/4",
        "--samples",
        "16",
    ]);
    assert_eq!(o.status.code(), Some(3), "{}", stdout(&o));
    assert!(stdout(&o).starts_with("Inconclusive"));
    let o = wconvex(&[
        "classify",
        "--scene",
        &st,
        "--point",
        "5/8,11/24,-1/4",
        "--samples",
        "16",
        "--floor-budget",
        "6",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert_eq!(stdout(&o).lines().next(), Some("EvidenceTrapped(16)"));
}
