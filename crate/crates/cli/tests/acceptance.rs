//! Acceptance suite: one test per criterion, each printing a single
//! PASS/FAIL line. Tests hold a shared lock so the wall-clock budgets are
//! measured without interference from each other.

use std::io::Write;
use std::process::Command;
use std::sync::{Mutex, MutexGuard};
use std::time::{Duration, Instant};

use wconvex::verify::{criterion_name, run_criterion, Status};

const SEED: u64 = 42;

static SERIAL: Mutex<()> = Mutex::new(());

fn serial() -> MutexGuard<'static, ()> {
    SERIAL.lock().unwrap_or_else(|e| e.into_inner())
}

/// Bypasses the harness's output capture so the line lands in the log.
fn report(line: &str) {
    let mut out = std::io::stdout().lock();
    let _ = writeln!(out, "{line}");
    let _ = out.flush();
}

fn criterion(id: u32, budget: Option<Duration>) {
    let _guard = serial();
    let t = Instant::now();
    let r = run_criterion(id, SEED);
    let elapsed = t.elapsed();
    let in_time = budget.is_none_or(|b| elapsed <= b);
    let ok = r.status == Status::Pass && in_time;
    let counts: Vec<String> = r.counts.iter().map(|(k, v)| format!("{k}={v}")).collect();
    let limit = budget
        .map(|b| format!(" / {}s", b.as_secs()))
        .unwrap_or_default();
    report(&format!(
        "ACCEPTANCE {} criterion {id:>2}: {} [{}] in {:.1}s{limit}",
        if ok { "PASS" } else { "FAIL" },
        r.name,
        counts.join(", "),
        elapsed.as_secs_f64()
    ));
    if let Some(cx) = &r.counterexample {
        report(&format!("    counterexample: {cx}"));
    }
    assert_eq!(r.status, Status::Pass, "criterion {id}: {r}");
    assert!(
        in_time,
        "criterion {id} took {elapsed:?}, budget {budget:?}"
    );
}

fn secs(s: u64) -> Option<Duration> {
    Some(Duration::from_secs(s))
}

#[test]
fn criterion_01_lines_region() {
    criterion(1, secs(30));
}

#[test]
fn criterion_02_rays_region() {
    criterion(2, secs(30));
}

#[test]
fn criterion_03_openness() {
    criterion(3, secs(60));
}

#[test]
fn criterion_04_boundary_escapes() {
    criterion(4, None);
}

#[test]
fn criterion_05_oracle_agreement() {
    criterion(5, None);
}

#[test]
fn criterion_06_convex_components() {
    criterion(6, None);
}

#[test]
fn criterion_07_component_bound() {
    criterion(7, None);
}

#[test]
fn criterion_08_bounded_solid() {
    criterion(8, secs(300));
}

#[test]
fn criterion_09_nonconvex_solid() {
    criterion(9, None);
}

#[test]
fn criterion_10_stacked_solid() {
    criterion(10, None);
}

#[test]
fn criterion_11_product() {
    criterion(11, secs(300));
}

#[test]
fn criterion_12_determinism() {
    let _guard = serial();
    let dir = tempfile::tempdir().unwrap();
    let t = Instant::now();
    let mut runs = Vec::new();
    for i in 0..2 {
        let path = dir.path().join(format!("report{i}.json"));
        let out = Command::new(env!("CARGO_BIN_EXE_wconvex"))
            .args(["verify-theorems", "--seed", &SEED.to_string(), "--out"])
            .arg(&path)
            .output()
            .expect("binary runs");
        runs.push((
            out.status.code(),
            out.stdout,
            std::fs::read(&path).expect("report written"),
        ));
    }
    let same = runs[0] == runs[1];
    let passed = runs[0].0 == Some(0);
    report(&format!(
        "ACCEPTANCE {} criterion 12: verify-theorems is deterministic [identical={same}, exit={:?}, bytes={}] in {:.1}s",
        if same { "PASS" } else { "FAIL" },
        runs[0].0,
        runs[0].2.len(),
        t.elapsed().as_secs_f64()
    ));
    assert!(same, "reports differ between runs");
    // the report itself must cover every criterion
    let rep: serde_json::Value = serde_json::from_slice(&runs[0].2).unwrap();
    let ids: Vec<u64> = rep["criteria"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["id"].as_u64().unwrap())
        .collect();
    assert_eq!(ids, (1..=11).collect::<Vec<_>>());
    assert_eq!(rep["criteria"][0]["name"], criterion_name(1));
    assert!(passed, "verify-theorems exited with {:?}", runs[0].0);
}
