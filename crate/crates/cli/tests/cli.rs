use std::process::{Command, Output};

use gridcover::*;

fn gridcover(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gridcover")).args(args).output().expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = gridcover(args);
    assert!(out.status.success(), "{args:?} failed: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

#[test]
fn cov_prints_the_optimum() {
    assert_eq!(stdout(&["cov", "--standard", "3", "-k", "2"]), "6\n");
    let g = generic_grid(4, 3, 2).unwrap();
    let inst = CoverInstance::full(g, 2).unwrap();
    let expected = solve_ilp(&inst, None, &IlpBudget::default()).unwrap().optimum;
    let got = stdout(&["cov", "--generic", "4", "3", "--seed", "2", "-k", "2", "--warm-start", "wide"]);
    assert_eq!(got.trim(), expected.to_string());
}

#[test]
fn cov_writes_a_cover_file_that_verifies() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cover.txt");
    stdout(&["cov", "--standard", "4", "-k", "2", "--family", "restricted", "-o", path.to_str().unwrap()]);
    let (cover, fp) = Cover::from_text(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let g = standard_grid(4).unwrap();
    assert_eq!(fp, Some(g.fingerprint()));
    assert!(verify_cover(&g, &cover).valid);
    assert_eq!(cover.size(), 9);
}

#[test]
fn bounds_and_delta_match_the_library() {
    let out = stdout(&["bounds", "--generic", "4", "3", "--seed", "1", "-k", "2"]);
    let b = reference_bounds(&generic_grid(4, 3, 1).unwrap(), 2);
    assert!(out.lines().any(|l| l == "ball_serra=8"));
    assert!(out.lines().any(|l| l == format!("trivial_lower={}", b.trivial_lower)));
    assert!(out.lines().any(|l| l == format!("trivial_upper={}", b.trivial_upper)));
    assert_eq!(stdout(&["delta", "--standard", "6"]), "4\n");
    assert_eq!(stdout(&["delta", "--exp", "5"]), "1\n");
}

#[test]
fn phi_and_lines_match_the_library() {
    assert_eq!(stdout(&["phi", "--standard", "4"]), "22/5\n");
    let restricted = phi(&CoverInstance::restricted(standard_grid(5).unwrap(), 1).unwrap()).unwrap();
    assert_eq!(stdout(&["phi", "--standard", "5", "--family", "restricted"]).trim(), restricted.to_string());
    assert!(stdout(&["phi", "--standard", "2", "--float"]).contains("approximate"));
    let n = enumerate_lines(&named_grid(GridKind::Quadratic, 4).unwrap()).len();
    let listing = stdout(&["lines", "--quad", "4"]);
    assert_eq!(listing.lines().next().unwrap(), n.to_string());
    assert_eq!(listing.lines().count(), n + 1);
}

#[test]
fn certify_prints_exact_summaries() {
    assert_eq!(stdout(&["certify", "restricted", "5"]), "t=1 z=5/18 total=35/6 feasible=true\n");
    let s = weight_standard(6).unwrap();
    assert_eq!(
        stdout(&["certify", "standard", "6"]),
        format!("t={} total={} feasible=true\n", s.t, s.weighting.total())
    );
    let w = weight_generic(&generic_grid(4, 3, 1).unwrap()).unwrap();
    assert_eq!(
        stdout(&["certify", "generic", "--generic", "4", "3", "--seed", "1"]),
        format!("total={} feasible=true\n", w.total())
    );
    assert!(stdout(&["certify", "delta", "--quad", "5"]).starts_with("delta="));
}

#[test]
fn certify_writes_weighting_json() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("w.json");
    stdout(&["certify", "square-claim", "--standard", "5", "-o", path.to_str().unwrap()]);
    let g = standard_grid(5).unwrap();
    let w = Weighting::from_json(&g, &std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(w, weight_square_claim(&g, None).unwrap().weighting);
}

#[test]
fn audit_reports_full_family_violations() {
    let out = gridcover(&["certify", "restricted", "60", "--audit-full"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let line = text.lines().find(|l| l.starts_with("full_family_violations=")).unwrap();
    assert_ne!(line, "full_family_violations=0 max_line_weight=1");
}

#[test]
fn construct_verifies_and_saves() {
    assert_eq!(stdout(&["construct", "standard", "--standard", "5", "-k", "8"]), "size=49 valid=true min_coverage=8\n");
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c.txt");
    stdout(&["construct", "biregular", "--generic", "4", "3", "--seed", "1", "-k", "5", "-o", path.to_str().unwrap()]);
    let (c, _) = Cover::from_text(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(c, construct_biregular(&generic_grid(4, 3, 1).unwrap(), 5).unwrap());
}

#[test]
fn grid_file_input() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("grid.json");
    std::fs::write(&path, standard_grid(3).unwrap().to_json()).unwrap();
    assert_eq!(stdout(&["cov", "--file", path.to_str().unwrap(), "-k", "2"]), "6\n");
}

#[test]
fn exit_codes() {
    assert_eq!(gridcover(&["cov", "--standard", "3"]).status.code(), Some(2));
    assert_eq!(gridcover(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(
        gridcover(&["construct", "biregular", "--generic", "4", "3", "--seed", "1", "-k", "4"]).status.code(),
        Some(2)
    );
    assert_eq!(gridcover(&["certify", "standard"]).status.code(), Some(2));
    let timeout = gridcover(&["cov", "--standard", "6", "-k", "1", "--max-nodes", "2"]);
    assert_eq!(timeout.status.code(), Some(3));
    let env_budget = Command::new(env!("CARGO_BIN_EXE_gridcover"))
        .args(["cov", "--standard", "6", "-k", "1"])
        .env("GRIDCOVER_BUDGET_SECS", "0")
        .output()
        .unwrap();
    assert_eq!(env_budget.status.code(), Some(3));
}

#[test]
fn experiment_exports_tables() {
    let dir = tempfile::tempdir().unwrap();
    let out = gridcover(&["experiment", "E1", "-o", dir.path().to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let rows = import_results(ExportFormat::Csv, &dir.path().join("E1.csv")).unwrap();
    assert_eq!(rows, run_experiment(&experiment_by_id("E1").unwrap(), 1).unwrap());
    assert_eq!(import_results(ExportFormat::Json, &dir.path().join("E1.json")).unwrap(), rows);
    assert_eq!(gridcover(&["experiment", "E9", "-o", dir.path().to_str().unwrap()]).status.code(), Some(2));
}
