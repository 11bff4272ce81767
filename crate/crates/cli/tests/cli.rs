//! Drives the compiled binary end to end: exit codes, output schemas, seeded
//! reproducibility, and the select -> evaluate round trip.

use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn merit() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_merit"));
    // Keep ambient configuration out of the assertions.
    cmd.env_remove("MERIT_SEED").env_remove("MERIT_MAX_ITERS").env_remove("MERIT_EPSILON");
    cmd
}

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

fn stdout_json(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn marginal(report: &Value, id: &str) -> f64 {
    report["marginals"]
        .as_array()
        .unwrap()
        .iter()
        .find(|m| m["id"] == id)
        .unwrap_or_else(|| panic!("no marginal for {id}"))["p"]
        .as_f64()
        .unwrap()
}

#[test]
fn select_reference_instance_both_methods() {
    for method in ["merit", "swissnsf"] {
        let out = merit()
            .args(["select", "--k", "2", "--method", method])
            .arg("--input")
            .arg(data("reference.csv"))
            .output()
            .unwrap();
        let report = stdout_json(&out);
        assert_eq!(report["method"], method);
        assert_eq!(report["k"], 2);
        assert!((marginal(&report, "alpha") - 1.0).abs() < 1e-9);
        for id in ["bravo", "charlie", "delta"] {
            assert!((marginal(&report, id) - 1.0 / 3.0).abs() < 1e-9, "{method} {id}");
        }
        assert_eq!(report["tiers"]["accept"], 1);
        assert_eq!(report["tiers"]["lottery"], 3);
        assert_eq!(report["tiers"]["reject"], 0);
        assert!(report.get("seed").is_none(), "no seed without --draw");
        assert!(report.get("audit").is_none(), "no audit without --draw");
    }
}

#[test]
fn select_zero_budget_is_an_empty_selection() {
    let out = merit()
        .args(["select", "--k", "0", "--draw", "--seed", "4"])
        .arg("--input")
        .arg(data("reference.csv"))
        .output()
        .unwrap();
    let report = stdout_json(&out);
    for id in ["alpha", "bravo", "charlie", "delta"] {
        assert_eq!(marginal(&report, id), 0.0);
    }
    assert_eq!(report["selected"].as_array().unwrap().len(), 0);
    assert_eq!(report["tiers"]["reject"], 4);
}

#[test]
fn estimate_methods_demand_estimates() {
    for method in ["det", "swissnsf", "rat"] {
        let out = merit()
            .args(["select", "--k", "2", "--method", method])
            .arg("--input")
            .arg(data("stair.csv"))
            .output()
            .unwrap();
        assert_eq!(out.status.code(), Some(4), "{method}");
        let err = String::from_utf8_lossy(&out.stderr);
        assert!(err.contains("point estimates"), "{method}: {err}");
    }
    // The interval-only methods run fine on the same file.
    let out = merit()
        .args(["select", "--k", "2", "--method", "merit"])
        .arg("--input")
        .arg(data("stair.csv"))
        .output()
        .unwrap();
    assert!(out.status.success());
}

#[test]
fn malformed_input_exits_2() {
    let dir = tempfile::tempdir().unwrap();

    let missing = merit()
        .args(["select", "--k", "1", "--input", "/nonexistent/intervals.csv"])
        .output()
        .unwrap();
    assert_eq!(missing.status.code(), Some(2));

    let upside_down = dir.path().join("upside_down.csv");
    std::fs::write(&upside_down, "id,lower,upper\na,2,1\n").unwrap();
    let out = merit()
        .args(["select", "--k", "1"])
        .arg("--input")
        .arg(&upside_down)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));

    let over_budget = merit()
        .args(["select", "--k", "9"])
        .arg("--input")
        .arg(data("reference.csv"))
        .output()
        .unwrap();
    assert_eq!(over_budget.status.code(), Some(2));

    let not_numbers = dir.path().join("words.csv");
    std::fs::write(&not_numbers, "id,lower,upper\na,low,high\n").unwrap();
    let out = merit()
        .args(["select", "--k", "1"])
        .arg("--input")
        .arg(&not_numbers)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn iteration_limit_exits_3() {
    let out = merit()
        .args(["select", "--k", "2", "--max-iters", "1"])
        .arg("--input")
        .arg(data("stair.csv"))
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("solver"));
}

#[test]
fn draws_are_reproducible_and_exactly_k() {
    let run = || {
        merit()
            .args(["select", "--k", "2", "--draw", "--seed", "11"])
            .arg("--input")
            .arg(data("reference.csv"))
            .output()
            .unwrap()
    };
    let first = run();
    let second = run();
    assert!(first.status.success());
    assert_eq!(first.stdout, second.stdout, "same input and seed, same bytes");

    let report = stdout_json(&first);
    let selected = report["selected"].as_array().unwrap();
    assert_eq!(selected.len(), 2);
    assert_eq!(report["seed"], 11);
    let audit = &report["audit"];
    assert_eq!(audit["seed"], 11);
    assert_eq!(audit["selected"].as_array().unwrap().len(), 2);

    // The CSV rendering marks the same committee.
    let csv_out = merit()
        .args(["select", "--k", "2", "--draw", "--seed", "11", "--format", "csv"])
        .arg("--input")
        .arg(data("reference.csv"))
        .output()
        .unwrap();
    let text = String::from_utf8(csv_out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("id,p,selected"));
    let mut chosen = Vec::new();
    for line in lines {
        let fields: Vec<&str> = line.split(',').collect();
        if fields[2] == "1" {
            chosen.push(fields[0].to_string());
        }
    }
    let want: Vec<String> =
        selected.iter().map(|v| v.as_str().unwrap().to_string()).collect();
    assert_eq!(chosen, want);
}

#[test]
fn env_seed_matches_flag_seed() {
    let flagged = merit()
        .args(["select", "--k", "2", "--draw", "--seed", "23"])
        .arg("--input")
        .arg(data("reference.csv"))
        .output()
        .unwrap();
    let from_env = merit()
        .args(["select", "--k", "2", "--draw"])
        .env("MERIT_SEED", "23")
        .arg("--input")
        .arg(data("reference.csv"))
        .output()
        .unwrap();
    assert!(flagged.status.success());
    assert_eq!(flagged.stdout, from_env.stdout);
}

#[test]
fn select_then_evaluate_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let json_path = dir.path().join("marginals.json");
    let csv_path = dir.path().join("marginals.csv");
    for (format, path) in [("json", &json_path), ("csv", &csv_path)] {
        let out = merit()
            .args(["select", "--k", "2", "--format", format])
            .arg("--out")
            .arg(path)
            .arg("--input")
            .arg(data("reference.csv"))
            .output()
            .unwrap();
        assert!(out.status.success());
    }

    let mut reports = Vec::new();
    for path in [&json_path, &csv_path] {
        let out = merit()
            .arg("evaluate")
            .arg("--input")
            .arg(data("reference.csv"))
            .arg("--marginals")
            .arg(path)
            .arg("--true-ranking")
            .arg(data("ranking.txt"))
            .output()
            .unwrap();
        reports.push(stdout_json(&out));
    }
    assert_eq!(reports[0], reports[1], "both encodings carry the same marginals");
    let report = &reports[0];
    assert_eq!(report["k"], 2);
    assert!((report["worst_case"].as_f64().unwrap() - 4.0 / 3.0).abs() < 1e-9);
    assert!((report["worst_case_normalized"].as_f64().unwrap() - 2.0 / 3.0).abs() < 1e-9);
    // True top 2 are alpha (p = 1) and bravo (p = 1/3).
    assert!((report["expected_utility"].as_f64().unwrap() - 2.0 / 3.0).abs() < 1e-9);

    let csv_report = merit()
        .arg("evaluate")
        .arg("--input")
        .arg(data("reference.csv"))
        .arg("--marginals")
        .arg(&csv_path)
        .args(["--format", "csv"])
        .output()
        .unwrap();
    let text = String::from_utf8(csv_report.stdout).unwrap();
    assert!(text.starts_with("metric,value\nworst_case,"));
}

#[test]
fn evaluate_rejects_misaligned_marginals() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.csv");
    std::fs::write(&bad, "id,p\nalpha,1.0\nbravo,0.5\nzulu,0.5\n").unwrap();
    let out = merit()
        .arg("evaluate")
        .arg("--input")
        .arg(data("reference.csv"))
        .arg("--marginals")
        .arg(&bad)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("zulu"));
}

#[test]
fn axioms_reference_report() {
    let out = merit()
        .args(["axioms", "--k", "2"])
        .arg("--input")
        .arg(data("reference.csv"))
        .output()
        .unwrap();
    let reports = stdout_json(&out);
    let reports = reports.as_array().unwrap();
    assert_eq!(reports.len(), 3);

    let by_method = |name: &str| -> &Value {
        reports.iter().find(|r| r["method"] == name).unwrap()
    };
    let merit_report = by_method("merit");
    let violations = merit_report["monotonicity_violations"].as_array().unwrap();
    assert_eq!(violations.len(), 1);
    assert_eq!(violations[0]["id"], "bravo");
    assert_eq!(violations[0]["budget"], 2);
    assert!((violations[0]["before"].as_f64().unwrap() - 0.5).abs() < 1e-9);
    assert!((violations[0]["after"].as_f64().unwrap() - 1.0 / 3.0).abs() < 1e-9);
    assert_eq!(merit_report["maximally_unstable"], false);

    assert_eq!(
        by_method("merit-monotone")["monotonicity_violations"].as_array().unwrap().len(),
        0
    );
    let swiss = by_method("swissnsf");
    assert_eq!(swiss["monotonicity_violations"].as_array().unwrap().len(), 1);
    assert_eq!(swiss["maximally_unstable"], true);
}

#[test]
fn simulate_noiseless_full_coverage_is_perfect() {
    let dir = tempfile::tempdir().unwrap();
    let rows_path = dir.path().join("rows.csv");
    let summary_path = dir.path().join("summary.csv");
    let out = merit()
        .args([
            "simulate",
            "--proposals",
            "30",
            "--reviewers",
            "4",
            "--reviews",
            "30",
            "--bias-sd",
            "0",
            "--noise-sd",
            "0",
            "--bounds",
            "loo",
            "--trials",
            "2",
            "--k",
            "8",
            "--seed",
            "5",
        ])
        .arg("--out")
        .arg(&rows_path)
        .arg("--summary")
        .arg(&summary_path)
        .output()
        .unwrap();
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));

    let rows = std::fs::read_to_string(&rows_path).unwrap();
    let mut lines = rows.lines();
    assert_eq!(lines.next(), Some("trial,method,metric,value"));
    let mut eu_rows = 0;
    for line in lines {
        let fields: Vec<&str> = line.split(',').collect();
        if fields[2] == "expected_utility" {
            eu_rows += 1;
            assert_eq!(fields[3], "1", "noiseless full coverage is exact: {line}");
        }
    }
    assert_eq!(eu_rows, 6, "two trials, three methods");

    let summary = std::fs::read_to_string(&summary_path).unwrap();
    assert!(summary.starts_with("method,metric,mean,ci_lo,ci_hi,trials"));
}

#[test]
fn bench_converges_quickly() {
    let out = merit()
        .args(["bench", "--sizes", "300", "--rates", "0.3333", "--seed", "3"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next(),
        Some("n,rate,k,millis,iterations,cuts,groups,chains,certified")
    );
    let row = lines.next().expect("one sweep cell");
    let fields: Vec<&str> = row.split(',').collect();
    assert_eq!(fields[0], "300");
    assert_eq!(fields[2], "100");
    let iterations: usize = fields[4].parse().unwrap();
    assert!(iterations <= 30, "{row}");
    assert_eq!(fields[8], "true");
}
