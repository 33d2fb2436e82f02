//! End-to-end checks of the command-line interface beyond the determinism
//! criterion: generation, single-instance solving, and the advantage table.

use std::process::Command;

fn klima() -> Command {
    Command::new(env!("CARGO_BIN_EXE_klima"))
}

#[test]
fn generate_then_solve_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let instances = dir.path().join("instances");
    let out = klima()
        .args(["generate", "--count", "2", "--num-vars", "12", "--alpha", "4.2"])
        .args(["--seed", "9", "--filter-satisfiable"])
        .arg("--out-dir")
        .arg(&instances)
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let mut files: Vec<_> = std::fs::read_dir(&instances)
        .unwrap()
        .map(|e| e.unwrap().path())
        .collect();
    files.sort();
    assert_eq!(files.len(), 2);

    let out = klima()
        .arg("solve")
        .arg(&files[0])
        .args(["--heuristic", "walksat-skc", "--max-flips", "5000", "--max-tries", "20"])
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let json: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(json["num_vars"], 12);
    assert_eq!(json["heuristic"], "walksat-skc");
    // satisfiable-filtered instance with a generous budget: must solve
    assert!(json["solved_tries"].as_u64().unwrap() > 0);
    assert!(json["its"].as_f64().unwrap() >= 1.0);
    assert!(json["energy_per_iteration_joules"].as_f64().unwrap() > 0.0);
}

#[test]
fn solve_reports_noise_energy_for_gaussian_heuristic() {
    let dir = tempfile::tempdir().unwrap();
    let instances = dir.path().join("instances");
    assert!(klima()
        .args(["generate", "--count", "1", "--num-vars", "15", "--alpha", "4.0"])
        .args(["--seed", "4", "--filter-satisfiable"])
        .arg("--out-dir")
        .arg(&instances)
        .status()
        .unwrap()
        .success());
    let file = std::fs::read_dir(&instances).unwrap().next().unwrap().unwrap().path();
    let out = klima()
        .arg("solve")
        .arg(&file)
        .args(["--heuristic", "gnsat-n", "--sigma-rel", "0.2"])
        .args(["--max-flips", "2000", "--max-tries", "20"])
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let json: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(json["heuristic"], "gnsat-n");
    let noise = json["energy_breakdown"]["noise"].as_f64().unwrap();
    let total = json["energy_breakdown"]["total"].as_f64().unwrap();
    assert!(noise > 0.0 && noise < total);
}

#[test]
fn solve_errors_on_unknown_heuristic_and_missing_file() {
    let out = klima()
        .args(["solve", "nonexistent.cnf", "--heuristic", "bogus"])
        .output()
        .unwrap();
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("unknown heuristic"));
    let out = klima().args(["solve", "nonexistent.cnf"]).output().unwrap();
    assert!(!out.status.success());
}

#[test]
fn advantage_table_values() {
    let out = klima()
        .args(["advantage", "--num-vars", "20", "--num-clauses", "91"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("7280"), "{text}");
    assert!(text.contains("24642"), "{text}");

    let out = klima().arg("advantage").output().unwrap();
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("3.251"), "{text}");

    let out = klima().args(["advantage", "--k", "9"]).output().unwrap();
    assert!(!out.status.success(), "k = 9 has no built-in density");
}

#[test]
fn benchmark_writes_report_json() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("exp.toml");
    std::fs::write(
        &config,
        r#"
            name = "cli-smoke"
            seed = 2
            heuristics = ["mnsat-u"]
            [instances.generate]
            count = 3
            num_vars = 10
            alpha = 4.0
            probe_max_flips = 5000
            probe_max_tries = 5
            [tune]
            enabled = false
            [benchmark]
            max_tries = 20
            max_flips = 300
        "#,
    )
    .unwrap();
    let out_dir = dir.path().join("out");
    let out = klima()
        .arg("benchmark")
        .arg("--config")
        .arg(&config)
        .arg("--out")
        .arg(&out_dir)
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = std::fs::read_to_string(out_dir.join("results.csv")).unwrap();
    assert_eq!(csv.lines().count(), 1 + 3, "header plus one row per instance");
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out_dir.join("report.json")).unwrap())
            .unwrap();
    assert_eq!(report["name"], "cli-smoke");
    assert_eq!(report["summaries"][0]["heuristic"], "mnsat-u");
    assert!(report["summaries"][0]["breakdown"]["total"].as_f64().unwrap() > 0.0);
}
