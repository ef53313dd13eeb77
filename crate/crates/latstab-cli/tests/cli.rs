mod common;

use common::{fixture, run, run_env};
use serde_json::Value;

fn write_identity_lattice(dir: &std::path::Path, name: &str, n: usize) -> String {
    let gram: Vec<Vec<String>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { "1".to_string() } else { "0".to_string() })
                .collect()
        })
        .collect();
    let doc = serde_json::json!({ "name": name, "rank": n, "gram": gram });
    let path = dir.join(format!("{name}.json"));
    std::fs::write(&path, serde_json::to_string(&doc).unwrap()).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn slope_reports_exact_values() {
    let r = run(&["slope", &fixture("a2.json")]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert!(r.stdout.contains("covol_sq: 3"));
    assert!(r.stdout.contains("slope_approx: -0.274653"));

    let r = run(&["slope", &fixture("a2.json"), "--format", "json"]);
    let doc: Value = serde_json::from_str(&r.stdout).unwrap();
    assert_eq!(doc["covol_sq"], "3");
    assert_eq!(doc["slope"]["rank"], 2);
    assert_eq!(doc["name"], "a2");
}

#[test]
fn slope_rejects_bad_files() {
    let r = run(&["slope", "/nonexistent.json"]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("error"));
}

#[test]
fn mumax_modes_and_witnesses() {
    let r = run(&["mumax", &fixture("a2.json"), "--format", "json"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let doc: Value = serde_json::from_str(&r.stdout).unwrap();
    assert_eq!(doc["mu_max"]["covol_sq"], "3");
    assert_eq!(doc["witness_rank"], 2);
    assert_eq!(doc["certified"], true);
    assert_eq!(doc["per_rank"].as_array().unwrap().len(), 2);

    // Rank 8 has an uncertified middle rank: certified mode must refuse,
    // heuristic mode must answer and stay deterministic.
    let dir = tempfile::tempdir().unwrap();
    let z8 = write_identity_lattice(dir.path(), "z8", 8);
    let refused = run(&["mumax", &z8]);
    assert_eq!(refused.code, 2);
    assert!(refused.stderr.contains("heuristic"), "{}", refused.stderr);

    let a = run(&["mumax", &z8, "--mode", "heuristic", "--format", "json"]);
    assert_eq!(a.code, 0, "{}", a.stderr);
    let doc: Value = serde_json::from_str(&a.stdout).unwrap();
    assert_eq!(doc["mu_max"]["covol_sq"], "1");
    assert_eq!(doc["certified"], false);
    let b = run(&["mumax", &z8, "--mode", "heuristic", "--format", "json"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn semistable_reports_witness_for_unstable_input() {
    let r = run(&["semistable", &fixture("unstable.json")]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert!(r.stdout.contains("verdict: unstable"));
    assert!(r.stdout.contains("covol_sq 1/4"));
    assert!(r.stdout.contains("(1, 0)"));

    let r = run(&["semistable", &fixture("a3.json"), "--format", "json"]);
    let doc: Value = serde_json::from_str(&r.stdout).unwrap();
    assert_eq!(doc["verdict"], "semistable");
    assert_eq!(doc["certified"], true);
}

#[test]
fn dual_twice_returns_the_original_gram() {
    let dir = tempfile::tempdir().unwrap();
    let once = run(&["dual", &fixture("a2.json")]);
    assert_eq!(once.code, 0);
    let mid = dir.path().join("dual.json");
    std::fs::write(&mid, &once.stdout).unwrap();
    let twice = run(&["dual", mid.to_str().unwrap()]);
    assert_eq!(twice.code, 0);
    let doc: Value = serde_json::from_str(&twice.stdout).unwrap();
    assert_eq!(doc["gram"][0][0], "2");
    assert_eq!(doc["gram"][0][1], "-1");
    assert_eq!(doc["rank"], 2);
}

#[test]
fn tensor_output_feeds_other_commands() {
    let dir = tempfile::tempdir().unwrap();
    let t = run(&["tensor", &fixture("z2.json"), &fixture("z2.json")]);
    assert_eq!(t.code, 0);
    let doc: Value = serde_json::from_str(&t.stdout).unwrap();
    assert_eq!(doc["rank"], 4);
    assert_eq!(doc["name"], "tensor(z2,z2)");
    let z4 = dir.path().join("z4.json");
    std::fs::write(&z4, &t.stdout).unwrap();

    let s = run(&["slope", z4.to_str().unwrap()]);
    assert!(s.stdout.contains("covol_sq: 1"));

    // Rank-4 factors violate the corollary's rank precondition.
    let c = run(&["corollary", z4.to_str().unwrap(), &fixture("z2.json")]);
    assert_eq!(c.code, 2);
    assert!(c.stderr.contains("rank"), "{}", c.stderr);
}

#[test]
fn corollary_certifies_supported_patterns() {
    for (l, m) in [("z2.json", "z2.json"), ("a2.json", "a3.json")] {
        let r = run(&["corollary", &fixture(l), &fixture(m)]);
        assert_eq!(r.code, 0, "{}", r.stderr);
        assert!(r.stdout.contains("certified semistable"), "{}", r.stdout);
        assert!(r.stdout.contains("violations: 0"));
    }
    let r = run(&["corollary", &fixture("unstable.json"), &fixture("z2.json")]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("semistable"), "{}", r.stderr);
}

#[test]
fn theorem_suite_runs_and_rejects_unstable_inputs() {
    let r = run(&[
        "theorem",
        &fixture("a2.json"),
        &fixture("z2.json"),
        "--trials",
        "40",
        "--seed",
        "2",
    ]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert!(r.stdout.contains("violations: 0"));
    assert!(r.stdout.contains("checked: 40"));

    let r = run(&[
        "theorem",
        &fixture("unstable.json"),
        &fixture("z2.json"),
        "--trials",
        "5",
    ]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("unstable"), "{}", r.stderr);
    assert!(r.stderr.contains("1/4"), "{}", r.stderr);
}

#[test]
fn identities_and_usage_exit_codes() {
    let ok = run(&["identities", "--trials", "0"]);
    assert_eq!(ok.code, 0, "{}", ok.stderr);

    let bad_rank = run(&["identities", "--trials", "1", "--ranks", "1"]);
    assert_eq!(bad_rank.code, 2);

    let unknown = run(&["identities", "--no-such-flag"]);
    assert_eq!(unknown.code, 2);

    let missing = run(&["search", "--n", "2"]);
    assert_eq!(missing.code, 2);
}

#[test]
fn search_modes_and_exit_codes() {
    let r = run(&[
        "search", "--n", "2", "--m", "2", "--trials", "2", "--seed", "3", "--mode", "certified",
    ]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert!(r.stdout.contains("violations: 0"));
    assert!(r.stdout.contains("rank4_certified: 2"));

    // A rank-9 tensor product has ranks no certified search covers.
    let refused = run(&[
        "search", "--n", "3", "--m", "3", "--trials", "1", "--mode", "certified",
    ]);
    assert_eq!(refused.code, 2);
    assert!(refused.stderr.contains("heuristic"), "{}", refused.stderr);
}

#[test]
fn reports_are_byte_identical_across_thread_counts() {
    let args = [
        "identities", "--trials", "30", "--seed", "123", "--format", "json",
    ];
    let one = run_env(&args, &[("LATSTAB_THREADS", "1")]);
    let two = run_env(&args, &[("LATSTAB_THREADS", "2")]);
    let eight = run_env(&args, &[("LATSTAB_THREADS", "8")]);
    assert_eq!(one.code, 0, "{}", one.stderr);
    assert_eq!(one.stdout, two.stdout);
    assert_eq!(two.stdout, eight.stdout);

    let args = [
        "search", "--n", "2", "--m", "2", "--trials", "3", "--seed", "7", "--format", "json",
    ];
    let one = run_env(&args, &[("LATSTAB_THREADS", "1")]);
    let eight = run_env(&args, &[("LATSTAB_THREADS", "8")]);
    assert_eq!(one.code, 0, "{}", one.stderr);
    assert_eq!(one.stdout, eight.stdout);

    let bad = run_env(&["identities", "--trials", "1"], &[("LATSTAB_THREADS", "zero")]);
    assert_eq!(bad.code, 2);
}

#[test]
fn timing_flag_is_opt_in() {
    let quiet = run(&["identities", "--trials", "2", "--seed", "1"]);
    assert!(!quiet.stdout.contains("timing_ms"));
    let timed = run(&["identities", "--trials", "2", "--seed", "1", "--timing"]);
    assert!(timed.stdout.contains("timing_ms"));

    let json = run(&["identities", "--trials", "2", "--seed", "1", "--format", "json"]);
    let doc: Value = serde_json::from_str(&json.stdout).unwrap();
    assert!(doc["timing_ms"].is_null());
}
