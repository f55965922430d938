//! End-to-end scenario runs through the public entry points.

use std::fs;
use std::path::Path;

use photon_kspace::scenario::{run_scenario, validate_config, ScenarioConfig, ScenarioKind, MANIFEST_NAME};
use photon_kspace::Error;
use sha2::{Digest, Sha256};

fn example(name: &str, dir: &Path) -> ScenarioConfig {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../scenarios").join(format!("{name}.toml"));
    let raw = fs::read_to_string(&path).unwrap();
    let mut cfg = validate_config(&raw).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    cfg.output_dir = dir.to_path_buf();
    cfg
}

fn column(csv: &str, name: &str) -> Vec<f64> {
    let mut lines = csv.lines();
    let idx = lines.next().unwrap().split(',').position(|h| h == name).unwrap();
    lines.map(|l| l.split(',').nth(idx).unwrap().parse().unwrap()).collect()
}

#[test]
fn every_example_config_validates() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../scenarios");
    let mut seen = Vec::new();
    for entry in fs::read_dir(dir).unwrap() {
        let path = entry.unwrap().path();
        if path.extension().is_some_and(|e| e == "toml") {
            let cfg = validate_config(&fs::read_to_string(&path).unwrap())
                .unwrap_or_else(|e| panic!("{}: {e}", path.display()));
            seen.push(cfg.scenario);
        }
    }
    for kind in ScenarioKind::ALL {
        assert!(seen.contains(&kind), "no example for {}", kind.name());
    }
}

#[test]
fn one_dimensional_packet_saturates_the_bound() {
    let tmp = tempfile::tempdir().unwrap();
    let summary = run_scenario(&example("packet_uncertainty", tmp.path())).unwrap();
    assert!(summary.manifest.warnings.is_empty(), "{:?}", summary.manifest.warnings);
    let csv = fs::read_to_string(tmp.path().join("time_series.csv")).unwrap();
    let products = column(&csv, "product");
    assert_eq!(products.len(), 7);
    for p in products {
        assert!((p - 0.5).abs() < 1e-3, "product {p}");
    }
    let widths = column(&csv, "delta_r");
    assert!(widths.windows(2).all(|w| w[1] >= w[0]));
}

#[test]
fn spin_audit_report_is_exact() {
    let tmp = tempfile::tempdir().unwrap();
    let summary = run_scenario(&example("spin_algebra_audit", tmp.path())).unwrap();
    assert!(summary.failed_checks.is_empty());
    let report: serde_json::Value = serde_json::from_str(&fs::read_to_string(tmp.path().join("spin_audit.json")).unwrap()).unwrap();
    assert_eq!(report["passed"], true);
    for key in ["commutator", "hermiticity", "eigenvalues", "casimir"] {
        assert!(report[key].as_f64().unwrap() < 1e-14, "{key}");
    }
}

#[test]
fn crosscheck_suite_passes_and_manifest_matches_files() {
    let tmp = tempfile::tempdir().unwrap();
    let summary = run_scenario(&example("crosscheck_suite", tmp.path())).unwrap();
    assert!(summary.failed_checks.is_empty(), "{:?}", summary.failed_checks);
    let report: serde_json::Value = serde_json::from_str(&fs::read_to_string(tmp.path().join("crosscheck.json")).unwrap()).unwrap();
    assert!(report["checks"].as_array().is_some_and(|c| !c.is_empty()));

    let manifest: serde_json::Value = serde_json::from_str(&fs::read_to_string(tmp.path().join(MANIFEST_NAME)).unwrap()).unwrap();
    assert_eq!(manifest["scenario"], "crosscheck_suite");
    assert_eq!(manifest["seed"], 7);
    for entry in manifest["files"].as_array().unwrap() {
        let bytes = fs::read(tmp.path().join(entry["path"].as_str().unwrap())).unwrap();
        assert_eq!(entry["bytes"].as_u64().unwrap() as usize, bytes.len());
        assert_eq!(entry["sha256"].as_str().unwrap(), hex::encode(Sha256::digest(&bytes)));
    }
}

#[test]
fn a_locked_output_directory_is_refused() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = example("spin_algebra_audit", tmp.path());
    fs::write(tmp.path().join(".photon-kspace.lock"), "1\n").unwrap();
    match run_scenario(&cfg) {
        Err(Error::Structural(msg)) => assert!(msg.contains("in use"), "{msg}"),
        other => panic!("expected a structural error, got {other:?}"),
    }
    fs::remove_file(tmp.path().join(".photon-kspace.lock")).unwrap();
    run_scenario(&cfg).unwrap();
    assert!(!tmp.path().join(".photon-kspace.lock").exists());
}

#[test]
fn minimal_config_takes_defaults() {
    let cfg = validate_config("scenario = \"spin_algebra_audit\"\n").unwrap();
    assert_eq!(cfg.seed, 0);
    assert!(cfg.grid.is_none() && cfg.packet.is_none());
    assert_eq!(cfg.svea.gamma_ratios.len(), 5);
}

#[test]
fn parse_errors_carry_a_position() {
    let raw = "scenario = \"free_evolution\"\n[grid]\nn = = 4\n";
    match validate_config(raw) {
        Err(Error::Validation(v)) => {
            assert_eq!(v.len(), 1);
            assert_eq!(v[0].line, Some(3));
            assert!(v[0].column.is_some());
        }
        other => panic!("expected a parse error, got {:?}", other.map(|_| ())),
    }
}

#[test]
fn every_problem_is_reported_at_once() {
    let raw = "scenario = \"observables_report\"\n[grid]\ndim = 5\nn = 7\nbox_length = -1.0\n";
    match validate_config(raw) {
        Err(Error::Validation(v)) => {
            let fields: Vec<_> = v.iter().map(|v| v.field.as_str()).collect();
            for f in ["grid.dim", "grid.n", "grid.box_length", "packet", "times"] {
                assert!(fields.contains(&f), "{f} missing from {fields:?}");
            }
        }
        other => panic!("expected validation errors, got {:?}", other.map(|_| ())),
    }
}
